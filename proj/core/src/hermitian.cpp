#include "h3green/hermitian.hpp"

#include "h3green/arith.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace h3green {

namespace {

// Integer coordinates of sqrt(D)*b for b in the inverse different.
std::pair<Int, Int> different_coords(const QuadInt& b) {
    Rat D(b.disc());
    Rat u = -D * b.x() + b.y() * (D - D * D) / 2;
    Rat v = 2 * b.x() + b.y() * D;
    if (!is_integer(u) || !is_integer(v)) throw Error("different_coords: not in inverse different");
    return {Int(u.get_num()), Int(v.get_num())};
}

std::string form_key(const HermForm& x) {
    std::ostringstream os;
    os << x.a.get_str() << '|' << x.c.get_str() << '|' << x.b.x().get_str() << '|'
       << x.b.y().get_str();
    return os.str();
}

// Lexicographic canonical order: (a, norm b, trace b, y of b, c).
bool canonical_less(const HermForm& u, const HermForm& v) {
    if (u.a != v.a) return u.a < v.a;
    Rat nu = u.b.norm(), nv = v.b.norm();
    if (nu != nv) return nu < nv;
    Rat tu = u.b.trace(), tv = v.b.trace();
    if (tu != tv) return tu < tv;
    if (u.b.y() != v.b.y()) return u.b.y() < v.b.y();
    return u.c < v.c;
}

Int round_rat(const Rat& q) { return floor_div(Int(2 * q.get_num() + q.get_den()), Int(2 * q.get_den())); }

}  // namespace

HermForm reduce_form(HermForm x) {
    if (!x.positive_definite()) throw Error("reduce_form: needs a positive definite form");
    const Int D = x.disc();
    Rat m = x.det();
    for (int iter = 0; iter < 400; ++iter) {
        bool changed = false;
        // translate b to the smallest representative mod a*O_D
        Rat tx = -x.b.x() / x.a, ty = -x.b.y() / x.a;
        Int y0 = round_rat(ty);
        Int x0 = round_rat(tx + (ty - Rat(y0)) * Rat(D) / 2);
        QuadInt bestb = x.b;
        for (long dy = -1; dy <= 1; ++dy) {
            for (long dx = -1; dx <= 1; ++dx) {
                QuadInt z(Rat(x0) + dx, Rat(y0) + dy, D);
                QuadInt cand = x.b + z * x.a;
                Rat nc = cand.norm(), nb = bestb.norm();
                bool better = nc < nb ||
                              (nc == nb && (cand.trace() < bestb.trace() ||
                                            (cand.trace() == bestb.trace() &&
                                             (cand.y() < bestb.y() ||
                                              (cand.y() == bestb.y() && cand.x() < bestb.x())))));
                if (better) bestb = cand;
            }
        }
        if (!(bestb == x.b)) {
            x.b = bestb;
            x.c = (m + x.b.norm()) / x.a;
            changed = true;
        }
        if (x.c < x.a) {
            x = HermForm{x.c, x.a, -x.b.conj()};  // the inversion swap
            changed = true;
        }
        if (!changed) return x;
    }
    throw Error("reduce_form: did not stabilize");
}

bool HermForm::primitive() const {
    if (!in_dual()) return false;
    auto [u, v] = different_coords(b);
    Int g = gcd(gcd(Int(a.get_num()), Int(c.get_num())), gcd(u, v));
    return abs(g) == 1;
}

Rat bilinear(const HermForm& x, const HermForm& y) {
    return x.a * y.c + y.a * x.c - (x.b * y.b.conj()).trace();
}

GammaElement GammaElement::identity(const Int& D) {
    return {QuadInt::one(D), QuadInt::zero(D), QuadInt::zero(D), QuadInt::one(D)};
}

GammaElement GammaElement::shift(const QuadInt& z) {
    const Int& D = z.disc();
    return {QuadInt::one(D), z, QuadInt::zero(D), QuadInt::one(D)};
}

GammaElement GammaElement::inversion(const Int& D) {
    return {QuadInt::zero(D), -QuadInt::one(D), QuadInt::one(D), QuadInt::zero(D)};
}

GammaElement GammaElement::operator*(const GammaElement& o) const {
    return {e11 * o.e11 + e12 * o.e21, e11 * o.e12 + e12 * o.e22, e21 * o.e11 + e22 * o.e21,
            e21 * o.e12 + e22 * o.e22};
}

GammaElement GammaElement::inverse() const {
    // det = 1, so [[e22, -e12], [-e21, e11]]
    return {e22, -e12, -e21, e11};
}

bool GammaElement::is_unit_det() const {
    QuadInt det = e11 * e22 - e12 * e21;
    return det == QuadInt::one(e11.disc());
}

HermForm GammaElement::apply(const HermForm& x) const {
    const Int& D = e11.disc();
    QuadInt a(x.a, 0, D), c(x.c, 0, D);
    QuadInt bb = x.b.conj();
    // M = gamma * X
    QuadInt m11 = e11 * a + e12 * bb;
    QuadInt m12 = e11 * x.b + e12 * c;
    QuadInt m21 = e21 * a + e22 * bb;
    QuadInt m22 = e21 * x.b + e22 * c;
    // N = M * conj(gamma)^t
    QuadInt n11 = m11 * e11.conj() + m12 * e12.conj();
    QuadInt n12 = m11 * e21.conj() + m12 * e22.conj();
    QuadInt n22 = m21 * e21.conj() + m22 * e22.conj();
    if (n11.y() != 0 || n22.y() != 0) throw Error("GammaElement::apply: non-hermitian result");
    return {n11.x(), n22.x(), n12};
}

Point3 GammaElement::apply(const Point3& p) const {
    std::complex<double> a = e11.to_complex(), b = e12.to_complex(), c = e21.to_complex(),
                         d = e22.to_complex();
    std::complex<double> cz_d = c * p.z + d;
    double n = std::norm(cz_d) + std::norm(c) * p.r * p.r;
    std::complex<double> zn = (a * p.z + b) * std::conj(cz_d) + a * std::conj(c) * p.r * p.r;
    return {zn / n, p.r / n};
}

std::vector<GammaElement> default_generators(const Int& D) {
    return {GammaElement::shift(QuadInt::one(D)), GammaElement::shift(QuadInt::omega(D)),
            GammaElement::inversion(D)};
}

Rat ClassList::trace_of_one() const {
    Rat s = 0;
    for (const auto& r : reps) s += Rat(1, r.stabilizer_order);
    return s;
}

std::string ClassList::to_json() const {
    std::ostringstream os;
    os << "{\"disc\":" << disc.get_str() << ",\"det\":\"" << det.get_str() << "\""
       << ",\"coset\":" << coset << ",\"primitive\":" << (primitive ? "true" : "false")
       << ",\"classes\":[";
    for (size_t i = 0; i < reps.size(); ++i) {
        if (i) os << ',';
        const auto& r = reps[i];
        os << "{\"a\":\"" << r.form.a.get_str() << "\",\"b\":[\"" << r.form.b.x().get_str()
           << "\",\"" << r.form.b.y().get_str() << "\"],\"c\":\"" << r.form.c.get_str()
           << "\",\"stab\":" << r.stabilizer_order << "}";
    }
    os << "]}";
    return os.str();
}

ClassList enumerate_classes(const Int& D, const Rat& m, int mu, bool primitive_only) {
    ClassList out;
    out.disc = D;
    out.det = m;
    out.coset = mu;
    out.primitive = primitive_only;
    if (m <= 0) throw Error("enumerate_classes: m must be positive");

    DiscGroupField g = discriminant_group_reps(D);
    if (mu < 0 || mu >= (int)g.reps.size()) throw Error("enumerate_classes: bad coset index");
    const QuadInt& bmu = g.reps[mu];

    // m must be congruent to -norm(b_mu) mod Z, else the index set is empty.
    Rat residue = m + bmu.norm();
    if (!is_integer(residue)) return out;

    double md = to_ld(m);
    long a_max = (long)std::ceil(2.0 * std::sqrt(md)) + 2;
    double ad = std::abs((double)D.get_d());
    double rho2 = 0.25 + ad / 16.0 + 0.5;  // covering radius bound of O_D, with slack

    // Box of candidate forms.
    std::vector<HermForm> box;
    for (long av = 1; av <= a_max; ++av) {
        double bound = rho2 * (double)av * (double)av + 1.0;
        long ymax = (long)std::floor(std::sqrt(4.0 * bound / ad)) + 2;
        for (long t = -ymax; t <= ymax; ++t) {
            Rat by = bmu.y() + t;
            // norm(x + y w) = (x + yD/2)^2 + y^2 |D|/4
            double yv = to_ld(by);
            double rest = bound - yv * yv * ad / 4.0;
            if (rest < 0) continue;
            double center = -yv * D.get_d() / 2.0;
            long xlo = (long)std::floor(center - std::sqrt(rest) - to_ld(bmu.x())) - 2;
            long xhi = (long)std::ceil(center + std::sqrt(rest) - to_ld(bmu.x())) + 2;
            for (long s = xlo; s <= xhi; ++s) {
                QuadInt b(bmu.x() + s, by, D);
                Rat cnum = m + b.norm();
                Rat c = cnum / av;
                if (!is_integer(c) || c < 1) continue;
                box.push_back({Rat(av), c, b});
            }
        }
    }
    if (box.empty()) return out;

    // Merge orbits through reduction: the reduced forms of one orbit are
    // connected by move-then-reduce edges, which are directed, so closures
    // from different seeds are merged with a union-find over components.
    const size_t plateau_cap = 20000;
    auto gens = default_generators(D);
    std::vector<GammaElement> moves;
    for (const auto& gen : gens) {
        moves.push_back(gen);
        moves.push_back(gen.inverse());
    }

    std::unordered_map<std::string, int> comp;  // reduced-form key -> component id
    std::vector<int> parent;
    std::vector<HermForm> comp_min;
    auto find_root = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto unite = [&](int i, int j) {
        i = find_root(i);
        j = find_root(j);
        if (i == j) return i;
        if (canonical_less(comp_min[j], comp_min[i])) std::swap(i, j);
        parent[j] = i;
        return i;
    };

    std::vector<int> box_comp(box.size());
    for (size_t i = 0; i < box.size(); ++i) {
        HermForm red = reduce_form(box[i]);
        std::string rkey = form_key(red);
        auto it = comp.find(rkey);
        if (it != comp.end()) {
            box_comp[i] = find_root(it->second);
            continue;
        }
        int id = (int)parent.size();
        parent.push_back(id);
        comp_min.push_back(red);
        comp.emplace(rkey, id);
        std::deque<HermForm> queue{red};
        while (!queue.empty()) {
            HermForm f = queue.front();
            queue.pop_front();
            for (const auto& mv : moves) {
                HermForm g = reduce_form(mv.apply(f));
                std::string k = form_key(g);
                auto git = comp.find(k);
                if (git == comp.end()) {
                    comp.emplace(k, id);
                    if (canonical_less(g, comp_min[find_root(id)])) comp_min[find_root(id)] = g;
                    queue.push_back(g);
                } else if (find_root(git->second) != find_root(id)) {
                    unite(git->second, id);
                }
            }
            if (comp.size() > plateau_cap)
                throw SearchBoxExhausted("enumerate_classes: plateau closure exceeded cap");
        }
        box_comp[i] = find_root(id);
    }

    // The move-then-reduce closure can miss unit-conjugation paths; finish the
    // merge with exact transporter searches between the remaining components.
    {
        std::vector<int> roots;
        for (int i = 0; i < (int)parent.size(); ++i)
            if (find_root(i) == i) roots.push_back(i);
        for (size_t i = 0; i < roots.size(); ++i) {
            for (size_t j = i + 1; j < roots.size(); ++j) {
                int ri = find_root(roots[i]), rj = find_root(roots[j]);
                if (ri == rj) continue;
                if (gamma_transporter(comp_min[ri], comp_min[rj])) unite(ri, rj);
            }
        }
    }

    std::map<std::string, HermForm> orbit_min;
    for (size_t i = 0; i < box.size(); ++i) {
        const HermForm& best = comp_min[find_root(box_comp[i])];
        orbit_min.emplace(form_key(best), best);
    }

    std::vector<HermForm> reps;
    for (const auto& [ckey, form] : orbit_min) {
        if (primitive_only && !form.primitive()) continue;
        reps.push_back(form);
    }
    std::sort(reps.begin(), reps.end(), canonical_less);
    for (const auto& f : reps) out.reps.push_back({f, stabilizer_order(f)});
    return out;
}

namespace {

std::vector<QuadInt> entries_with_norm_below(const Int& D, double bd) {
    std::vector<QuadInt> entries;
    double ad = std::abs((double)D.get_d());
    long ymax = (long)std::floor(std::sqrt(4.0 * bd / ad)) + 1;
    for (long yv = -ymax; yv <= ymax; ++yv) {
        double rest = bd - (double)yv * (double)yv * ad / 4.0;
        if (rest < 0) continue;
        double center = -(double)yv * D.get_d() / 2.0;
        long xlo = (long)std::floor(center - std::sqrt(rest)) - 1;
        long xhi = (long)std::ceil(center + std::sqrt(rest)) + 1;
        for (long xv = xlo; xv <= xhi; ++xv) {
            QuadInt z(Rat(xv), Rat(yv), D);
            if (to_ld(z.norm()) <= bd) entries.push_back(z);
        }
    }
    return entries;
}

// rows (u,v) whose value under the form x is the given target
std::vector<std::pair<QuadInt, QuadInt>> rows_with_value(const HermForm& x,
                                                         const std::vector<QuadInt>& entries,
                                                         const Rat& target) {
    std::vector<std::pair<QuadInt, QuadInt>> rows;
    for (const auto& u : entries) {
        for (const auto& v : entries) {
            Rat val = x.a * u.norm() + x.c * v.norm() + (x.b.conj() * u.conj() * v).trace();
            if (val == target) rows.emplace_back(u, v);
        }
    }
    return rows;
}

GammaElement canonical_sign(GammaElement gm) {
    const QuadInt* e[4] = {&gm.e11, &gm.e12, &gm.e21, &gm.e22};
    for (const QuadInt* q : e) {
        if (q->x() > 0 || (q->x() == 0 && q->y() > 0)) return gm;
        if (q->x() < 0 || (q->x() == 0 && q->y() < 0))
            return GammaElement{-gm.e11, -gm.e12, -gm.e21, -gm.e22};
    }
    return gm;
}

std::string gamma_key(const GammaElement& gm) {
    std::ostringstream os;
    for (const QuadInt* q : {&gm.e11, &gm.e12, &gm.e21, &gm.e22})
        os << q->x().get_str() << ',' << q->y().get_str() << ';';
    return os.str();
}

}  // namespace

long stabilizer_order(const HermForm& x) {
    if (!x.positive_definite() || !x.in_dual())
        throw Error("stabilizer_order: needs a positive definite form in L'");
    const Int& D = x.disc();
    double bd = to_ld((x.a + x.c) * (x.a + x.c) / x.det()) + 0.5;
    auto entries = entries_with_norm_below(D, bd);
    auto rows_a = rows_with_value(x, entries, x.a);
    auto rows_c = rows_with_value(x, entries, x.c);

    std::map<std::string, GammaElement> stab;
    for (const auto& [u, v] : rows_a) {
        for (const auto& [w, t] : rows_c) {
            QuadInt det = u * t - v * w;
            if (det != QuadInt::one(D)) continue;
            GammaElement gm{u, v, w, t};
            if (!(gm.apply(x) == x)) continue;
            gm = canonical_sign(gm);
            stab.emplace(gamma_key(gm), gm);
        }
    }

    // Closure audit.
    for (const auto& [k1, g1] : stab) {
        for (const auto& [k2, g2] : stab) {
            GammaElement p = canonical_sign(g1 * g2);
            if (!stab.count(gamma_key(p)))
                throw ClosureFailure("stabilizer_order: found set not closed");
        }
    }
    return (long)stab.size();
}

std::optional<GammaElement> gamma_transporter(const HermForm& x, const HermForm& y) {
    if (!x.positive_definite() || !y.positive_definite())
        throw Error("gamma_transporter: needs positive definite forms");
    const Int& D = x.disc();
    if (x.det() != y.det()) return std::nullopt;
    double bd = to_ld((x.a + x.c) * (y.a + y.c) / x.det()) + 0.5;
    auto entries = entries_with_norm_below(D, bd);
    auto rows_a = rows_with_value(x, entries, y.a);
    auto rows_c = rows_with_value(x, entries, y.c);
    for (const auto& [u, v] : rows_a) {
        for (const auto& [w, t] : rows_c) {
            QuadInt det = u * t - v * w;
            if (det != QuadInt::one(D)) continue;
            GammaElement gm{u, v, w, t};
            if (gm.apply(x) == y) return gm;
        }
    }
    return std::nullopt;
}

Point3 special_point(const HermForm& x) {
    if (x.det() <= 0 || x.c == 0) throw Error("special_point: needs det > 0 and c != 0");
    std::complex<double> z = x.b.to_complex() / (double)to_ld(x.c);
    double r = std::sqrt((double)to_ld(x.det())) / std::abs((double)to_ld(x.c));
    return {z, r};
}

int chi_D(const HermForm& x) {
    if (!x.in_dual()) return 0;
    const Int& D = x.disc();
    Rat q = x.det();
    if (!is_integer(q)) return 0;
    if (Int(q.get_num()) % abs(D) != 0) return 0;
    // prime discriminant: a single prime divides D
    Int ell = (D == -4 || D == -8) ? Int(2) : abs(D);
    if (!is_integer(x.a) || !is_integer(x.c)) return 0;
    Int a(x.a.get_num()), c(x.c.get_num());
    bool a_ok = (a % ell != 0), c_ok = (c % ell != 0);
    if (a_ok && c_ok) {
        int va = kronecker(D, a), vc = kronecker(D, c);
        if (va != vc) throw Error("chi_D: branch mismatch");
        return va;
    }
    if (a_ok) return kronecker(D, a);
    if (c_ok) return kronecker(D, c);
    return 0;
}

double trace_functional(const std::function<double(const Point3&)>& f, const Int& D, const Rat& m,
                        int mu, TraceVariant variant) {
    ClassList cl = enumerate_classes(D, m, mu, variant == TraceVariant::Primitive);
    double s = 0.0;
    for (const auto& r : cl.reps) {
        double w = 1.0 / (double)r.stabilizer_order;
        if (variant == TraceVariant::Twisted) w *= (double)chi_D(r.form);
        if (w == 0.0) continue;
        s += w * f(special_point(r.form));
    }
    return s;
}

Rat trace_of_one(const Int& D, const Rat& m, int mu, TraceVariant variant) {
    ClassList cl = enumerate_classes(D, m, mu, variant == TraceVariant::Primitive);
    Rat s = 0;
    for (const auto& r : cl.reps) {
        Rat w(1, r.stabilizer_order);
        if (variant == TraceVariant::Twisted) w *= chi_D(r.form);
        s += w;
    }
    return s;
}

namespace {

// All cosets nu with r*nu = mu in the discriminant group.
std::vector<int> cosets_with_multiple(const DiscGroupField& g, const Int& r, int mu) {
    std::vector<int> out;
    for (size_t i = 0; i < g.reps.size(); ++i) {
        QuadInt scaled = g.reps[i] * Rat(r);
        Rat fx = scaled.x() - Rat(rat_floor(scaled.x()));
        Rat fy = scaled.y() - Rat(rat_floor(scaled.y()));
        if (g.reps[mu].x() == fx && g.reps[mu].y() == fy) out.push_back((int)i);
    }
    return out;
}

int moebius(const Int& n) {
    int s = 1;
    for (const auto& [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

}  // namespace

std::vector<TraceTerm> primitive_trace_expansion(const Int& D, const Rat& m, int mu) {
    DiscGroupField g = discriminant_group_reps(D);
    Rat dm = Rat(D) * m;
    if (!is_integer(dm)) throw Error("primitive_trace_expansion: Dm must be integral");
    Int n = abs(Int(dm.get_num()));
    std::vector<TraceTerm> out;
    for (Int r = 1; r * r <= n; ++r) {
        if (n % (r * r) != 0) continue;
        for (int nu : cosets_with_multiple(g, r, mu)) out.push_back({r, nu, Rat(1)});
    }
    return out;
}

std::vector<TraceTerm> primitive_trace_inversion(const Int& D, const Rat& m, int mu) {
    DiscGroupField g = discriminant_group_reps(D);
    Rat dm = Rat(D) * m;
    if (!is_integer(dm)) throw Error("primitive_trace_inversion: Dm must be integral");
    Int n = abs(Int(dm.get_num()));
    std::vector<TraceTerm> out;
    for (Int r = 1; r * r <= n; ++r) {
        if (n % (r * r) != 0) continue;
        int mb = moebius(r);
        if (mb == 0) continue;
        for (int nu : cosets_with_multiple(g, r, mu)) out.push_back({r, nu, Rat(mb)});
    }
    return out;
}

}  // namespace h3green
