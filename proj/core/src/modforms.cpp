#include "h3green/modforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace h3green {

namespace {

Rat reduce_mod1(const Rat& q) { return q - Rat(rat_floor(q)); }

Rat binom_rat(const Rat& top, int j) {
    Rat r = 1;
    for (int i = 0; i < j; ++i) r *= (top - i) / Rat(i + 1);
    return r;
}

std::optional<Rat> as_rational(const SymbolicScalar& s) {
    if (s.is_zero()) return Rat(0);
    if (s.terms().size() == 1) {
        const auto& [t, c] = *s.terms().begin();
        if (t.kind == SymbolicScalar::Kind::One) return c;
    }
    return std::nullopt;
}

SymbolicScalar mul_symbolic(const SymbolicScalar& a, const SymbolicScalar& b) {
    if (auto r = as_rational(a)) return b * *r;
    if (auto r = as_rational(b)) return a * *r;
    throw Error("QSeries: product of two non-rational symbolic values leaves the basis");
}

}  // namespace

DiscGroup DiscGroup::from_gram(const std::vector<std::vector<Int>>& gram) {
    DiscGroup g;
    g.gram = gram;
    size_t n = gram.size();
    // determinant by fraction-free elimination on rationals
    {
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m[i][j] = Rat(gram[i][j]);
        Rat det = 1;
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (piv < n && m[piv][col] == 0) ++piv;
            if (piv == n) throw Error("DiscGroup: singular gram");
            if (piv != col) {
                std::swap(m[piv], m[col]);
                det = -det;
            }
            det *= m[col][col];
            for (size_t r = col + 1; r < n; ++r) {
                Rat f = m[r][col] / m[col][col];
                for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            }
        }
        Int d(det.get_num());
        g.det_abs = abs(d);
    }
    long d = to_long(g.det_abs);
    // scan (1/d) Z^n / Z^n for dual vectors; fine for the small groups used here
    std::vector<long> idx(n, 0);
    while (true) {
        std::vector<Rat> v(n);
        for (size_t i = 0; i < n; ++i) {
            v[i] = Rat(idx[i], d);
            v[i].canonicalize();
        }
        bool dual = true;
        for (size_t r = 0; r < n && dual; ++r) {
            Rat s = 0;
            for (size_t c = 0; c < n; ++c) s += Rat(gram[r][c]) * v[c];
            if (!is_integer(s)) dual = false;
        }
        if (dual) {
            g.reps.push_back(v);
            Int ord = 1;
            for (const auto& q : v) ord = lcm(ord, Int(q.get_den()));
            g.orders.push_back(ord);
            g.q_mod1.push_back(reduce_mod1(g.quadratic_form(v)));
        }
        size_t pos = 0;
        while (pos < n && ++idx[pos] == d) idx[pos++] = 0;
        if (pos == n) break;
    }
    if ((long)g.reps.size() != d) throw Error("DiscGroup: coset count mismatch");
    g.negation.resize(g.reps.size());
    for (size_t i = 0; i < g.reps.size(); ++i) {
        std::vector<Rat> neg(n);
        for (size_t r = 0; r < n; ++r) neg[r] = reduce_mod1(-g.reps[i][r]);
        g.negation[i] = g.coset_index(neg);
    }
    return g;
}

Rat DiscGroup::quadratic_form(const std::vector<Rat>& v) const {
    Rat s = 0;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) s += v[i] * v[j] * Rat(gram[i][j]);
    return s / 2;
}

int DiscGroup::coset_index(const std::vector<Rat>& v) const {
    std::vector<Rat> red(v.size());
    for (size_t i = 0; i < v.size(); ++i) red[i] = reduce_mod1(v[i]);
    for (size_t i = 0; i < reps.size(); ++i)
        if (reps[i] == red) return (int)i;
    throw Error("DiscGroup: coset not found");
}

void QSeries::add_term(int coset, const Rat& expo, const SymbolicScalar& v) {
    if (v.is_zero()) return;
    auto key = std::make_pair(coset, expo);
    auto it = terms.find(key);
    if (it == terms.end())
        terms.emplace(key, v);
    else {
        it->second += v;
        if (it->second.is_zero()) terms.erase(it);
    }
}

SymbolicScalar QSeries::coeff(int coset, const Rat& expo) const {
    auto it = terms.find({coset, expo});
    return it == terms.end() ? SymbolicScalar() : it->second;
}

QSeries QSeries::derivative(int times) const {
    QSeries out = *this;
    out.terms.clear();
    for (const auto& [key, val] : terms) {
        Rat factor = 1;
        for (int i = 0; i < times; ++i) factor *= key.second;
        out.add_term(key.first, key.second, val * factor);
    }
    return out;
}

std::string QSeries::to_json() const {
    std::ostringstream os;
    os << "{\"gram\":[";
    if (group) {
        for (size_t i = 0; i < group->gram.size(); ++i) {
            if (i) os << ',';
            os << '[';
            for (size_t j = 0; j < group->gram[i].size(); ++j) {
                if (j) os << ',';
                os << group->gram[i][j].get_str();
            }
            os << ']';
        }
    }
    os << "],\"rep\":\"" << (rep == Rep::Rho ? "rho" : "rho_bar") << "\",\"weight\":\""
       << weight.get_str() << "\",\"terms\":[";
    bool first = true;
    for (const auto& [key, val] : terms) {
        if (!first) os << ',';
        first = false;
        os << "{\"coset\":" << key.first << ",\"exp\":\"" << key.second.get_str()
           << "\",\"value\":\"" << val.str() << "\"}";
    }
    os << "]}";
    return os.str();
}

namespace {

// Gram matrix of the hermitian lattice L in the basis
// e1 = [a=1], e2 = [c=1], e3 = [b=1], e4 = [b=omega].
std::array<std::array<Int, 4>, 4> hermitian_gram(const Int& D) {
    std::array<std::array<Int, 4>, 4> G{};
    G[0][1] = G[1][0] = 1;
    G[2][2] = -2;
    G[2][3] = G[3][2] = -D;
    G[3][3] = -(D * D - D) / 2;
    return G;
}

std::array<Rat, 4> form_coords(const HermForm& x) {
    return {x.a, x.c, x.b.x(), x.b.y()};
}

// Unimodular column operations bringing the integer row k to (g,0,0,0);
// returns the 4x4 transform U with k*U = (g,0,0,0).
std::array<std::array<Int, 4>, 4> kernel_transform(std::array<Int, 4> k) {
    std::array<std::array<Int, 4>, 4> U{};
    for (int i = 0; i < 4; ++i) U[i][i] = 1;
    for (int j = 1; j < 4; ++j) {
        if (k[j] == 0) continue;
        // combine columns 0 and j
        Int g, p, q;
        mpz_gcdext(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t(), k[0].get_mpz_t(),
                   k[j].get_mpz_t());
        Int a = k[0] / g, b = k[j] / g;
        // new col0 = p*col0 + q*colj ; new colj = -b*col0 + a*colj
        for (int r = 0; r < 4; ++r) {
            Int c0 = U[r][0], cj = U[r][j];
            U[r][0] = p * c0 + q * cj;
            U[r][j] = -b * c0 + a * cj;
        }
        Int k0 = k[0], kj = k[j];
        k[0] = p * k0 + q * kj;
        k[j] = -b * k0 + a * kj;
    }
    return U;
}

// Greedy pairwise reduction of a rank 3 positive definite basis; good enough
// to land the example lattices on their diagonal Gram forms.
void reduce_basis(std::array<std::array<Int, 4>, 3>& basis,
                  const std::array<std::array<Int, 4>, 4>& G) {
    auto dot = [&](const std::array<Int, 4>& u, const std::array<Int, 4>& v) {
        Int s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += u[i] * G[i][j] * v[j];
        return s;
    };
    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ < 64) {
        changed = false;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                Int nii = -dot(basis[i], basis[i]);  // positive in N^-
                Int nij = -dot(basis[i], basis[j]);
                Int njj = -dot(basis[j], basis[j]);
                if (njj == 0) continue;
                // minimize |v_i + t v_j|
                Int t = -floor_div(2 * nij + njj, 2 * njj);
                if (t != 0) {
                    Int newn = nii + 2 * t * nij + t * t * njj;
                    if (newn < nii) {
                        for (int r = 0; r < 4; ++r) basis[i][r] += t * basis[j][r];
                        changed = true;
                    }
                }
            }
        }
        // sort by norm descending (largest first, matching the example labels)
        std::sort(basis.begin(), basis.end(),
                  [&](const std::array<Int, 4>& u, const std::array<Int, 4>& v) {
                      return -dot(u, u) > -dot(v, v);
                  });
    }
}

DiscGroup product_group(const DiscGroup& a, const DiscGroup& b,
                        const std::vector<Rat>& q_b_ambient) {
    DiscGroup g;
    size_t na = a.reps.empty() ? 0 : a.reps[0].size();
    size_t nb = b.reps.empty() ? 0 : b.reps[0].size();
    g.det_abs = a.det_abs * b.det_abs;
    g.gram.assign(na + nb, std::vector<Int>(na + nb, 0));
    for (size_t i = 0; i < na; ++i)
        for (size_t j = 0; j < na; ++j) g.gram[i][j] = a.gram[i][j];
    for (size_t i = 0; i < nb; ++i)
        for (size_t j = 0; j < nb; ++j) g.gram[na + i][na + j] = -b.gram[i][j];
    for (size_t i = 0; i < a.reps.size(); ++i) {
        for (size_t j = 0; j < b.reps.size(); ++j) {
            std::vector<Rat> v;
            v.insert(v.end(), a.reps[i].begin(), a.reps[i].end());
            v.insert(v.end(), b.reps[j].begin(), b.reps[j].end());
            g.reps.push_back(v);
            g.orders.push_back(lcm(a.orders[i], b.orders[j]));
            g.q_mod1.push_back(reduce_mod1(a.q_mod1[i] + q_b_ambient[j]));
        }
    }
    g.negation.resize(g.reps.size());
    size_t nbg = b.reps.size();
    for (size_t i = 0; i < a.reps.size(); ++i)
        for (size_t j = 0; j < nbg; ++j)
            g.negation[i * nbg + j] = (size_t)a.negation[i] * nbg + b.negation[j];
    return g;
}

}  // namespace

SplittingData split_lattice(const HermForm& x0) {
    if (!x0.in_dual() || x0.det() <= 0) throw Error("split_lattice: x0 must be positive in L'");
    if (!x0.primitive()) throw NotPrimitive("split_lattice: x0 not primitive");
    const Int& D = x0.disc();

    SplittingData s;
    s.disc = D;
    s.x0 = x0;

    auto G = hermitian_gram(D);
    auto v0 = form_coords(x0);

    // pairing functional k = G * v0, integral since x0 is dual
    std::array<Int, 4> k;
    for (int r = 0; r < 4; ++r) {
        Rat kr = 0;
        for (int c = 0; c < 4; ++c) kr += Rat(G[r][c]) * v0[c];
        if (!is_integer(kr)) throw Error("split_lattice: x0 not in dual lattice");
        k[r] = Int(kr.get_num());
    }

    auto U = kernel_transform(k);
    std::array<std::array<Int, 4>, 3> nbasis;
    for (int j = 1; j < 4; ++j)
        for (int r = 0; r < 4; ++r) nbasis[j - 1][r] = U[r][j];
    reduce_basis(nbasis, G);

    std::array<std::array<Int, 3>, 3> ngram{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Int sgr = 0;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) sgr += nbasis[i][r] * G[r][c] * nbasis[j][c];
            ngram[i][j] = -sgr;  // N^- is positive definite
        }
    s.n_minus = TernaryLattice::from_gram(ngram);

    // P = Z * (d * x0), d the order of the coset of x0
    Int d = 1;
    for (const auto& q : v0) d = lcm(d, Int(q.get_den()));
    Rat pg = 2 * Rat(d) * Rat(d) * x0.det();
    if (!is_integer(pg)) throw Error("split_lattice: P gram not integral");
    s.p_gram = Int(pg.get_num());
    s.p_group = DiscGroup::from_gram({{s.p_gram}});

    // determinant identity det(P) det(N) = |det(L)| [L : P+N]^2
    {
        Int lhs = s.p_gram * s.n_minus.det;
        Int rhs0 = abs(D);
        if (lhs % rhs0 != 0 || !is_perfect_square(lhs / rhs0))
            throw Error("split_lattice: determinant identity violated");
    }

    // joint discriminant group as a product; ambient Q on the N part is -Q(N^-)
    DiscGroup ngroup;
    ngroup.gram.assign(3, std::vector<Int>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) ngroup.gram[i][j] = s.n_minus.gram[i][j];
    ngroup.det_abs = s.n_minus.det;
    std::vector<Rat> q_ambient;
    for (const auto& c : s.n_minus.cosets) {
        ngroup.reps.push_back({c.rep[0], c.rep[1], c.rep[2]});
        ngroup.orders.push_back(c.order);
        ngroup.q_mod1.push_back(c.q_mod1);
        q_ambient.push_back(reduce_mod1(-c.q_mod1));
    }
    ngroup.negation = s.n_minus.negation;
    s.n_group = ngroup;
    s.joint = product_group(s.p_group, ngroup, q_ambient);

    // fiber: which joint cosets lie in L'/(P+N), and their L'/L image
    DiscGroupField field = discriminant_group_reps(D);
    size_t np = s.p_group.reps.size(), nn = ngroup.reps.size();
    s.joint_index.assign(np, std::vector<int>(nn));
    s.fiber_image.assign(np * nn, -1);
    for (size_t i = 0; i < np; ++i) {
        for (size_t j = 0; j < nn; ++j) {
            s.joint_index[i][j] = (int)(i * nn + j);
            std::array<Rat, 4> w{};
            Rat alpha = s.p_group.reps[i][0];  // multiple of d*x0
            for (int r = 0; r < 4; ++r) w[r] = alpha * Rat(d) * v0[r];
            for (int b = 0; b < 3; ++b)
                for (int r = 0; r < 4; ++r) w[r] += ngroup.reps[j][b] * Rat(nbasis[b][r]);
            bool in_dual = true;
            for (int r = 0; r < 4 && in_dual; ++r) {
                Rat pr = 0;
                for (int c = 0; c < 4; ++c) pr += Rat(G[r][c]) * w[c];
                if (!is_integer(pr)) in_dual = false;
            }
            if (!in_dual) continue;
            // image in L'/L is carried by the b-part mod O_D
            QuadInt b(reduce_mod1(w[2]), reduce_mod1(w[3]), D);
            s.fiber_image[i * nn + j] = field.index_of(b);
        }
    }
    return s;
}

DiscGroup hermitian_disc_group(const Int& D) {
    DiscGroupField field = discriminant_group_reps(D);
    DiscGroup g;
    g.det_abs = abs(D);
    g.gram = {{-2, -D}, {-D, -(D * D - D) / 2}};
    for (const auto& r : field.reps) {
        g.reps.push_back({r.x(), r.y()});
        g.orders.push_back(lcm(Int(r.x().get_den()), Int(r.y().get_den())));
        Rat q = -r.norm();
        g.q_mod1.push_back(q - Rat(rat_floor(q)));
    }
    g.negation = field.negation;
    return g;
}

QSeries theta_unary_half(const DiscGroup& p_group, const Int& p_gram, const Rat& cap) {
    QSeries th;
    th.group = &p_group;
    th.rep = Rep::Rho;
    th.weight = Rat(1, 2);
    long twoN = to_long(p_gram);
    Rat bound = cap + 1;  // guard band
    long tmax = (long)std::ceil(std::sqrt(to_ld(bound) * 2.0 * (double)twoN) / (double)twoN) + 2;
    for (long kk = 0; kk < twoN; ++kk) {
        for (long t = -tmax; t <= tmax; ++t) {
            long nn = twoN * t + kk;
            Rat e(nn * nn, 2 * twoN);  // Q((t + k/2N) v) = n^2/(4N), (v,v) = 2N
            e.canonicalize();
            if (e > bound) continue;
            th.add_term((int)kk, e, SymbolicScalar::rational(1));
        }
    }
    return th;
}

QSeries theta_unary_threehalf(const Int& two_N, const Rat& cap, const DiscGroup& group) {
    QSeries th;
    th.group = &group;
    th.rep = Rep::Rho;
    th.weight = Rat(3, 2);
    long twoN = to_long(two_N);
    Rat bound = cap + 1;
    long tmax = (long)std::ceil(std::sqrt(to_ld(bound) * 2.0 * (double)twoN) / (double)twoN) + 2;
    for (long r = 0; r < twoN; ++r) {
        for (long t = -tmax; t <= tmax; ++t) {
            long nn = twoN * t + r;
            Rat e(nn * nn, 2 * twoN);
            e.canonicalize();
            if (e > bound) continue;
            th.add_term((int)r, e, SymbolicScalar::rational(Rat(nn)));
        }
    }
    return th;
}

QSeries restrict_to_sublattice(const QSeries& f_over_L, const SplittingData& s) {
    QSeries out;
    out.group = &s.joint;
    out.rep = f_over_L.rep;
    out.weight = f_over_L.weight;
    out.scaled_by_inv_pi = f_over_L.scaled_by_inv_pi;
    for (const auto& [key, val] : f_over_L.terms) {
        for (size_t j = 0; j < s.fiber_image.size(); ++j) {
            if (s.fiber_image[j] == key.first) out.add_term((int)j, key.second, val);
        }
    }
    return out;
}

QSeries trace_to_superlattice(const QSeries& g_over_K, const SplittingData& s,
                              const DiscGroup& l_group) {
    QSeries out;
    out.group = &l_group;
    out.rep = g_over_K.rep;
    out.weight = g_over_K.weight;
    out.scaled_by_inv_pi = g_over_K.scaled_by_inv_pi;
    for (const auto& [key, val] : g_over_K.terms) {
        int img = s.fiber_image[key.first];
        if (img >= 0) out.add_term(img, key.second, val);
    }
    return out;
}

QSeries rankin_cohen(const QSeries& f, const Rat& k, const QSeries& g, const Rat& l, int n,
                     const std::vector<std::vector<int>>& joint_index,
                     const DiscGroup& out_group) {
    if (f.rep != g.rep) throw Error("rankin_cohen: representation mismatch");
    if (f.scaled_by_inv_pi && g.scaled_by_inv_pi)
        throw Error("rankin_cohen: both inputs carry 1/pi scale");
    QSeries out;
    out.group = &out_group;
    out.rep = f.rep;
    out.weight = k + l + 2 * n;
    out.scaled_by_inv_pi = f.scaled_by_inv_pi || g.scaled_by_inv_pi;

    for (int r = 0; r <= n; ++r) {
        Rat sign = (r % 2 == 0) ? 1 : -1;
        Rat cf = sign * binom_rat(k + n - 1, r) * binom_rat(l + n - 1, n - r);
        if (cf == 0) continue;
        QSeries fd = f.derivative(n - r);
        QSeries gd = g.derivative(r);
        for (const auto& [fk, fv] : fd.terms) {
            for (const auto& [gk, gv] : gd.terms) {
                int joint = joint_index[fk.first][gk.first];
                out.add_term(joint, fk.second + gk.second, mul_symbolic(fv, gv) * cf);
            }
        }
    }
    return out;
}

QSeries rankin_cohen(const QSeries& f, const Rat& k, const QSeries& g, const Rat& l, int n,
                     const SplittingData& s) {
    return rankin_cohen(f, k, g, l, n, s.joint_index, s.joint);
}

SymbolicScalar constant_term(const QSeries& f, const QSeries& g) {
    if (f.rep == g.rep) throw Error("constant_term: pairing needs opposite representations");
    if (f.scaled_by_inv_pi && g.scaled_by_inv_pi)
        throw Error("constant_term: both factors carry 1/pi scale");
    SymbolicScalar ct;
    for (const auto& [fk, fv] : f.terms) {
        SymbolicScalar gv = g.coeff(fk.first, -fk.second);
        if (gv.is_zero()) continue;
        ct += mul_symbolic(fv, gv);
    }
    return ct;
}

std::vector<std::complex<double>> siegel_theta_numeric(const Int& D, std::complex<double> tau,
                                                       const Point3& p) {
    DiscGroupField field = discriminant_group_reps(D);
    std::vector<std::complex<double>> out(field.reps.size(), 0.0);
    double v = tau.imag();
    if (v <= 0) throw Error("siegel_theta_numeric: Im tau must be positive");
    double cutoff = 40.0 / (2.0 * M_PI * v);  // exp(-40) truncation in the majorant

    double r = p.r;
    std::complex<double> z = p.z;
    double s2r = std::sqrt(2.0) * r;
    double wre = D.get_d() / 2.0, wim = std::sqrt(-D.get_d()) / 2.0;

    long box = 14;
    long bden = 2 * to_long(abs(D));
    // b runs over the inverse different: grid (1/bden) with membership test
    std::vector<std::pair<Rat, Rat>> bgrid;
    for (long i = -box * bden; i <= box * bden; ++i) {
        for (long j = -box * bden; j <= box * bden; ++j) {
            Rat bx(i, bden), by(j, bden);
            bx.canonicalize();
            by.canonicalize();
            QuadInt b(bx, by, D);
            if (b.in_inverse_different()) bgrid.emplace_back(bx, by);
        }
    }
    for (long a = -box; a <= box; ++a) {
        for (long c = -box; c <= box; ++c) {
            for (const auto& [bx, by] : bgrid) {
                double bre = to_ld(bx) + to_ld(by) * wre;
                double bim = to_ld(by) * wim;
                std::complex<double> b(bre, bim);
                double q = (double)a * (double)c - std::norm(b);
                double pairing =
                    ((double)a + (double)c * (std::norm(z) + r * r) - 2.0 * (b * std::conj(z)).real()) /
                    s2r;
                double maj = pairing * pairing - q;
                if (maj > cutoff) continue;
                // e(Q u) * exp(-2 pi v ((X,v)^2 - Q))
                double phase = 2.0 * M_PI * q * tau.real();
                double mag = std::exp(-2.0 * M_PI * v * maj);
                int idx =
                    field.index_of(QuadInt(bx - Rat(rat_floor(bx)), by - Rat(rat_floor(by)), D));
                out[idx] += mag * std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }
    double v32 = std::pow(v, 1.5);
    for (auto& x : out) x *= v32;
    return out;
}

}  // namespace h3green
