#include "h3green/hyperbolic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace h3green {

double cosh_dist(const Point3& p1, const Point3& p2) {
    double dz = std::norm(p1.z - p2.z);
    return (dz + p1.r * p1.r + p2.r * p2.r) / (2.0 * p1.r * p2.r);
}

double phi_s(double t, double s) {
    if (t <= 1.0) throw SingularArgument("phi_s: t must be > 1");
    double root = std::sqrt(t * t - 1.0);
    double u = t + root;
    double up;
    if (s == 2.0) {
        up = u * u;
    } else if (s == 4.0) {
        double u2 = u * u;
        up = u2 * u2;
    } else {
        up = std::pow(u, s);
    }
    return 1.0 / (up * root);
}

bool bilinear_vs_distance_check(const HermForm& x1, const HermForm& x2) {
    if (x1.det() <= 0 || x2.det() <= 0 || x1.c == 0 || x2.c == 0)
        throw Error("bilinear_vs_distance_check: needs positive determinants and c != 0");
    double lhs = to_ld(bilinear(x1, x2));
    double s1 = to_ld(x1.c) > 0 ? 1.0 : -1.0;
    double s2 = to_ld(x2.c) > 0 ? 1.0 : -1.0;
    double rhs = 2.0 * s1 * s2 * std::sqrt(to_ld(x1.det()) * to_ld(x2.det())) *
                 cosh_dist(special_point(x1), special_point(x2));
    double scale = std::max(1.0, std::abs(lhs));
    return std::abs(lhs - rhs) <= 1e-10 * scale;
}

namespace {

// Elements x + y*omega_D of O_D in 64-bit coordinates.
struct OElem {
    long long x, y;
};

struct RingCtx {
    long long D;        // discriminant (negative)
    long long k;        // omega^2 = D*omega + k, k = (D - D^2)/4
    double re_omega;    // D/2
    double im_omega;    // sqrt(|D|)/2

    OElem mul(OElem a, OElem b) const {
        return {a.x * b.x + a.y * b.y * k, a.x * b.y + a.y * b.x + a.y * b.y * D};
    }
    OElem sub(OElem a, OElem b) const { return {a.x - b.x, a.y - b.y}; }
    OElem neg(OElem a) const { return {-a.x, -a.y}; }
    OElem conj(OElem a) const { return {a.x + a.y * D, -a.y}; }
    long long norm(OElem a) const { return a.x * a.x + D * a.x * a.y + a.y * a.y * (D * D - D) / 4; }
    bool is_zero(OElem a) const { return a.x == 0 && a.y == 0; }
    std::complex<double> embed(OElem a) const {
        return {(double)a.x + (double)a.y * re_omega, (double)a.y * im_omega};
    }

    // Nearest-point division, valid for the norm-Euclidean discriminants.
    // N(x + y w) = (x + yD/2)^2 + y^2 |D|/4 is orthogonal in (x + yD/2, y), so
    // round y first and then x in the shifted coordinate.
    OElem div_round(OElem a, OElem b) const {
        long long nb = norm(b);
        OElem num = mul(a, conj(b));
        double tx = (double)num.x / (double)nb;
        double ty = (double)num.y / (double)nb;
        long long y = std::llround(ty);
        long long x = std::llround(tx + (ty - (double)y) * (double)D / 2.0);
        return {x, y};
    }
};

struct ExtGcd {
    OElem g, p, q;  // p*a + q*b = g
};

ExtGcd ext_gcd(const RingCtx& R, OElem a, OElem b) {
    OElem r0 = a, r1 = b;
    OElem p0{1, 0}, p1{0, 0}, q0{0, 0}, q1{1, 0};
    for (int it = 0; it < 128 && !R.is_zero(r1); ++it) {
        OElem q = R.div_round(r0, r1);
        OElem r2 = R.sub(r0, R.mul(q, r1));
        if (!R.is_zero(r2) && R.norm(r2) >= R.norm(r1))
            throw Error("ext_gcd: division failed (non-Euclidean discriminant?)");
        OElem p2 = R.sub(p0, R.mul(q, p1));
        OElem q2 = R.sub(q0, R.mul(q, q1));
        r0 = r1; r1 = r2;
        p0 = p1; p1 = p2;
        q0 = q1; q1 = q2;
    }
    if (!R.is_zero(r1)) throw Error("ext_gcd: did not terminate");
    return {r0, p0, q0};
}

struct KahanAcc {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

struct PartitionResult {
    std::vector<KahanAcc> annuli;
    long terms = 0;
    double min_cosh = 1e300;
};

struct FamilyJob {
    OElem c, d;
};

// Accumulate one bottom-row family: all gamma = T^t gamma0 with cosh <= Tmax.
void accumulate_family(const RingCtx& R, const FamilyJob& fam, const std::complex<double>& z1,
                       double r1, const std::complex<double>& z2, double r2, double s,
                       const std::vector<double>& Ts, PartitionResult& out) {
    ExtGcd e = ext_gcd(R, fam.c, fam.d);
    if (R.norm(e.g) != 1) return;  // not coprime
    // p*c + q*d = g, unit g: a0 = conj(g)*q, b0 = -conj(g)*p gives a0*d - b0*c = 1
    OElem ginv = R.conj(e.g);
    OElem a0 = R.mul(ginv, e.q);
    OElem b0 = R.neg(R.mul(ginv, e.p));

    std::complex<double> cc = R.embed(fam.c), dd = R.embed(fam.d);
    std::complex<double> aa = R.embed(a0), bb = R.embed(b0);
    std::complex<double> czd = cc * z2 + dd;
    double N = std::norm(czd) + std::norm(cc) * r2 * r2;
    double r0 = r2 / N;
    std::complex<double> z0 = ((aa * z2 + bb) * std::conj(czd) + aa * std::conj(cc) * r2 * r2) / N;

    double Tmax = Ts.back();
    double R2 = 2.0 * r1 * r0 * Tmax - r1 * r1 - r0 * r0;
    if (R2 < 0.0) return;
    double Rad = std::sqrt(R2);
    std::complex<double> zeta = z1 - z0;

    double inv2rr = 1.0 / (2.0 * r1 * r0);
    double base = r1 * r1 + r0 * r0;
    const double pi = 3.14159265358979323846;

    long long ty_lo = (long long)std::floor((zeta.imag() - Rad) / R.im_omega);
    long long ty_hi = (long long)std::ceil((zeta.imag() + Rad) / R.im_omega);
    for (long long ty = ty_lo; ty <= ty_hi; ++ty) {
        double dy = (double)ty * R.im_omega - zeta.imag();
        double rest = R2 - dy * dy;
        if (rest < 0.0) continue;
        double w = std::sqrt(rest);
        double xc = zeta.real() - (double)ty * R.re_omega;
        long long tx_lo = (long long)std::ceil(xc - w);
        long long tx_hi = (long long)std::floor(xc + w);
        for (long long tx = tx_lo; tx <= tx_hi; ++tx) {
            double dx = (double)tx - xc;
            double ch = (dx * dx + dy * dy + base) * inv2rr;
            if (ch > Tmax) continue;
            if (ch < out.min_cosh) out.min_cosh = ch;
            if (ch < 1.0 + 1e-9) continue;  // singular approach, flagged by caller
            // smallest ladder cutoff containing ch
            size_t k = 0;
            while (Ts[k] < ch) ++k;
            out.annuli[k].add(pi * phi_s(ch, s));
            ++out.terms;
        }
    }
}

std::vector<OElem> unit_reps_mod_sign(const RingCtx& R) {
    std::vector<OElem> units;
    for (long long y = -2; y <= 2; ++y) {
        for (long long x = -3; x <= 3; ++x) {
            OElem u{x, y};
            if (R.norm(u) == 1) {
                if (u.y > 0 || (u.y == 0 && u.x > 0)) units.push_back(u);
            }
        }
    }
    return units;
}

}  // namespace

static std::vector<FamilyJob> bottom_rows(const RingCtx& R, const std::complex<double>& z2,
                                          double r2, double r1, double Tmax) {
    double Nmax = r2 * (Tmax + std::sqrt(Tmax * Tmax - 1.0)) / r1 + 1.0;
    std::vector<FamilyJob> jobs;
    // c = 0: d must be a unit
    for (const OElem& u : unit_reps_mod_sign(R)) jobs.push_back({OElem{0, 0}, u});

    double cmax2 = Nmax / (r2 * r2);
    long long cy_hi = (long long)std::ceil(std::sqrt(cmax2) / R.im_omega);
    for (long long cy = 0; cy <= cy_hi; ++cy) {
        for (long long cx = -(long long)std::ceil(std::sqrt(cmax2) + std::abs(R.re_omega) * cy) - 1;
             cx <= (long long)std::ceil(std::sqrt(cmax2) + std::abs(R.re_omega) * cy) + 1; ++cx) {
            if (cy == 0 && cx <= 0) continue;  // canonical sign
            OElem c{cx, cy};
            double cn = (double)R.norm(c);
            if (cn * r2 * r2 > Nmax) continue;
            std::complex<double> cc = R.embed(c);
            std::complex<double> center = -cc * z2;
            double rad2 = Nmax - cn * r2 * r2;
            double rad = std::sqrt(rad2);
            long long dy_lo = (long long)std::floor((center.imag() - rad) / R.im_omega);
            long long dy_hi = (long long)std::ceil((center.imag() + rad) / R.im_omega);
            for (long long dy = dy_lo; dy <= dy_hi; ++dy) {
                double py = (double)dy * R.im_omega - center.imag();
                double rest = rad2 - py * py;
                if (rest < 0) continue;
                double w = std::sqrt(rest);
                double xc = center.real() - (double)dy * R.re_omega;
                long long dx_lo = (long long)std::ceil(xc - w) - 1;
                long long dx_hi = (long long)std::floor(xc + w) + 1;
                for (long long dx = dx_lo; dx <= dx_hi; ++dx) {
                    OElem d{dx, dy};
                    std::complex<double> dd = R.embed(d);
                    double N = std::norm(cc * z2 + dd) + cn * r2 * r2;
                    if (N > Nmax) continue;
                    jobs.push_back({c, d});
                }
            }
        }
    }
    return jobs;
}

GreenEval green_function(const Int& D, const Point3& p1, const Point3& p2, double s,
                         const GreenConfig& cfg) {
    if (s <= 1.0) throw Error("green_function: needs s > 1");
    if (p1.r <= 0 || p2.r <= 0) throw Error("green_function: points need r > 0");
    long Dl = to_long(D);
    // the bottom-row enumeration relies on ring division
    if (Dl != -3 && Dl != -4 && Dl != -7 && Dl != -8 && Dl != -11)
        throw Error("green_function: only the norm-Euclidean discriminants are supported");
    RingCtx R{Dl, (Dl - Dl * Dl) / 4, (double)Dl / 2.0, std::sqrt((double)-Dl) / 2.0};

    int L = std::clamp(cfg.ladder, 1, 8);
    std::vector<double> Ts(L);
    for (int k = 0; k < L; ++k) Ts[k] = cfg.T / std::pow(2.0, L - 1 - k);

    std::vector<FamilyJob> jobs = bottom_rows(R, p2.z, p2.r, p1.r, cfg.T);

    const int partitions = 64;
    std::vector<PartitionResult> results(partitions);
    for (auto& r : results) r.annuli.assign(L, {});

    auto work = [&](int part) {
        PartitionResult& res = results[part];
        for (size_t i = part; i < jobs.size(); i += partitions)
            accumulate_family(R, jobs[i], p1.z, p1.r, p2.z, p2.r, s, Ts, res);
    };

    int nthreads = std::max(1, cfg.threads);
    if (nthreads == 1) {
        for (int p = 0; p < partitions; ++p) work(p);
    } else {
        std::vector<std::thread> pool;
        std::atomic_int next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                int p;
                while ((p = next.fetch_add(1)) < partitions) work(p);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> annuli(L, 0.0);
    long terms = 0;
    double min_cosh = 1e300;
    for (const auto& res : results) {
        for (int k = 0; k < L; ++k) annuli[k] += res.annuli[k].s;
        terms += res.terms;
        min_cosh = std::min(min_cosh, res.min_cosh);
    }
    if (min_cosh < 1.0 + 1e-9)
        throw SingularityHit("green_function: orbit point within cosh 1+1e-9 of P1");

    std::vector<double> partial(L);
    double run = 0.0;
    for (int k = 0; k < L; ++k) {
        run += annuli[k];
        partial[k] = run;
    }

    GreenEval out;
    out.truncation_bound = cfg.T;
    out.terms_used = terms;
    out.min_cosh = min_cosh;

    // Tail model A * T^{1-s}, fitted on the outermost annuli.
    auto xval = [&](double T) { return std::pow(T, 1.0 - s); };
    double A = 0.0;
    int fitted = 0;
    for (int k = L - 1; k >= std::max(1, L - 2); --k) {
        double dx = xval(Ts[k - 1]) - xval(Ts[k]);
        if (dx > 0 && annuli[k] > 0) {
            A += annuli[k] / dx;
            ++fitted;
        }
    }
    if (fitted) A /= fitted;
    out.tail_estimate = A * xval(cfg.T);

    if (cfg.extrapolate && L >= 2) {
        // Neville elimination of the T^{1-s} error term at x -> 0.
        std::vector<double> x(L), y(L);
        for (int k = 0; k < L; ++k) {
            x[k] = xval(Ts[k]);
            y[k] = partial[k];
        }
        for (int stage = 1; stage < L; ++stage)
            for (int k = L - 1; k >= stage; --k)
                y[k] = (y[k] * x[k - stage] - y[k - 1] * x[k]) / (x[k - stage] - x[k]);
        out.value = y[L - 1];
        out.extrapolated = true;
    } else {
        out.value = partial[L - 1];
    }
    return out;
}

long orbit_count(const Int& D, const Point3& p1, const Point3& p2, double T) {
    GreenConfig cfg;
    cfg.T = T;
    cfg.ladder = 1;
    GreenEval e = green_function(D, p1, p2, 2.0, cfg);
    return e.terms_used;
}

}  // namespace h3green
