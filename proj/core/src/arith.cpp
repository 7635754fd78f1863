#include "h3green/arith.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace h3green {

std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<Int> divisors(const Int& n) {
    std::vector<Int> out{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t sz = out.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
}

int kronecker(const Int& D, const Int& n) {
    return mpz_kronecker(D.get_mpz_t(), n.get_mpz_t());
}

namespace {

// (a,b)_p for nonzero integers and an odd prime p.
int hilbert_odd_prime(Int a, Int b, const Int& p) {
    int alpha = 0, beta = 0;
    while (a % p == 0) {
        a /= p;
        ++alpha;
    }
    while (b % p == 0) {
        b /= p;
        ++beta;
    }
    // (a,b)_p = (-1/p)^{alpha beta} (u/p)^beta (v/p)^alpha with a = p^alpha u, b = p^beta v
    int s = 1;
    if ((alpha & 1) && (beta & 1) && kronecker(-1, p) == -1) s = -s;
    if (beta & 1) s *= kronecker(a, p);
    if (alpha & 1) s *= kronecker(b, p);
    return s;
}

int hilbert_two(Int a, Int b) {
    int alpha = 0, beta = 0;
    while (a % 2 == 0) {
        a /= 2;
        ++alpha;
    }
    while (b % 2 == 0) {
        b /= 2;
        ++beta;
    }
    long u = to_long(mod_euclid(a, 8));
    long v = to_long(mod_euclid(b, 8));
    // (a,b)_2 = (-1)^{e(u)e(v) + alpha w(v) + beta w(u)},
    // e(u) = (u-1)/2 mod 2, w(u) = (u^2-1)/8 mod 2
    auto e = [](long x) { return ((x - 1) / 2) & 1; };
    auto w = [](long x) { return ((x * x - 1) / 8) & 1; };
    int exp = e(u) * e(v) + (alpha & 1) * w(v) + (beta & 1) * w(u);
    return (exp & 1) ? -1 : 1;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Int& p) {
    if (a == 0 || b == 0) throw Error("hilbert_symbol: zero argument");
    // Square classes only depend on numerator*denominator.
    Int ai = a.get_num() * a.get_den();
    Int bi = b.get_num() * b.get_den();
    if (p == 0) return (ai < 0 && bi < 0) ? -1 : 1;  // real place
    if (p == 2) return hilbert_two(ai, bi);
    if (!is_prime(p)) throw Error("hilbert_symbol: place must be prime or 0");
    return hilbert_odd_prime(ai, bi, p);
}

bool is_fundamental_discriminant(const Int& d) {
    if (d == 1) return true;
    if (d == 0) return false;
    Int m = mod_euclid(d, 4);
    if (m == 1) {
        for (const auto& [p, e] : factorize(d))
            if (e > 1) return false;
        return true;
    }
    if (m != 0) return false;
    Int q = d / 4;
    Int qm = mod_euclid(q, 4);
    if (qm != 2 && qm != 3) return false;
    for (const auto& [p, e] : factorize(q))
        if (e > 1) return false;
    return true;
}

FundDiscFactorization factor_discriminant(const Int& delta, const Int& bad_modulus) {
    if (delta <= 0) throw Error("factor_discriminant: delta must be positive");
    Int m = mod_euclid(delta, 4);
    if (m != 0 && m != 1) throw Error("factor_discriminant: delta must be 0 or 1 mod 4");

    Int core = 1, f = 1;
    for (const auto& [p, e] : factorize(delta)) {
        if (e & 1) core *= p;
        for (int k = 0; k < e / 2; ++k) f *= p;
    }
    Int delta0 = core;
    if (mod_euclid(core, 4) != 1) {
        delta0 = 4 * core;
        if (f % 2 != 0) throw Error("factor_discriminant: internal parity");
        f /= 2;
    }
    FundDiscFactorization out;
    out.delta = delta;
    out.delta0 = delta0;
    out.f = f;
    out.w = 1;
    out.wprime = 1;
    for (const auto& [p, e] : factorize(f)) {
        Int pk = 1;
        for (int k = 0; k < e; ++k) pk *= p;
        if (bad_modulus % p == 0)
            out.wprime *= pk;
        else
            out.w *= pk;
    }
    return out;
}

long double dirichlet_L_at_1(const Int& delta0) {
    if (delta0 == 1) throw Error("dirichlet_L_at_1: delta0 = 1 is the zeta pole");
    if (!is_fundamental_discriminant(delta0)) throw Error("dirichlet_L_at_1: not fundamental");
    const long double pi = 3.141592653589793238462643383279503L;
    long q = to_long(abs(delta0));
    if (delta0 < 0) {
        // L(chi,1) = -pi/|d|^{3/2} * sum chi(a) a
        long double s = 0.0L, comp = 0.0L;
        for (long a = 1; a < q; ++a) {
            long double term = (long double)kronecker(delta0, a) * (long double)a;
            long double y = term - comp;
            long double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        return -pi * s / (powl((long double)q, 1.5L));
    }
    // L(chi,1) = -1/sqrt(d) * sum chi(a) log sin(pi a / d)
    long double s = 0.0L, comp = 0.0L;
    for (long a = 1; a < q; ++a) {
        int chi = kronecker(delta0, a);
        if (chi == 0) continue;
        long double term = (long double)chi * logl(sinl(pi * (long double)a / (long double)q));
        long double y = term - comp;
        long double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return -s / sqrtl((long double)q);
}

long double dirichlet_L_series_oracle(const Int& delta0, int blocks) {
    long q = to_long(abs(delta0));
    // Partial sums over k period blocks decay like L - A/K + O(1/K^2);
    // Richardson in 1/K removes the leading tail.
    auto partial = [&](long K) {
        long double s = 0.0L, comp = 0.0L;
        for (long n = 1; n <= K * q; ++n) {
            int chi = kronecker(delta0, n);
            if (chi == 0) continue;
            long double term = (long double)chi / (long double)n;
            long double y = term - comp;
            long double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        return s;
    };
    long K = blocks;
    long double s1 = partial(K / 4), s2 = partial(K / 2), s3 = partial(K);
    // two Richardson stages in 1/K
    long double r1 = 2.0L * s2 - s1;
    long double r2 = 2.0L * s3 - s2;
    return 2.0L * r2 - r1;
}

long double hurwitz_zeta(long double s, long double x) {
    // Euler-Maclaurin: N shifted terms, integral + midpoint + Bernoulli tail.
    const int N = 40, M = 8;
    // B_{2j}/(2j)!
    static const long double C[M] = {
        1.0L / 12,           -1.0L / 720,          1.0L / 30240,         -1.0L / 1209600,
        1.0L / 47900160.0L,  -5.2841901386874932e-10L, 1.3382536530684679e-11L,
        -3.3896802963225829e-13L};
    long double sum = 0.0L;
    for (int k = 0; k < N; ++k) sum += powl(x + k, -s);
    long double xn = x + N;
    sum += powl(xn, 1.0L - s) / (s - 1.0L);
    sum += 0.5L * powl(xn, -s);
    long double t = s * powl(xn, -s - 1.0L);  // poch(s,1) * xn^{-s-1}
    for (int j = 1; j <= M; ++j) {
        sum += C[j - 1] * t;
        t *= (s + 2 * j - 1) * (s + 2 * j) / (xn * xn);
    }
    return sum;
}

long double riemann_zeta_real(long double s) { return hurwitz_zeta(s, 1.0L); }

long double dirichlet_L_real(const Int& delta0, long double s) {
    if (delta0 == 1) return riemann_zeta_real(s);
    long q = to_long(abs(delta0));
    long double sum = 0.0L;
    for (long a = 1; a <= q; ++a) {
        int chi = kronecker(delta0, a);
        if (chi == 0) continue;
        sum += (long double)chi * hurwitz_zeta(s, (long double)a / (long double)q);
    }
    return sum * powl((long double)q, -s);
}

FundamentalUnit fundamental_unit(const Int& delta0) {
    if (delta0 <= 1) throw Error("fundamental_unit: needs delta0 > 1");
    if (!is_fundamental_discriminant(delta0)) throw Error("fundamental_unit: not fundamental");

    // Continued fraction of sqrt(delta0); convergents p/q give the minimal
    // solution of p^2 - delta0 q^2 = +-1 at the end of the period.
    Int d = delta0;
    Int a0 = isqrt(d);
    Int P = 0, Q = 1, a = a0;
    Int pm1 = 1, p0 = a0, qm1 = 0, q0 = 1;
    Int x = 0, y = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        P = a * Q - P;
        Q = (d - P * P) / Q;
        a = floor_div(a0 + P, Q);
        if (Q == 1) {
            x = p0;
            y = q0;
            break;
        }
        Int p1 = a * p0 + pm1;
        Int q1 = a * q0 + qm1;
        pm1 = p0;
        p0 = p1;
        qm1 = q0;
        q0 = q1;
    }
    if (y == 0) throw Error("fundamental_unit: period not found");
    Int norm1 = x * x - d * y * y;  // +-1
    // The continued fraction yields the minimal integral solution u = x+y√d,
    // i.e. (2x, 2y) in (a + b sqrt(d))/2 coordinates. The fundamental unit of
    // the order may be a proper root of u: its square root when d = 0 mod 4
    // (a even, b odd), or its cube root when d = 5 mod 8 (a, b odd). Detect
    // both candidates and verify them exactly.
    Int X = 2 * x, Y = 2 * y;
    int norm = (norm1 == 1) ? 1 : -1;

    auto consider = [&](const Int& A, const Int& Bv) {
        if (A <= 0 || Bv <= 0) return;
        Int nrm4 = A * A - d * Bv * Bv;
        if (nrm4 != 4 && nrm4 != -4) return;
        if (Bv < Y || (Bv == Y && A < X)) {
            X = A;
            Y = Bv;
            norm = (nrm4 == 4) ? 1 : -1;
        }
    };
    // square root: ((A + B sqrt d)/2)^2 = u forces A^2 = 2x +- 2
    for (int sgn : {-1, +1}) {
        Int asq = 2 * x + sgn * 2;
        if (asq > 0 && is_perfect_square(asq)) {
            Int A = isqrt(asq);
            if (A != 0 && (2 * y) % A == 0) consider(A, 2 * y / A);
        }
    }
    // cube root: A = t + nu/t, B = (t - nu/t)/sqrt(d) for t = u^{1/3}
    {
        long double ux = to_ld(x) + to_ld(y) * sqrtl(to_ld(d));
        long double t = cbrtl(ux);
        long double nu = (long double)((norm1 == 1) ? 1 : -1);
        Int A((long)llroundl(t + nu / t));
        Int Bv((long)llroundl((t - nu / t) / sqrtl(to_ld(d))));
        // verify v^3 = u exactly before considering
        if (A > 0 && Bv > 0) {
            Int vx8 = A * (A * A + 3 * d * Bv * Bv);  // 8 * real part of v^3
            Int vy8 = Bv * (3 * A * A + d * Bv * Bv);
            if (vx8 == 8 * x && vy8 == 8 * y) consider(A, Bv);
        }
    }
    return FundamentalUnit{X, Y, norm};
}

long double log_totally_positive_unit(const Int& delta0) {
    FundamentalUnit u = fundamental_unit(delta0);
    long double xs = strtold(u.x.get_str().c_str(), nullptr);
    long double ys = strtold(u.y.get_str().c_str(), nullptr);
    long double val = (xs + ys * sqrtl(strtold(delta0.get_str().c_str(), nullptr))) / 2.0L;
    long double lg = logl(val);
    return (u.norm == -1) ? 2.0L * lg : lg;
}

Int class_number(const Int& delta0) {
    if (delta0 == 1 || !is_fundamental_discriminant(delta0))
        throw Error("class_number: needs a fundamental discriminant != 1");
    if (delta0 < 0) {
        // count reduced positive forms [a,b,c]: b^2-4ac = delta0, |b| <= a <= c,
        // b >= 0 when |b| = a or a = c
        Int count = 0;
        Int limit = isqrt(abs(delta0) / 3);
        for (Int a = 1; a <= limit; ++a) {
            for (Int b = -a + 1; b <= a; ++b) {
                Int num = b * b - delta0;
                if (num % (4 * a) != 0) continue;
                Int c = num / (4 * a);
                if (c < a) continue;
                if (a == c && b < 0) continue;
                ++count;
            }
        }
        return count;
    }
    FundamentalUnit u = fundamental_unit(delta0);
    long double xs = strtold(u.x.get_str().c_str(), nullptr);
    long double ys = strtold(u.y.get_str().c_str(), nullptr);
    long double eps0 = (xs + ys * sqrtl(strtold(delta0.get_str().c_str(), nullptr))) / 2.0L;
    long double L = dirichlet_L_at_1(delta0);
    long double h = L * sqrtl(strtold(delta0.get_str().c_str(), nullptr)) / (2.0L * logl(eps0));
    long double rounded = roundl(h);
    if (fabsl(h - rounded) >= 0.01L)
        throw RoundingAmbiguous("class_number: analytic value " + std::to_string((double)h) +
                                " not within 0.01 of an integer");
    return Int((long)rounded);
}

}  // namespace h3green
