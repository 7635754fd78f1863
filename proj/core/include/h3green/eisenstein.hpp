#pragma once

#include "h3green/arith.hpp"
#include "h3green/symbolic.hpp"

#include <array>
#include <vector>

namespace h3green {

struct RecurrenceViolation : Error {
    using Error::Error;
};
struct FitFailure : Error {
    using Error::Error;
};

// Positive definite even ternary lattice with its discriminant group.
struct TernaryLattice {
    std::array<std::array<Int, 3>, 3> gram;  // even diagonal, symmetric

    struct Coset {
        std::array<Rat, 3> rep;  // coordinates in the lattice basis
        Int order;               // order in L'/L
        Rat q_mod1;              // Q(rep) mod 1, in [0,1)
    };
    std::vector<Coset> cosets;
    std::vector<int> negation;  // index of -coset
    Int det;                    // = |L'/L|

    static TernaryLattice from_gram(const std::array<std::array<Int, 3>, 3>& gram);
    static TernaryLattice diagonal(const Int& d1, const Int& d2, const Int& d3);

    Rat quadratic_form(const std::array<Rat, 3>& v) const;  // Q(v) = v^t G v / 2
    int coset_index(const std::array<Rat, 3>& v) const;
};

// N_{gamma,n}(a) = #{x in L/aL : Q(x - gamma) + n in a*Z}, by direct count.
long long rep_number(const TernaryLattice& lat, int gamma, const Rat& n, const Int& a);

// Polynomial with rational coefficients, index = power of X.
struct QPoly {
    std::vector<Rat> c;
    Rat eval(const Rat& x) const;
    Rat derivative_at(const Rat& x) const;
    int degree() const { return (int)c.size() - 1; }
};

// Local Euler factor as a polynomial for n != 0:
// L^{(p)}(X) = N(p^w) X^w + (1 - p^2 X) sum_{v < w} N(p^v) X^v, w = 1 + 2 nu_p(2 d_gamma n).
// Also checks the stabilized recurrence N(p^{w+1}) = p^2 N(p^w).
QPoly local_euler_polynomial(const TernaryLattice& lat, int gamma, const Rat& n, const Int& p);

// Exact rational function num/den in X.
struct QRatFunc {
    QPoly num, den;
    Rat eval(const Rat& x) const;  // den(x) != 0 required
    bool den_vanishes_at(const Rat& x) const { return den.eval(x) == 0; }
};

// Local factor (1 - p^2 X) sum_m N(p^m) X^m for the n = 0 / square cases, as an
// exact rational function: either the N-series terminates (anisotropic), or it
// is fitted to a linear recurrence with characteristic roots in {1, p, p^2}.
QRatFunc local_factor_rational_function(const TernaryLattice& lat, int gamma, const Rat& n,
                                        const Int& p);

// sigma_{gamma,n} = sum_{d | w} mu(d) chi_{delta0}(d) d^{-1} sigma_{-1}(w/d).
Rat sigma_gamma_n(const FundDiscFactorization& fact);

enum class EisCase { NonsquareDisc, SquareDisc, ZeroIndex };

struct EisCoefficient {
    Rat index;
    int coset;
    EisCase kind;
    // Exact value of pi * c^+(n,gamma) * sqrt(|L'/L|/2); always a pure rational
    // multiple of a single L-value or log, or zero.
    SymbolicScalar value_times_pi_scaled;
    // sqrt scale: c^+(n,gamma) = value_times_pi_scaled / (pi * sqrt(half_det))
    // where half_det = |L'/L|/2 (integer for the lattices of interest).
    Int half_det;

    // Numeric value of c^+(n,gamma) itself.
    long double numeric() const;
    // value * pi * sqrt(half_det scale) made explicit for callers that cancel
    // the sqrt exactly: requires half_det to be a perfect square.
    SymbolicScalar value_times_pi() const;
};

// Holomorphic-part coefficient c^+(n,gamma) of the weight 1/2 harmonic Maass
// Eisenstein series attached to the rank 3 lattice, n >= 0.
EisCoefficient eis_coefficient_plus(const TernaryLattice& lat, const Rat& n, int gamma);

// c^-(n,gamma) for n < 0, numeric only (its constant basis involves pi^{3/2}).
long double eis_coefficient_minus_numeric(const TernaryLattice& lat, const Rat& n, int gamma);

// Independent oracle: the coefficient formula evaluated at s = 1/2 + eps with
// Richardson extrapolation in eps, entirely through numeric zeta/L machinery.
long double eis_coefficient_numeric_oracle(const TernaryLattice& lat, const Rat& n, int gamma,
                                           long double eps = 1e-4L);

}  // namespace h3green
