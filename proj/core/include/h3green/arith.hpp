#pragma once

#include "h3green/rational.hpp"

namespace h3green {

// Generalized Kronecker symbol (D/n), total on all integer pairs.
int kronecker(const Int& D, const Int& n);

// p-adic Hilbert symbol (a,b)_p for nonzero rationals; p = 0 encodes the real place.
int hilbert_symbol(const Rat& a, const Rat& b, const Int& p);

struct FundDiscFactorization {
    Int delta;   // input discriminant
    Int delta0;  // fundamental discriminant, delta = delta0 * f^2
    Int f;
    Int w;       // part of f coprime to the bad modulus
    Int wprime;  // f = w * wprime, every prime of wprime divides the bad modulus
};

// Splits a positive discriminant delta (0 or 1 mod 4) as delta0 * f^2 and
// factors f = w*w' relative to bad_modulus. Perfect squares give delta0 = 1.
FundDiscFactorization factor_discriminant(const Int& delta, const Int& bad_modulus);

bool is_fundamental_discriminant(const Int& d);

// L(chi_{delta0}, 1) for a fundamental discriminant delta0 != 1, via the exact
// finite character-sum closed forms. Result carries >= 64-bit mantissa.
long double dirichlet_L_at_1(const Int& delta0);

// Independent oracle: partial Dirichlet series in period blocks with Richardson
// extrapolation in the block count. Good to ~1e-9 for |delta0| <= a few hundred.
long double dirichlet_L_series_oracle(const Int& delta0, int blocks = 400);

// L(chi_{delta0}, s) for real s > 1/2, via Hurwitz zeta. delta0 = 1 gives zeta(s).
long double dirichlet_L_real(const Int& delta0, long double s);

long double riemann_zeta_real(long double s);
long double hurwitz_zeta(long double s, long double x);

struct FundamentalUnit {
    Int x, y;  // unit (x + y*sqrt(delta0))/2
    int norm;  // -1 or +1
};

// Fundamental unit of the real quadratic order of discriminant delta0 > 1,
// by continued fractions. The smallest totally positive unit > 1 is the unit
// itself when norm = +1 and its square when norm = -1.
FundamentalUnit fundamental_unit(const Int& delta0);

// log of the smallest totally positive unit > 1.
long double log_totally_positive_unit(const Int& delta0);

// Class number of the fundamental discriminant delta0 != 1. Negative case by
// counting reduced forms, positive case from L(chi,1) and the fundamental unit
// (analytic value must land within 0.01 of an integer).
Int class_number(const Int& delta0);

struct RoundingAmbiguous : Error {
    using Error::Error;
};

}  // namespace h3green
