#pragma once

#include "h3green/quadfield.hpp"
#include "h3green/symbolic.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace h3green {

struct Point3 {
    std::complex<double> z;
    double r = 1.0;
};

// Integral binary hermitian form [a, b, c] over Q(sqrt(D)); doubles as a
// vector of the signature (1,3) lattice L' (a,c integers, b in d_D^{-1}).
struct HermForm {
    Rat a, c;
    QuadInt b;

    const Int& disc() const { return b.disc(); }
    Rat det() const { return a * c - b.norm(); }  // the quadratic form Q(X)
    bool in_lattice() const { return is_integer(a) && is_integer(c) && b.in_ring(); }
    bool in_dual() const { return is_integer(a) && is_integer(c) && b.in_inverse_different(); }
    bool positive_definite() const { return a > 0 && det() > 0; }
    bool primitive() const;  // no 1/r * X in L' for r > 1

    HermForm negate() const { return {-a, -c, -b}; }
    bool operator==(const HermForm& o) const { return a == o.a && c == o.c && b == o.b; }
};

Rat bilinear(const HermForm& x, const HermForm& y);  // (X,Y) = a1 c2 + a2 c1 - tr(b1 conj(b2))

// 2x2 matrix over O_D with determinant 1, taken up to sign.
struct GammaElement {
    QuadInt e11, e12, e21, e22;

    static GammaElement identity(const Int& D);
    static GammaElement shift(const QuadInt& z);  // [[1, z], [0, 1]]
    static GammaElement inversion(const Int& D);  // [[0, -1], [1, 0]]

    GammaElement operator*(const GammaElement& o) const;
    GammaElement inverse() const;
    HermForm apply(const HermForm& x) const;  // gamma X conj(gamma)^t
    Point3 apply(const Point3& p) const;
    bool is_unit_det() const;
};

std::vector<GammaElement> default_generators(const Int& D);

struct ClassRep {
    HermForm form;
    long stabilizer_order;
};

struct ClassList {
    Int disc;
    Rat det;
    int coset;  // index into discriminant_group_reps(disc)
    bool primitive;
    std::vector<ClassRep> reps;

    Rat trace_of_one() const;  // sum of 1/|Gamma_X|
    std::string to_json() const;
};

struct EmptyClassSet : Error {
    using Error::Error;
};
struct SearchBoxExhausted : Error {
    using Error::Error;
};
struct ClosureFailure : Error {
    using Error::Error;
};

// Greedy reduction: translate b to its smallest residue mod a*O_D and swap a
// with c while c < a. Terminates with a <= c and minimal b; the result is a
// deterministic function of the input orbit element.
HermForm reduce_form(HermForm x);

// Complete set of Gamma-orbit representatives of the positive definite forms of
// determinant m in coset mu (primitive ones only, if requested), with
// stabilizer orders. Completeness is enforced by the box + reduction-merge
// scheme and audited by the brute-force box test.
ClassList enumerate_classes(const Int& D, const Rat& m, int mu, bool primitive_only);

long stabilizer_order(const HermForm& x);

// Searches for gamma with gamma.X = Y among matrices whose entry norms obey
// the positivity bound (a_X + c_X)(a_Y + c_Y)/det; empty when none is found
// in that range.
std::optional<GammaElement> gamma_transporter(const HermForm& x, const HermForm& y);

Point3 special_point(const HermForm& x);

// Genus character on forms with determinant in D*Z; 0 off that set.
int chi_D(const HermForm& x);

enum class TraceVariant { Plain, Primitive, Twisted };

// Stabilizer-weighted sum of f over class representatives. The twisted variant
// weights by chi_D and requires m in |D|*Z with mu = 0.
double trace_functional(const std::function<double(const Point3&)>& f, const Int& D, const Rat& m,
                        int mu, TraceVariant variant);

// Exact version for f = 1.
Rat trace_of_one(const Int& D, const Rat& m, int mu, TraceVariant variant);

struct TraceTerm {
    Int r;
    int nu;
    Rat coefficient;
};

// Expansion tr_{m,mu} = sum over r^2 | Dm, r*nu = mu of tr0_{m/r^2, nu}, and
// the Moebius-style inversion writing tr0 in terms of tr. Round trip is the
// identity.
std::vector<TraceTerm> primitive_trace_expansion(const Int& D, const Rat& m, int mu);
std::vector<TraceTerm> primitive_trace_inversion(const Int& D, const Rat& m, int mu);

}  // namespace h3green
