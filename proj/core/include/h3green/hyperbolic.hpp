#pragma once

#include "h3green/hermitian.hpp"

#include <complex>
#include <vector>

namespace h3green {

struct SingularArgument : Error {
    using Error::Error;
};
struct SingularityHit : Error {
    using Error::Error;
};

// cosh of the hyperbolic distance; symmetric, = 1 iff equal points.
double cosh_dist(const Point3& p1, const Point3& p2);

// Point-pair kernel (t + sqrt(t^2-1))^{-s} (t^2-1)^{-1/2}, t > 1.
double phi_s(double t, double s);

// Checks (X1,X2) = 2 sgn(c1 c2) sqrt(Q(X1)Q(X2)) cosh d(P1,P2) to 1e-10 rel.
bool bilinear_vs_distance_check(const HermForm& x1, const HermForm& x2);

struct GreenEval {
    double value = 0.0;
    double truncation_bound = 0.0;  // cosh cutoff T
    long terms_used = 0;
    double tail_estimate = 0.0;
    bool extrapolated = false;
    double min_cosh = 0.0;  // closest orbit approach, for singularity diagnostics
};

struct GreenConfig {
    double T = 400.0;
    bool extrapolate = false;
    int ladder = 3;       // number of dyadic cutoffs T/2^k used for tail fit/extrapolation
    int threads = 1;      // partitions are fixed, so results do not depend on this
};

// G_s(P1,P2) = pi * sum over gamma in PSL2(O_D) of phi_s(cosh d(P1, gamma P2)),
// truncated at cosh <= T. The group is enumerated completely through its
// bottom rows: for each coprime pair (c,d) in O_D (up to sign) the elements
// with that bottom row are T^t gamma_0, and the translation t ranges over an
// explicit disk. Partial sums use compensated accumulation in fixed partition
// order.
GreenEval green_function(const Int& D, const Point3& p1, const Point3& p2, double s,
                         const GreenConfig& cfg);

// Number of group elements with cosh d(P1, gamma P2) <= T (growth audits).
long orbit_count(const Int& D, const Point3& p1, const Point3& p2, double T);

}  // namespace h3green
