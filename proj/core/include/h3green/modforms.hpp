#pragma once

#include "h3green/eisenstein.hpp"
#include "h3green/hermitian.hpp"
#include "h3green/symbolic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h3green {

// Discriminant group of an even lattice of any rank/signature, presented by an
// exact Gram matrix. Cosets carry representatives in lattice coordinates,
// orders, and Q mod 1.
struct DiscGroup {
    std::vector<std::vector<Int>> gram;
    std::vector<std::vector<Rat>> reps;  // coordinates in the lattice basis, in [0,1)
    std::vector<Int> orders;
    std::vector<Rat> q_mod1;
    std::vector<int> negation;
    Int det_abs;

    static DiscGroup from_gram(const std::vector<std::vector<Int>>& gram);
    Rat quadratic_form(const std::vector<Rat>& v) const;
    int coset_index(const std::vector<Rat>& v) const;
    size_t size() const { return reps.size(); }
};

enum class Rep { Rho, RhoBar };

// Finite q-expansion over a discriminant group: (coset, exponent) -> value.
// Exponents satisfy exp = Q(coset) mod 1 under Rho and -Q mod 1 under RhoBar.
// scaled_by_inv_pi marks series whose stored values are pi times the true
// coefficients (used for the Eisenstein holomorphic part).
struct QSeries {
    const DiscGroup* group = nullptr;
    Rep rep = Rep::Rho;
    Rat weight;                    // metadata
    bool scaled_by_inv_pi = false;
    std::map<std::pair<int, Rat>, SymbolicScalar> terms;

    void add_term(int coset, const Rat& expo, const SymbolicScalar& v);
    SymbolicScalar coeff(int coset, const Rat& expo) const;
    // termwise multiply by exponent (the normalized derivative), j times
    QSeries derivative(int times = 1) const;
    std::string to_json() const;
};

// P = L cap Q*X0 and N = L cap (Q*X0)^perp for a primitive positive X0 in L',
// with the coset fiber identifying (P (+) N)'/(P (+) N) inside L'/L.
struct SplittingData {
    Int disc;                 // field discriminant D
    HermForm x0;
    Int p_gram;               // 1x1 Gram of P (= 2 d_mu^2 m')
    DiscGroup p_group;        // cyclic of order p_gram
    TernaryLattice n_minus;   // positive definite Gram of N^- (reduced basis)
    DiscGroup n_group;        // same cosets as n_minus, DiscGroup presentation
    DiscGroup joint;          // disc group of P (+) N in block coordinates
    // for each joint coset: the L'/L coset index if alpha+beta lies in L',
    // else -1
    std::vector<int> fiber_image;
    // joint coset index from (p coset, n coset)
    std::vector<std::vector<int>> joint_index;

    int p_cosets() const { return (int)p_group.size(); }
    int n_cosets() const { return (int)n_minus.cosets.size(); }
};

struct NotPrimitive : Error {
    using Error::Error;
};

SplittingData split_lattice(const HermForm& x0);

// Discriminant group of the hermitian lattice presented on its b-block,
// index-aligned with discriminant_group_reps(D).
DiscGroup hermitian_disc_group(const Int& D);

// Weight 1/2 theta series of the rank 1 lattice with Gram (p_gram), expanded
// through exponent <= cap (plus a one-unit guard band).
QSeries theta_unary_half(const DiscGroup& p_group, const Int& p_gram, const Rat& cap);

// Weight 3/2 unary theta sum_{n = r mod 2N} n q^{n^2/4N} e_r. Any ambient
// sqrt(2N/|D|) prefactor is the caller's bookkeeping.
QSeries theta_unary_threehalf(const Int& two_N, const Rat& cap, const DiscGroup& group);

// res_{L/K} on finite expansions: keeps the terms of joint cosets that lie in
// L'/(P+N) with the coefficient of their L'/L image.
QSeries restrict_to_sublattice(const QSeries& f_over_L, const SplittingData& s);

// tr_{L/K}: push a K-series up to L by summing fibers (adjoint of res).
QSeries trace_to_superlattice(const QSeries& g_over_K, const SplittingData& s,
                              const DiscGroup& l_group);

// n-th Rankin-Cohen bracket of weights k and l; output weight k + l + 2n over
// the product group. joint_index maps (f coset, g coset) to the output coset.
QSeries rankin_cohen(const QSeries& f, const Rat& k, const QSeries& g, const Rat& l, int n,
                     const std::vector<std::vector<int>>& joint_index,
                     const DiscGroup& out_group);
QSeries rankin_cohen(const QSeries& f, const Rat& k, const QSeries& g, const Rat& l, int n,
                     const SplittingData& s);

// Constant term of the pairing sum_gamma f_gamma * g_gamma (opposite
// representations required).
SymbolicScalar constant_term(const QSeries& f, const QSeries& g);

// Numeric Siegel theta vector over L'/L of the hermitian lattice at tau, P.
std::vector<std::complex<double>> siegel_theta_numeric(const Int& D, std::complex<double> tau,
                                                       const Point3& p);

}  // namespace h3green
