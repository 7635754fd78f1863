#pragma once

#include "h3green/hyperbolic.hpp"
#include "h3green/modforms.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h3green {

struct SingularIndex : Error {
    using Error::Error;
};
struct MissingVarthetaData : Error {
    using Error::Error;
};
struct UnderdeterminedSystem : Error {
    using Error::Error;
};

// Principal part of a weight 1-2n input form: finitely many negative-index
// coefficients, symmetric under coset negation. Coset indices refer to
// discriminant_group_reps(D). The optional constant coefficients a_f(0, mu)
// matter only when the bracket partner has a principal part of its own (the
// twisted route); they are part of the ingested data.
struct PrincipalPart {
    int n = 1;  // weight is 1 - 2n
    struct Entry {
        Rat m;  // positive index, term q^{-m}
        int mu;
        Rat coefficient;
    };
    std::vector<Entry> entries;
    std::vector<std::pair<int, Rat>> constant_terms;  // (coset, a_f(0,mu))
};

// Ingested q-expansion tables for the cusp-form xi-preimages: scalar series
// theta~*_{N,rho} plus the label sets gluing them into a vector-valued form.
struct VarthetaTable {
    Int disc;     // field discriminant D
    Rat mprime;   // forms of determinant mprime*|D| are being twisted
    Int two_N;    // the unary theta parameter 2N
    // per rho: list of (exponent, coefficient)
    std::map<long, std::vector<std::pair<Rat, Rat>>> component_series;
    // label sets: (rho, n-minus coset tuple (x,y,z) in eighths/halves, sign)
    struct Label {
        long rho;
        std::array<Rat, 3> coset;
        int sign;
    };
    std::vector<Label> labels;
    // constant coefficients a_f(0, mu) of the weight 1-2n Poincare inputs,
    // keyed by n
    std::map<int, Rat> input_constant_terms;
};

// Parses the JSON data format {source, disc, mprime, two_N, series:[...],
// labels:[...], input_constant_terms:{...}}.
VarthetaTable parse_vartheta_json(const std::string& json_text);
// The tables shipped with the library (disc -4, det 4 twist).
const VarthetaTable& builtin_vartheta_table();
std::string builtin_vartheta_json();

// Exact right-hand side of the double-trace evaluation:
//   (1/2) sum_{mu,m} m^{n-1/2} a_f(-m,mu) tr0_{m',mu'} tr_{m,mu} (G_{2n})
// assembled from the lattice splitting, the unary theta, the Eisenstein
// holomorphic part and the n-th Rankin-Cohen bracket. Requires m'|D| times the
// square factors to make the half-integer powers rational (true for all
// registry identities).
SymbolicScalar double_trace_rhs(const Int& D, int n, const PrincipalPart& pp, const Rat& mprime,
                                int muprime);

// Same pipeline with the ingested cusp-form preimage instead of the Eisenstein
// series: exact RHS of the partially-twisted evaluation
//   (1/2) sum m^{n-1/2} a_f(-m,mu) tr0_{m'|D|,chi} tr_{m,mu} (G_{2n}).
SymbolicScalar twisted_partial_rhs(const Int& D, int n, const PrincipalPart& pp, const Rat& mprime,
                                   const VarthetaTable& table);

// Solves the 2x2 system {A + B = sum, A - B = difference} in exact symbolic
// arithmetic and returns A (the chi = +1 class value) or B. Throws
// UnderdeterminedSystem when either side is missing.
SymbolicScalar individual_value(const std::optional<SymbolicScalar>& sum_side,
                                const std::optional<SymbolicScalar>& difference_side,
                                bool plus_class = true);

struct LhsValue {
    double value = 0.0;
    double error_bound = 0.0;
};

// Numeric left-hand side of the same combinations, by summing Green's function
// values over class pairs.
LhsValue double_trace_lhs(const Int& D, double s, const PrincipalPart& pp, const Rat& mprime,
                          int muprime, bool twisted, const GreenConfig& cfg);

struct VerificationReport {
    std::string id;
    double lhs = 0.0;
    double lhs_error = 0.0;
    std::string rhs_symbolic;
    double rhs_numeric = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

std::vector<std::string> identity_registry();

// Runs one registry identity end to end. The green configuration is scaled
// per identity (s = 2 ladders are larger than s = 4 ones); T_override > 0
// caps the top cutoff.
VerificationReport verify_identity(const std::string& id, double T_override = 0.0,
                                   int threads = 1);

std::string report_to_json(const VerificationReport& r);

}  // namespace h3green
