#include "h3green/traces.hpp"

#include <json.hpp>

#include <chrono>
#include <set>
#include <cmath>
#include <sstream>

namespace h3green {

namespace {

using nlohmann::json;

Rat binom_int(int n, int k) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= Rat(n - i, i + 1);
    return r;
}


void validate_principal_part(const Int& D, const PrincipalPart& pp) {
    DiscGroupField field = discriminant_group_reps(D);
    for (const auto& e : pp.entries) {
        if (e.m <= 0) throw Error("PrincipalPart: indices must be positive");
        int neg = field.negation[e.mu];
        bool found = false;
        for (const auto& o : pp.entries)
            if (o.mu == neg && o.m == e.m && o.coefficient == e.coefficient) found = true;
        if (!found) throw Error("PrincipalPart: not symmetric under coset negation");
    }
}

void check_no_singularity(const Int& D, const PrincipalPart& pp, const Rat& mprime, int muprime) {
    DiscGroupField field = discriminant_group_reps(D);
    for (const auto& e : pp.entries) {
        Rat ratio = e.m / mprime;
        if (!is_integer(ratio)) continue;
        Int r2(ratio.get_num());
        if (!is_perfect_square(r2)) continue;
        Int r = isqrt(r2);
        // mu must equal r * muprime for a collision
        QuadInt scaled = field.reps[muprime] * Rat(r);
        Rat fx = scaled.x() - Rat(rat_floor(scaled.x()));
        Rat fy = scaled.y() - Rat(rat_floor(scaled.y()));
        if (field.reps[e.mu].x() == fx && field.reps[e.mu].y() == fy)
            throw SingularIndex("principal part meets the trace index (singular pair)");
    }
}

QSeries principal_part_series(const PrincipalPart& pp, const DiscGroup& lgroup) {
    QSeries f;
    f.group = &lgroup;
    f.rep = Rep::RhoBar;
    f.weight = Rat(1 - 2 * pp.n);
    for (const auto& e : pp.entries)
        f.add_term(e.mu, -e.m, SymbolicScalar::rational(e.coefficient));
    for (const auto& [mu, c] : pp.constant_terms)
        f.add_term(mu, Rat(0), SymbolicScalar::rational(c));
    return f;
}

Rat max_principal_index(const PrincipalPart& pp) {
    Rat m = 0;
    for (const auto& e : pp.entries) m = std::max(m, e.m);
    return m;
}

// Eisenstein holomorphic part over the N^- cosets, storing pi times the true
// coefficients. Only the (coset, exponent) pairs the constant term can reach
// are computed: exponent = -E_f - e_theta over the restricted input terms and
// the theta exponents.
QSeries eisenstein_plus_series(const TernaryLattice& nm, const DiscGroup& ngroup,
                               const QSeries& fK, const QSeries& theta) {
    QSeries e;
    e.group = &ngroup;
    e.rep = Rep::Rho;
    e.weight = Rat(1, 2);
    e.scaled_by_inv_pi = true;
    size_t nn = nm.cosets.size();
    std::set<std::pair<int, Rat>> demand;
    for (const auto& [fkey, fval] : fK.terms) {
        int alpha = fkey.first / (int)nn;
        int beta = fkey.first % (int)nn;
        for (const auto& [tkey, tval] : theta.terms) {
            if (tkey.first != alpha) continue;
            Rat expo = -fkey.second - tkey.second;
            if (expo < 0) continue;
            // exponents of the weight 1/2 series lie in Z - Q_{N^-}(beta)
            Rat frac = expo + nm.cosets[beta].q_mod1;
            if (!is_integer(frac)) continue;
            demand.insert({beta, expo});
        }
    }
    for (const auto& [beta, expo] : demand) {
        EisCoefficient c = eis_coefficient_plus(nm, expo, beta);
        e.add_term(beta, expo, c.value_times_pi());
    }
    return e;
}

}  // namespace

SymbolicScalar double_trace_rhs(const Int& D, int n, const PrincipalPart& pp, const Rat& mprime,
                                int muprime) {
    if (n < 1) throw Error("double_trace_rhs: n >= 1 required");
    validate_principal_part(D, pp);
    check_no_singularity(D, pp, mprime, muprime);

    ClassList classes = enumerate_classes(D, mprime, muprime, true);
    if (classes.reps.empty()) return SymbolicScalar();
    Rat tr01 = classes.trace_of_one();
    SplittingData s = split_lattice(classes.reps[0].form);

    Rat cap = max_principal_index(pp);
    QSeries theta = theta_unary_half(s.p_group, s.p_gram, cap);

    DiscGroup lgroup = hermitian_disc_group(D);
    QSeries f = principal_part_series(pp, lgroup);
    QSeries fK = restrict_to_sublattice(f, s);

    QSeries eis = eisenstein_plus_series(s.n_minus, s.n_group, fK, theta);
    QSeries bracket = rankin_cohen(theta, Rat(1, 2), eis, Rat(1, 2), n, s);

    SymbolicScalar ct_scaled = constant_term(fK, bracket);  // = pi * CT
    Rat pre = Rat(1);
    for (int i = 0; i < n; ++i) pre *= 4;
    pre /= binom_int(2 * n, n);
    return ct_scaled * (pre * tr01);
}

SymbolicScalar twisted_partial_rhs(const Int& D, int n, const PrincipalPart& pp, const Rat& mprime,
                                   const VarthetaTable& table) {
    if (table.disc != D || table.mprime != mprime)
        throw MissingVarthetaData("twisted_partial_rhs: no ingested table for this (D, m')");
    validate_principal_part(D, pp);
    // singularity condition: a_f(-m'|D| r^2, 0) = 0
    Rat mdet = mprime * Rat(abs(D));
    for (const auto& e : pp.entries) {
        Rat ratio = e.m / mdet;
        if (is_integer(ratio) && is_perfect_square(Int(ratio.get_num())) && e.mu == 0)
            throw SingularIndex("twisted principal part meets the trace index");
    }

    ClassList classes = enumerate_classes(D, mdet, 0, true);
    if (classes.reps.empty()) return SymbolicScalar();
    Rat tr01 = classes.trace_of_one();
    int chi0 = chi_D(classes.reps[0].form);
    SplittingData s = split_lattice(classes.reps[0].form);

    // glue the ingested scalar series into a vector-valued series over N^-
    QSeries vartheta;
    vartheta.group = &s.n_group;
    vartheta.rep = Rep::Rho;
    vartheta.weight = Rat(1, 2);
    for (const auto& lab : table.labels) {
        auto it = table.component_series.find(lab.rho);
        if (it == table.component_series.end())
            throw MissingVarthetaData("twisted_partial_rhs: label refers to a missing component");
        int coset = s.n_minus.coset_index({lab.coset[0], lab.coset[1], lab.coset[2]});
        for (const auto& [expo, coeff] : it->second)
            vartheta.add_term(coset, expo, SymbolicScalar::rational(Rat(lab.sign) * coeff));
    }

    PrincipalPart full = pp;
    auto ct = table.input_constant_terms.find(n);
    if (ct != table.input_constant_terms.end())
        full.constant_terms.emplace_back(0, ct->second);

    Rat cap = max_principal_index(pp);
    QSeries theta = theta_unary_half(s.p_group, s.p_gram, cap);
    QSeries bracket = rankin_cohen(theta, Rat(1, 2), vartheta, Rat(1, 2), n, s);

    DiscGroup lgroup = hermitian_disc_group(D);
    QSeries f = principal_part_series(full, lgroup);
    QSeries fK = restrict_to_sublattice(f, s);

    SymbolicScalar ct_plain = constant_term(fK, bracket);  // rational
    Rat pre = Rat(chi0);
    for (int i = 0; i < n; ++i) pre *= 4;
    pre /= binom_int(2 * n, n);
    return ct_plain.times_pi() * (pre * tr01);
}

SymbolicScalar individual_value(const std::optional<SymbolicScalar>& sum_side,
                                const std::optional<SymbolicScalar>& difference_side,
                                bool plus_class) {
    if (!sum_side || !difference_side)
        throw UnderdeterminedSystem("individual_value: needs both the sum and the difference");
    SymbolicScalar out = *sum_side;
    if (plus_class)
        out += *difference_side;
    else
        out -= *difference_side;
    return out * Rat(1, 2);
}

LhsValue double_trace_lhs(const Int& D, double s, const PrincipalPart& pp, const Rat& mprime,
                          int muprime, bool twisted, const GreenConfig& cfg) {
    Rat mdet = twisted ? mprime * Rat(abs(D)) : mprime;
    int mup = twisted ? 0 : muprime;
    ClassList yside = enumerate_classes(D, mdet, mup, true);

    LhsValue out;
    double n_half = ((double)(pp.n) - 0.5);
    for (const auto& e : pp.entries) {
        ClassList xside = enumerate_classes(D, e.m, e.mu, false);
        double mpow = std::pow(to_ld(e.m), n_half);
        double af = to_ld(e.coefficient);
        for (const auto& y : yside.reps) {
            double wy = 1.0 / (double)y.stabilizer_order;
            if (twisted) wy *= (double)chi_D(y.form);
            if (wy == 0.0) continue;
            Point3 py = special_point(y.form);
            for (const auto& x : xside.reps) {
                double wx = 1.0 / (double)x.stabilizer_order;
                Point3 px = special_point(x.form);
                GreenEval g = green_function(D, px, py, s, cfg);
                double w = 0.5 * mpow * af * wy * wx;
                out.value += w * g.value;
                out.error_bound += std::abs(w) * g.tail_estimate;
            }
        }
    }
    return out;
}

VarthetaTable parse_vartheta_json(const std::string& json_text) {
    json j = json::parse(json_text);
    VarthetaTable t;
    t.disc = Int(j.at("disc").get<long>());
    t.mprime = parse_rational(j.at("mprime").get<std::string>());
    t.two_N = Int(j.at("two_N").get<long>());
    for (const auto& s : j.at("series")) {
        long rho = s.at("rho").get<long>();
        std::vector<std::pair<Rat, Rat>> terms;
        for (const auto& term : s.at("terms")) {
            terms.emplace_back(parse_rational(term.at("exp").get<std::string>()),
                               parse_rational(term.at("coeff").get<std::string>()));
        }
        t.component_series[rho] = std::move(terms);
    }
    for (const auto& lab : j.at("labels")) {
        VarthetaTable::Label L;
        L.rho = lab.at("rho").get<long>();
        auto cs = lab.at("coset");
        for (int i = 0; i < 3; ++i) L.coset[i] = parse_rational(cs.at(i).get<std::string>());
        L.sign = lab.at("sign").get<int>();
        t.labels.push_back(L);
    }
    if (j.contains("input_constant_terms"))
        for (const auto& [key, val] : j.at("input_constant_terms").items())
            t.input_constant_terms[std::stoi(key)] = parse_rational(val.get<std::string>());
    return t;
}

std::string builtin_vartheta_json() {
    return R"JSON({
  "source": "reference tables: weight 1/2 xi-preimages of the unary thetas theta*_{4,rho}, glued over the determinant-32 ternary lattice; input-form constant coefficients for weights -1 and -3",
  "disc": -4,
  "mprime": "1",
  "two_N": 8,
  "series": [
    {"label": "theta_tilde_4_1", "rho": 1, "terms": [
      {"exp": "-1/16", "coeff": "1/4"}, {"exp": "15/16", "coeff": "-7/4"},
      {"exp": "31/16", "coeff": "-21/4"}, {"exp": "47/16", "coeff": "-43/4"},
      {"exp": "63/16", "coeff": "-47/2"}, {"exp": "79/16", "coeff": "-42"},
      {"exp": "95/16", "coeff": "-77"}]},
    {"label": "theta_tilde_4_2", "rho": 2, "terms": [
      {"exp": "3/4", "coeff": "-2"}, {"exp": "7/4", "coeff": "-6"},
      {"exp": "11/4", "coeff": "-14"}, {"exp": "15/4", "coeff": "-28"},
      {"exp": "19/4", "coeff": "-54"}, {"exp": "23/4", "coeff": "-98"}]},
    {"label": "theta_tilde_4_3", "rho": 3, "terms": [
      {"exp": "7/16", "coeff": "-3/4"}, {"exp": "23/16", "coeff": "-7/2"},
      {"exp": "39/16", "coeff": "-7"}, {"exp": "55/16", "coeff": "-69/4"},
      {"exp": "71/16", "coeff": "-119/4"}, {"exp": "87/16", "coeff": "-239/4"}]}
  ],
  "labels": [
    {"rho": 1, "coset": ["1/8", "0", "0"], "sign": 1},
    {"rho": 1, "coset": ["7/8", "0", "0"], "sign": 1},
    {"rho": 1, "coset": ["5/8", "1/2", "1/2"], "sign": -1},
    {"rho": 1, "coset": ["7/8", "1/2", "1/2"], "sign": -1},
    {"rho": 2, "coset": ["0", "1/2", "0"], "sign": 1},
    {"rho": 2, "coset": ["0", "0", "1/2"], "sign": 1},
    {"rho": 2, "coset": ["1/2", "1/2", "0"], "sign": -1},
    {"rho": 2, "coset": ["1/2", "0", "1/2"], "sign": -1},
    {"rho": 3, "coset": ["1/8", "1/2", "1/2"], "sign": 1},
    {"rho": 3, "coset": ["7/8", "1/2", "1/2"], "sign": 1},
    {"rho": 3, "coset": ["3/8", "0", "0"], "sign": -1},
    {"rho": 3, "coset": ["5/8", "0", "0"], "sign": -1}
  ],
  "input_constant_terms": {"1": "-112", "2": "416"}
})JSON";
}

const VarthetaTable& builtin_vartheta_table() {
    static VarthetaTable t = parse_vartheta_json(builtin_vartheta_json());
    return t;
}

std::vector<std::string> identity_registry() {
    return {"ex1_n1",       "ex1_n2",       "sec55_sum_n1",      "sec55_diff_n1",
            "sec55_g2_individual", "sec55_sum_n2", "sec55_diff_n2", "sec55_g4_individual",
            "twisted_trace_zero"};
}

namespace {

struct IdentitySpec {
    int n;
    bool twisted;
    PrincipalPart pp;
    Rat mprime;
    int muprime;
    Rat scale;  // display scale: reported identity = scale * raw trace identity
    double tolerance;
    double T;
    int ladder;
};

PrincipalPart pp_example1(int n) {
    PrincipalPart pp;
    pp.n = n;
    pp.entries.push_back({Rat(1, 2), 3, Rat(2)});  // coset (1,1)
    return pp;
}

PrincipalPart pp_sec55(int n) {
    PrincipalPart pp;
    pp.n = n;
    pp.entries.push_back({Rat(1), 0, Rat(2)});
    return pp;
}

IdentitySpec spec_for(const std::string& id) {
    if (id == "ex1_n1") return {1, false, pp_example1(1), Rat(1), 0, Rat(96), 1e-2, 800.0, 4};
    if (id == "ex1_n2") return {2, false, pp_example1(2), Rat(1), 0, Rat(192), 1e-3, 150.0, 3};
    if (id == "sec55_sum_n1") return {1, false, pp_sec55(1), Rat(4), 0, Rat(8), 1e-2, 800.0, 4};
    if (id == "sec55_diff_n1") return {1, true, pp_sec55(1), Rat(1), 0, Rat(8), 1e-2, 800.0, 4};
    if (id == "sec55_sum_n2") return {2, false, pp_sec55(2), Rat(4), 0, Rat(8), 1e-3, 150.0, 3};
    if (id == "sec55_diff_n2") return {2, true, pp_sec55(2), Rat(1), 0, Rat(8), 1e-3, 150.0, 3};
    throw Error("unknown identity id: " + id);
}

VerificationReport run_plain(const std::string& id, double T_override, int threads) {
    IdentitySpec sp = spec_for(id);
    VerificationReport r;
    r.id = id;
    r.tolerance = sp.tolerance;

    SymbolicScalar rhs_raw =
        sp.twisted
            ? twisted_partial_rhs(-4, sp.n, sp.pp, sp.mprime, builtin_vartheta_table())
            : double_trace_rhs(-4, sp.n, sp.pp, sp.mprime, sp.muprime);
    SymbolicScalar rhs = rhs_raw * sp.scale;
    r.rhs_symbolic = rhs.str();
    r.rhs_numeric = (double)rhs.numeric();

    GreenConfig cfg;
    cfg.T = (T_override > 0) ? T_override : sp.T;
    cfg.ladder = sp.ladder;
    cfg.extrapolate = true;
    cfg.threads = threads;
    LhsValue lhs = double_trace_lhs(-4, 2.0 * sp.n, sp.pp, sp.mprime, sp.muprime, sp.twisted, cfg);
    r.lhs = lhs.value * to_ld(sp.scale);
    r.lhs_error = lhs.error_bound * to_ld(sp.scale);

    r.abs_err = std::abs(r.lhs - r.rhs_numeric);
    double denom = std::max(std::abs(r.rhs_numeric), 1e-12);
    r.rel_err = r.abs_err / denom;
    r.pass = r.rel_err <= r.tolerance;
    return r;
}

VerificationReport run_individual(const std::string& id, double T_override, int threads) {
    bool g2 = (id == "sec55_g2_individual");
    std::string sum_id = g2 ? "sec55_sum_n1" : "sec55_sum_n2";
    std::string diff_id = g2 ? "sec55_diff_n1" : "sec55_diff_n2";
    IdentitySpec ssum = spec_for(sum_id), sdiff = spec_for(diff_id);

    SymbolicScalar rhs_sum = double_trace_rhs(-4, ssum.n, ssum.pp, ssum.mprime, ssum.muprime) *
                             ssum.scale;
    SymbolicScalar rhs_diff =
        twisted_partial_rhs(-4, sdiff.n, sdiff.pp, sdiff.mprime, builtin_vartheta_table()) *
        sdiff.scale;
    SymbolicScalar rhs = individual_value(rhs_sum, rhs_diff, true);

    VerificationReport r;
    r.id = id;
    r.tolerance = g2 ? 1e-2 : 1e-3;
    r.rhs_symbolic = rhs.str();
    r.rhs_numeric = (double)rhs.numeric();

    // direct evaluation at the first determinant-4 class (the point 2j)
    ClassList c4 = enumerate_classes(-4, 4, 0, true);
    ClassList c1 = enumerate_classes(-4, 1, 0, true);
    GreenConfig cfg;
    cfg.T = (T_override > 0) ? T_override : ssum.T;
    cfg.ladder = ssum.ladder;
    cfg.extrapolate = true;
    cfg.threads = threads;
    int pos = chi_D(c4.reps[0].form) == 1 ? 0 : 1;  // the chi = +1 class carries 2j
    GreenEval g = green_function(-4, special_point(c1.reps[0].form),
                                 special_point(c4.reps[pos].form), 2.0 * ssum.n, cfg);
    r.lhs = g.value;
    r.lhs_error = g.tail_estimate;
    r.abs_err = std::abs(r.lhs - r.rhs_numeric);
    r.rel_err = r.abs_err / std::max(std::abs(r.rhs_numeric), 1e-12);
    r.pass = r.rel_err <= r.tolerance;
    return r;
}

VerificationReport run_twisted_zero(const std::string& id) {
    VerificationReport r;
    r.id = id;
    r.tolerance = 0.0;
    Rat worst = 0;
    for (long m : {1L, 2L, 3L}) {
        Rat t = trace_of_one(-4, Rat(4 * m), 0, TraceVariant::Twisted);
        if (abs(t) > worst) worst = abs(t);
    }
    r.rhs_symbolic = "0";
    r.rhs_numeric = 0.0;
    r.lhs = to_ld(worst);
    r.abs_err = r.lhs;
    r.rel_err = r.lhs;
    r.pass = (worst == 0);
    return r;
}

}  // namespace

VerificationReport verify_identity(const std::string& id, double T_override, int threads) {
    auto start = std::chrono::steady_clock::now();
    VerificationReport r;
    if (id == "twisted_trace_zero")
        r = run_twisted_zero(id);
    else if (id == "sec55_g2_individual" || id == "sec55_g4_individual")
        r = run_individual(id, T_override, threads);
    else
        r = run_plain(id, T_override, threads);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string report_to_json(const VerificationReport& r) {
    json j;
    j["id"] = r.id;
    j["lhs"] = r.lhs;
    j["lhs_error"] = r.lhs_error;
    j["rhs_symbolic"] = r.rhs_symbolic;
    j["rhs_numeric"] = r.rhs_numeric;
    j["abs_err"] = r.abs_err;
    j["rel_err"] = r.rel_err;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["seconds"] = r.seconds;
    return j.dump();
}

}  // namespace h3green
