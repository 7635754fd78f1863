#include <doctest.h>

#include "h3green/traces.hpp"

#include <cmath>

using namespace h3green;

namespace {

PrincipalPart pp_ex1(int n) {
    PrincipalPart pp;
    pp.n = n;
    pp.entries.push_back({Rat(1, 2), 3, Rat(2)});  // coset (1,1), doubled since mu = -mu
    return pp;
}

PrincipalPart pp_55(int n) {
    PrincipalPart pp;
    pp.n = n;
    pp.entries.push_back({Rat(1), 0, Rat(2)});
    return pp;
}

}  // namespace

TEST_CASE("exact right-hand sides of the four untwisted identities") {
    SymbolicScalar r1 = double_trace_rhs(-4, 1, pp_ex1(1), 1, 0);
    CHECK(r1 == SymbolicScalar::l_value(8, 1));

    SymbolicScalar r2 = double_trace_rhs(-4, 2, pp_ex1(2), 1, 0);
    SymbolicScalar e2 = SymbolicScalar::log_prime(2, Rat(1, 2)) + SymbolicScalar::l_value(8, Rat(-1, 2));
    CHECK(r2 == e2);

    SymbolicScalar r3 = double_trace_rhs(-4, 1, pp_55(1), 4, 0);
    SymbolicScalar e3 = SymbolicScalar::l_value(12, 4) + SymbolicScalar::l_value(28, -1) +
                        SymbolicScalar::l_value(60, 7);
    CHECK(r3 == e3);

    SymbolicScalar r4 = double_trace_rhs(-4, 2, pp_55(2), 4, 0);
    SymbolicScalar e4 = SymbolicScalar::log_prime(2, -8) + SymbolicScalar::l_value(12, 4) +
                        SymbolicScalar::l_value(28, Rat(31, 4)) +
                        SymbolicScalar::l_value(60, Rat(-17, 4));
    CHECK(r4 == e4);
}

TEST_CASE("exact right-hand sides of the twisted identities") {
    SymbolicScalar t1 = twisted_partial_rhs(-4, 1, pp_55(1), 1, builtin_vartheta_table());
    CHECK(t1 == SymbolicScalar::pi(Rat(-1, 2)));

    SymbolicScalar t2 = twisted_partial_rhs(-4, 2, pp_55(2), 1, builtin_vartheta_table());
    CHECK(t2 == SymbolicScalar::pi(Rat(-1, 8)));
}

TEST_CASE("symbolic output is bit-identical across recomputation") {
    SymbolicScalar a = double_trace_rhs(-4, 1, pp_55(1), 4, 0);
    SymbolicScalar b = double_trace_rhs(-4, 1, pp_55(1), 4, 0);
    CHECK(a == b);
    CHECK(a.str() == b.str());

    // reordering the principal-part entries does not change the exact output
    PrincipalPart two_terms;
    two_terms.n = 1;
    two_terms.entries.push_back({Rat(1, 2), 3, Rat(1)});
    two_terms.entries.push_back({Rat(3, 2), 3, Rat(2)});
    PrincipalPart swapped = two_terms;
    std::swap(swapped.entries[0], swapped.entries[1]);
    SymbolicScalar c = double_trace_rhs(-4, 1, two_terms, 1, 0);
    SymbolicScalar d = double_trace_rhs(-4, 1, swapped, 1, 0);
    CHECK(c == d);
    CHECK(c.str() == d.str());
}

TEST_CASE("class enumeration is deterministic") {
    for (int run = 0; run < 2; ++run) {
        ClassList a = enumerate_classes(-4, 4, 0, false);
        ClassList b = enumerate_classes(-4, 4, 0, false);
        CHECK(a.to_json() == b.to_json());
    }
}

TEST_CASE("individual_value solves the 2x2 system and rejects missing sides") {
    SymbolicScalar sum = SymbolicScalar::l_value(12, 32) + SymbolicScalar::pi(2);
    SymbolicScalar diff = SymbolicScalar::pi(-4);
    SymbolicScalar a = individual_value(sum, diff, true);
    SymbolicScalar b = individual_value(sum, diff, false);
    CHECK(a + b == sum * Rat(1, 2) * Rat(2));
    CHECK(a - b == diff);
    CHECK_THROWS_AS(individual_value(sum, std::nullopt), UnderdeterminedSystem);
}

TEST_CASE("algebraicity tag structure") {
    // untwisted: only L-values and logs, never pi
    for (SymbolicScalar s : {double_trace_rhs(-4, 1, pp_ex1(1), 1, 0),
                             double_trace_rhs(-4, 2, pp_55(2), 4, 0)}) {
        for (const auto& [tag, c] : s.terms()) {
            CHECK(tag.kind != SymbolicScalar::Kind::Pi);
            CHECK(tag.kind != SymbolicScalar::Kind::One);
        }
    }
    // twisted: exactly a rational multiple of pi
    SymbolicScalar t = twisted_partial_rhs(-4, 1, pp_55(1), 1, builtin_vartheta_table());
    REQUIRE(t.terms().size() == 1);
    CHECK(t.terms().begin()->first.kind == SymbolicScalar::Kind::Pi);
}

TEST_CASE("discriminants appearing are the predicted fundamental ones") {
    // every L-value tag of the RHS must be the fundamental discriminant of
    // (4 m m' d^2 - t^2) |D| for some integer t
    struct Case {
        int n;
        PrincipalPart pp;
        Rat mprime;
        long dmu;  // order of the trace coset
    };
    for (const Case& c : {Case{1, pp_ex1(1), Rat(1), 2}, Case{1, pp_55(1), Rat(4), 1}}) {
        SymbolicScalar rhs = double_trace_rhs(-4, c.n, c.pp, c.mprime, 0);
        for (const auto& [tag, coeff] : rhs.terms()) {
            if (tag.kind != SymbolicScalar::Kind::LValue) continue;
            bool found = false;
            Rat m = c.pp.entries[0].m;
            // t ranges over |t| < 2 d sqrt(m m')
            for (long t = 0; t * t < 16 * to_ld(m * c.mprime) * c.dmu * c.dmu + 4; ++t) {
                Rat val = (4 * m * c.mprime * Rat(c.dmu * c.dmu) - Rat(t * t)) * 4;
                if (val <= 0 || !is_integer(val)) continue;
                FundDiscFactorization f = factor_discriminant(Int(val.get_num()), 16);
                if (f.delta0 == tag.arg) found = true;
            }
            CHECK(found);
        }
    }
}

TEST_CASE("hilbert symbol symmetry of the square case") {
    // when (4 m m' d^2 - t^2)|D| is a square, (-m, D)_p = (-m', D)_p; for the
    // determinant-4 data the square case is t = 0 with value 64
    Rat m = 1, mp = 4;
    Int val((4 * 1 * 4 - 0) * 4);
    CHECK(is_perfect_square(val));
    for (long p : {2L, 3L, 5L}) {
        CHECK(hilbert_symbol(-m, Rat(-4), p) == hilbert_symbol(-mp, Rat(-4), p));
    }
    // and 2 is the unique prime dividing 2 m' |D| with (-m', D)_2 = -1
    CHECK(hilbert_symbol(-mp, Rat(-4), 2) == -1);
}

TEST_CASE("individual value is the exact half sum / half difference") {
    SymbolicScalar sum = double_trace_rhs(-4, 1, pp_55(1), 4, 0) * Rat(8);
    SymbolicScalar diff = twisted_partial_rhs(-4, 1, pp_55(1), 1, builtin_vartheta_table()) * Rat(8);
    SymbolicScalar g2 = (sum + diff) * Rat(1, 2);
    SymbolicScalar expect = SymbolicScalar::l_value(12, 16) + SymbolicScalar::l_value(28, -4) +
                            SymbolicScalar::l_value(60, 28) + SymbolicScalar::pi(-2);
    CHECK(g2 == expect);
    // and the sum of the two individual values reproduces the sum identity
    SymbolicScalar other = (sum - diff) * Rat(1, 2);
    CHECK(g2 + other == sum);

    SymbolicScalar sum4 = double_trace_rhs(-4, 2, pp_55(2), 4, 0) * Rat(8);
    SymbolicScalar diff4 = twisted_partial_rhs(-4, 2, pp_55(2), 1, builtin_vartheta_table()) * Rat(8);
    SymbolicScalar g4 = (sum4 + diff4) * Rat(1, 2);
    SymbolicScalar expect4 = SymbolicScalar::log_prime(2, -32) + SymbolicScalar::l_value(12, 16) +
                             SymbolicScalar::l_value(28, 31) + SymbolicScalar::l_value(60, -17) +
                             SymbolicScalar::pi(Rat(-1, 2));
    CHECK(g4 == expect4);
}

TEST_CASE("singular principal parts are rejected") {
    PrincipalPart bad;
    bad.n = 1;
    bad.entries.push_back({Rat(1), 0, Rat(2)});
    // m' = 1, mu' = 0: the entry m = 1 = m' r^2 with r = 1 collides
    CHECK_THROWS_AS(double_trace_rhs(-4, 1, bad, 1, 0), SingularIndex);
    // twisted: m = 4 = m'|D| r^2 with r = 1
    PrincipalPart bad2;
    bad2.n = 1;
    bad2.entries.push_back({Rat(4), 0, Rat(2)});
    CHECK_THROWS_AS(twisted_partial_rhs(-4, 1, bad2, 1, builtin_vartheta_table()), SingularIndex);
}

TEST_CASE("principal parts over (Z/2)^2 are automatically symmetric") {
    // every coset of the D = -4 group is its own negative, so any single-entry
    // principal part passes the symmetry validation
    PrincipalPart pp;
    pp.n = 1;
    pp.entries.push_back({Rat(1, 2), 3, Rat(1)});
    pp.entries.push_back({Rat(3, 2), 3, Rat(2)});
    CHECK_NOTHROW(double_trace_rhs(-4, 1, pp, 1, 0));
}

TEST_CASE("vartheta tables parse and round trip") {
    const VarthetaTable& t = builtin_vartheta_table();
    CHECK(t.disc == -4);
    CHECK(t.mprime == 1);
    CHECK(t.component_series.size() == 3);
    CHECK(t.labels.size() == 12);
    CHECK(t.input_constant_terms.at(1) == -112);
    CHECK(t.input_constant_terms.at(2) == 416);
    // exponents lie in Z - rho^2/16, the dual-representation pattern of the
    // unary theta xi-preimages
    for (const auto& [rho, series] : t.component_series) {
        for (const auto& [expo, coeff] : series) {
            Rat quarter(rho * rho, 16);
            quarter.canonicalize();
            CHECK(is_integer(expo + quarter));
        }
    }
    // reparse from the shipped JSON text gives identical data
    VarthetaTable t2 = parse_vartheta_json(builtin_vartheta_json());
    CHECK(t2.labels.size() == t.labels.size());
    CHECK(t2.component_series.at(1).size() == t.component_series.at(1).size());
}

TEST_CASE("the pairing vector psi_D is T-invariant and well defined mod DL") {
    // psi_D = sum over delta in L_D/DL of chi_D(delta) e_delta. Its invariance
    // under the T-action of the rescaled dual representation comes down to
    // Q(delta)/|D| being an integer wherever chi_D is supported, and chi_D
    // itself must only depend on delta mod DL. Enumerate L/4L for D = -4.
    long support = 0;
    for (long a = 0; a < 4; ++a) {
        for (long c = 0; c < 4; ++c) {
            for (long s = 0; s < 4; ++s) {
                for (long t = 0; t < 4; ++t) {
                    HermForm x{Rat(a), Rat(c), QuadInt(Rat(s), Rat(t), -4)};
                    int chi = chi_D(x);
                    if (chi == 0) continue;
                    ++support;
                    CHECK(is_integer(x.det() / 4));  // e(-Q/|D|) = 1 termwise
                    // same class mod 4L: shifts of every basis vector
                    HermForm shifts[4] = {
                        {x.a + 4, x.c, x.b},
                        {x.a, x.c + 4, x.b},
                        {x.a, x.c, x.b + QuadInt(Rat(4), Rat(0), -4)},
                        {x.a, x.c, x.b + QuadInt(Rat(0), Rat(4), -4)},
                    };
                    for (const HermForm& y : shifts) CHECK(chi_D(y) == chi);
                }
            }
        }
    }
    CHECK(support > 0);  // the vector is not trivial
}

TEST_CASE("rankin-cohen kernel at weights (3/2, 1/2)") {
    // the bracket entering the odd-s doubly twisted evaluation:
    // [f,g]_1 = (1/2) f' g - (3/2) f g' for k = 3/2, l = 1/2
    DiscGroup cyc8 = DiscGroup::from_gram({{8}});
    QSeries f = theta_unary_threehalf(8, Rat(3), cyc8);
    QSeries g;
    g.group = &cyc8;
    g.rep = Rep::Rho;
    g.weight = Rat(1, 2);
    g.add_term(2, Rat(1, 4), SymbolicScalar::rational(3));
    g.add_term(0, Rat(1), SymbolicScalar::rational(-2));

    size_t m = cyc8.size();
    std::vector<std::vector<int>> idx(m, std::vector<int>(m));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) idx[i][j] = (int)((i + j) % m);  // cyclic addition
    QSeries br = rankin_cohen(f, Rat(3, 2), g, Rat(1, 2), 1, idx, cyc8);
    for (const auto& [key, val] : br.terms) {
        SymbolicScalar expect;
        for (const auto& [fk, fv] : f.terms) {
            for (const auto& [gk, gv] : g.terms) {
                if (idx[fk.first][gk.first] != key.first) continue;
                if (fk.second + gk.second != key.second) continue;
                Rat kernel = Rat(1, 2) * fk.second - Rat(3, 2) * gk.second;
                SymbolicScalar prod = fv;
                prod *= gv.coeff(SymbolicScalar::Kind::One) * kernel;
                expect += prod;
            }
        }
        CHECK(expect == val);
    }
    CHECK(!br.terms.empty());
}

TEST_CASE("numeric LHS matches the symbolic RHS at moderate cutoff") {
    GreenConfig cfg;
    cfg.T = 200;
    cfg.ladder = 3;
    cfg.extrapolate = true;
    LhsValue lhs = double_trace_lhs(-4, 2.0, pp_ex1(1), 1, 0, false, cfg);
    double rhs = (double)double_trace_rhs(-4, 1, pp_ex1(1), 1, 0).numeric();
    CHECK(std::abs(lhs.value - rhs) / std::abs(rhs) < 2e-2);

    LhsValue tl = double_trace_lhs(-4, 2.0, pp_55(1), 1, 0, true, cfg);
    double trhs =
        (double)twisted_partial_rhs(-4, 1, pp_55(1), 1, builtin_vartheta_table()).numeric();
    CHECK(std::abs(tl.value - trhs) / std::abs(trhs) < 2e-2);
}

TEST_CASE("verification reports serialize") {
    VerificationReport r = verify_identity("twisted_trace_zero");
    CHECK(r.pass);
    std::string j = report_to_json(r);
    CHECK(j.find("\"id\":\"twisted_trace_zero\"") != std::string::npos);
    CHECK(j.find("\"pass\":true") != std::string::npos);
}
