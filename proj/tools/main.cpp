// Command line frontend: class enumeration, Green's function evaluation,
// Eisenstein coefficients, double-trace assembly, and the verification suite.
//
// Exit codes: 0 success / all identities pass, 1 usage error, 2 verification
// failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "h3green/traces.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace h3green;
using nlohmann::json;

namespace {

int env_threads() {
    const char* v = std::getenv("H3GREEN_THREADS");
    if (!v) return 1;
    int n = std::atoi(v);
    return n > 0 ? n : 1;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// coset label "b1,b2" (tuple in (Z/2)^2-style coordinates of the b-part
// numerators over 2) or a single index
int parse_coset(const Int& D, const std::string& text) {
    DiscGroupField g = discriminant_group_reps(D);
    auto parts = split_csv(text);
    if (parts.size() == 1) {
        int idx = std::stoi(parts[0]);
        if (idx < 0 || idx >= (int)g.reps.size()) throw Error("coset index out of range");
        return idx;
    }
    if (parts.size() == 2) {
        // (b1 + b2 * omega') / 2 style label: b = (b1 + i b2)/2 for D = -4;
        // generally the class of (b1 + b2 sqrt(D))/(2 sqrt(D)/sqrt(D)) is
        // matched through the coordinates of (b1 + b2 * i_D)/2
        long b1 = std::stol(parts[0]), b2 = std::stol(parts[1]);
        // i_D = omega - D/2 has coordinates (-D/2, 1)
        Rat x = Rat(b1, 2) - Rat(to_long(D), 2) * Rat(b2, 2);
        Rat y = Rat(b2, 2);
        x.canonicalize();
        y.canonicalize();
        QuadInt b(x - Rat(rat_floor(x)), y - Rat(rat_floor(y)), D);
        return g.index_of(b);
    }
    throw Error("coset label must be an index or b1,b2");
}

Point3 parse_point(const std::string& text) {
    auto parts = split_csv(text);
    if (parts.size() != 3) throw Error("point must be re,im,r");
    Point3 p;
    p.z = {std::stod(parts[0]), std::stod(parts[1])};
    p.r = std::stod(parts[2]);
    if (p.r <= 0) throw Error("point needs r > 0");
    return p;
}

json symbolic_to_json(const SymbolicScalar& s) {
    json terms = json::array();
    for (const auto& [tag, c] : s.terms()) {
        json t;
        switch (tag.kind) {
            case SymbolicScalar::Kind::One: t["tag"] = "one"; break;
            case SymbolicScalar::Kind::Pi: t["tag"] = "pi"; break;
            case SymbolicScalar::Kind::LogPrime:
                t["tag"] = "log";
                t["p"] = tag.arg;
                break;
            case SymbolicScalar::Kind::LValue:
                t["tag"] = "L";
                t["delta0"] = tag.arg;
                break;
        }
        t["coeff"] = c.get_str();
        terms.push_back(t);
    }
    return terms;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"special values of automorphic Green's functions on hyperbolic 3-space"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file");
    int threads = env_threads();
    app.add_option("--threads", threads, "worker threads for the group-ball summation");

    // classes
    auto* cmd_classes = app.add_subcommand("classes", "enumerate form classes");
    long cl_disc = -4;
    std::string cl_det = "1", cl_coset = "0,0";
    bool cl_primitive = false, cl_json = false;
    cmd_classes->add_option("--disc", cl_disc, "field discriminant (negative)")->required();
    cmd_classes->add_option("--det", cl_det, "determinant (rational)")->required();
    cmd_classes->add_option("--coset", cl_coset, "coset label b1,b2 or index");
    cmd_classes->add_flag("--primitive", cl_primitive, "primitive classes only");
    cmd_classes->add_flag("--json", cl_json, "emit JSON");

    // green
    auto* cmd_green = app.add_subcommand("green", "evaluate the Green's function");
    long gr_disc = -4;
    double gr_s = 2.0, gr_T = 400.0;
    int gr_ladder = 3;
    std::string gr_p1 = "0,0,1", gr_p2 = "0,0,2";
    bool gr_extrapolate = false;
    cmd_green->add_option("--disc", gr_disc)->required();
    cmd_green->add_option("--s", gr_s, "spectral parameter, > 1");
    cmd_green->add_option("--p1", gr_p1, "first point re,im,r");
    cmd_green->add_option("--p2", gr_p2, "second point re,im,r");
    cmd_green->add_option("--T", gr_T, "cosh cutoff");
    cmd_green->add_option("--ladder", gr_ladder, "dyadic cutoffs used for the tail fit")
        ->check(CLI::Range(1, 8));
    cmd_green->add_flag("--extrapolate", gr_extrapolate, "Richardson extrapolation in T");

    // eisenstein
    auto* cmd_eis = app.add_subcommand("eisenstein", "Eisenstein coefficient c^+(n,gamma)");
    std::string ei_gram = "8,2,2", ei_n = "1", ei_coset = "0,0,0";
    cmd_eis->add_option("--gram", ei_gram, "diagonal Gram entries d1,d2,d3");
    cmd_eis->add_option("--n", ei_n, "index (rational)");
    cmd_eis->add_option("--coset", ei_coset, "coset tuple x,y,z (numerators over the entry)");

    // double trace
    auto* cmd_dt = app.add_subcommand("double_trace", "exact double-trace right-hand side");
    long dt_disc = -4;
    int dt_n = 1;
    std::string dt_pp = "1;0,0;2", dt_mprime = "4", dt_muprime = "0,0";
    bool dt_twisted = false;
    cmd_dt->add_option("--disc", dt_disc)->required();
    cmd_dt->add_option("--n", dt_n, "half weight: input weight is 1-2n");
    cmd_dt->add_option("--pp", dt_pp, "principal part entries m;mu1,mu2;coeff joined by +");
    cmd_dt->add_option("--mprime", dt_mprime, "trace determinant (rational)");
    cmd_dt->add_option("--muprime", dt_muprime, "trace coset");
    cmd_dt->add_flag("--twisted", dt_twisted, "partially twisted variant");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run verification identities");
    std::string vf_id, vf_format = "pretty";
    bool vf_all = false, vf_json = false;
    double vf_T = 0.0;
    std::string vf_table;
    cmd_verify->add_option("--id", vf_id, "identity id");
    cmd_verify->add_flag("--all", vf_all, "run the whole registry");
    cmd_verify->add_flag("--json", vf_json, "emit JSON reports (same as --format json)");
    cmd_verify->add_option("--format", vf_format, "output format: pretty, json, csv")
        ->check(CLI::IsMember({"pretty", "json", "csv"}));
    cmd_verify->add_option("--T", vf_T, "override the top cosh cutoff");
    cmd_verify->add_option("--vartheta-file", vf_table,
                           "JSON file with the ingested xi-preimage tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*cmd_classes) {
            ClassList cl = enumerate_classes(cl_disc, parse_rational(cl_det),
                                             parse_coset(cl_disc, cl_coset), cl_primitive);
            if (cl_json) {
                std::printf("%s\n", cl.to_json().c_str());
            } else {
                std::printf("disc %ld, det %s, coset %d, %s: %zu classes\n", cl_disc,
                            cl_det.c_str(), cl.coset, cl_primitive ? "primitive" : "all",
                            cl.reps.size());
                for (const auto& r : cl.reps) {
                    Point3 p = special_point(r.form);
                    std::printf("  [a=%s, b=(%s,%s)w, c=%s]  |stab|=%ld  chi=%+d  point=(%g,%g)+%gj\n",
                                r.form.a.get_str().c_str(), r.form.b.x().get_str().c_str(),
                                r.form.b.y().get_str().c_str(), r.form.c.get_str().c_str(),
                                r.stabilizer_order, chi_D(r.form), p.z.real(), p.z.imag(), p.r);
                }
            }
            return 0;
        }

        if (*cmd_green) {
            GreenConfig cfg;
            cfg.T = gr_T;
            cfg.extrapolate = gr_extrapolate;
            cfg.ladder = gr_extrapolate ? gr_ladder : 1;
            cfg.threads = threads;
            GreenEval e = green_function(gr_disc, parse_point(gr_p1), parse_point(gr_p2), gr_s, cfg);
            json j;
            j["value"] = e.value;
            j["T"] = e.truncation_bound;
            j["terms_used"] = e.terms_used;
            j["tail_estimate"] = e.tail_estimate;
            j["extrapolated"] = e.extrapolated;
            std::printf("%s\n", j.dump().c_str());
            return 0;
        }

        if (*cmd_eis) {
            auto parts = split_csv(ei_gram);
            if (parts.size() != 3) throw Error("gram must be d1,d2,d3");
            TernaryLattice lat = TernaryLattice::diagonal(std::stol(parts[0]), std::stol(parts[1]),
                                                          std::stol(parts[2]));
            auto cparts = split_csv(ei_coset);
            if (cparts.size() != 3) throw Error("coset must be x,y,z");
            std::array<Rat, 3> v;
            for (int i = 0; i < 3; ++i) {
                v[i] = Rat(std::stol(cparts[i]), to_long(lat.gram[i][i]));
                v[i].canonicalize();
            }
            EisCoefficient c = eis_coefficient_plus(lat, parse_rational(ei_n), lat.coset_index(v));
            json j;
            j["value_symbolic"] = is_perfect_square(c.half_det)
                                      ? c.value_times_pi().str() + " / pi"
                                      : c.value_times_pi_scaled.str() + " / (pi sqrt(" +
                                            c.half_det.get_str() + "))";
            j["value_numeric"] = (double)c.numeric();
            j["case"] = c.kind == EisCase::NonsquareDisc
                            ? "nonsquare_disc"
                            : (c.kind == EisCase::SquareDisc ? "square_disc" : "zero_index");
            std::printf("%s\n", j.dump().c_str());
            return 0;
        }

        if (*cmd_dt) {
            PrincipalPart pp;
            pp.n = dt_n;
            std::stringstream ss(dt_pp);
            std::string entry;
            while (std::getline(ss, entry, '+')) {
                auto fields = [&] {
                    std::vector<std::string> out;
                    std::stringstream es(entry);
                    std::string f;
                    while (std::getline(es, f, ';')) out.push_back(f);
                    return out;
                }();
                if (fields.size() != 3) throw Error("pp entry must be m;mu;coeff");
                pp.entries.push_back({parse_rational(fields[0]), parse_coset(dt_disc, fields[1]),
                                      parse_rational(fields[2])});
            }
            SymbolicScalar rhs =
                dt_twisted
                    ? twisted_partial_rhs(dt_disc, dt_n, pp, parse_rational(dt_mprime),
                                          builtin_vartheta_table())
                    : double_trace_rhs(dt_disc, dt_n, pp, parse_rational(dt_mprime),
                                       parse_coset(dt_disc, dt_muprime));
            json j;
            j["rhs_symbolic"] = rhs.str();
            j["rhs_terms"] = symbolic_to_json(rhs);
            j["rhs_numeric"] = (double)rhs.numeric();
            std::printf("%s\n", j.dump().c_str());
            return 0;
        }

        if (*cmd_verify) {
            if (!vf_table.empty()) {
                std::ifstream in(vf_table);
                if (!in) throw Error("cannot open " + vf_table);
                std::stringstream buf;
                buf << in.rdbuf();
                VarthetaTable t = parse_vartheta_json(buf.str());  // validates the schema
                std::fprintf(stderr, "loaded vartheta table: disc %s, %zu labels\n",
                             t.disc.get_str().c_str(), t.labels.size());
            }
            std::vector<std::string> ids;
            if (vf_all)
                ids = identity_registry();
            else if (!vf_id.empty())
                ids.push_back(vf_id);
            else {
                std::fprintf(stderr, "verify: need --id or --all\n");
                return 1;
            }
            if (vf_json) vf_format = "json";
            if (vf_format == "csv")
                std::printf("id,pass,lhs,rhs_numeric,rel_err,tolerance,rhs_symbolic\n");
            bool all_pass = true;
            for (const auto& id : ids) {
                VerificationReport r = verify_identity(id, vf_T, threads);
                all_pass &= r.pass;
                if (vf_format == "json") {
                    std::printf("%s\n", report_to_json(r).c_str());
                } else if (vf_format == "csv") {
                    std::printf("%s,%s,%.12g,%.12g,%.3e,%.0e,\"%s\"\n", r.id.c_str(),
                                r.pass ? "pass" : "fail", r.lhs, r.rhs_numeric, r.rel_err,
                                r.tolerance, r.rhs_symbolic.c_str());
                } else {
                    std::printf("[%s] %-22s lhs=%.6f rhs=%.6f  rel=%.2e tol=%.0e  rhs: %s (%.1fs)\n",
                                r.pass ? "PASS" : "FAIL", r.id.c_str(), r.lhs, r.rhs_numeric,
                                r.rel_err, r.tolerance, r.rhs_symbolic.c_str(), r.seconds);
                }
            }
            return all_pass ? 0 : 2;
        }
    } catch (const CLI::ParseError& e) {
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
