// nestlab command line: classification, nest reports, renormalization,
// kneading, parameter windows, capacities, scans, the exclusion simulator
// and SVG rendering.
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nestlab/capacity.hpp"
#include "nestlab/exclusion.hpp"
#include "nestlab/nest.hpp"
#include "nestlab/orbitstats.hpp"
#include "nestlab/scan.hpp"
#include "nestlab/svg.hpp"
#include "nestlab/symbolic.hpp"
#include "nestlab/window.hpp"

using namespace nestlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct GlobalOpts {
    long bits = 256;
    std::string tol = "1e-40";
    std::string out_format = "json";
};

PrecisionContext make_ctx(const GlobalOpts& g) {
    return PrecisionContext::make(static_cast<mpfr_prec_t>(g.bits), g.tol);
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nestlab: combinatorics and statistics of real quadratic dynamics"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOpts g;
    app.add_option("--bits", g.bits, "working precision in bits (>= 53)");
    app.add_option("--tol", g.tol, "endpoint tolerance (decimal)");
    app.add_option("--out", g.out_format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    // classify
    std::string a_str = "1.9";
    long iters = 4096;
    int max_period = 64;
    auto* c_cls = app.add_subcommand("classify", "classify the critical orbit behavior");
    c_cls->add_option("--a", a_str, "parameter (decimal)")->required();
    c_cls->add_option("--iters", iters, "iteration budget");
    c_cls->add_option("--max-period", max_period, "period budget");

    // nest
    int kappa = 0, depth = 2;
    double coverage = 0.99;
    bool no_autoraise = false;
    auto* c_nest = app.add_subcommand("nest", "build the principal nest and report it as JSON");
    c_nest->add_option("--a", a_str, "parameter (decimal)")->required();
    c_nest->add_option("--kappa", kappa, "starting renormalization depth");
    c_nest->add_option("--depth", depth, "number of levels");
    c_nest->add_option("--coverage", coverage, "branch coverage target per level");
    c_nest->add_flag("--no-auto-raise", no_autoraise, "do not double precision on exhaustion");

    // renorm
    int m_max = 8;
    auto* c_ren = app.add_subcommand("renorm", "detect renormalization intervals");
    c_ren->add_option("--a", a_str, "parameter (decimal)")->required();
    c_ren->add_option("--max-period", m_max, "largest period to test");

    // kneading
    int klen = 30;
    auto* c_knead = app.add_subcommand("kneading", "kneading word of the critical value");
    c_knead->add_option("--a", a_str, "parameter (decimal)")->required();
    c_knead->add_option("--len", klen, "word length");

    // window
    int level = 1, wj = 0;
    std::string kind = "J";
    auto* c_win = app.add_subcommand("window", "parameter window with certified endpoints");
    c_win->add_option("--a", a_str, "anchor parameter (decimal)")->required();
    c_win->add_option("--level", level, "nest level i");
    c_win->add_option("--kind", kind, "J or Jj")->check(CLI::IsMember({"J", "Jj"}));
    c_win->add_option("--j", wj, "branch index for Jj");
    c_win->add_option("--kappa", kappa, "starting renormalization depth");

    // xi
    int endpoints = 8;
    auto* c_xi = app.add_subcommand("xi", "sampled phase-parameter correspondence");
    c_xi->add_option("--a", a_str, "anchor parameter (decimal)")->required();
    c_xi->add_option("--level", level, "nest level i");
    c_xi->add_option("--endpoints", endpoints, "number of branch endpoints");
    c_xi->add_option("--kappa", kappa, "starting renormalization depth");

    // holonomy
    std::string g_str = "1.9";
    auto* c_hol = app.add_subcommand("holonomy", "phase-phase correspondence between two maps");
    c_hol->add_option("--a", a_str, "anchor parameter (decimal)")->required();
    c_hol->add_option("--g", g_str, "second parameter (decimal)")->required();
    c_hol->add_option("--level", level, "nest level i");
    c_hol->add_option("--kappa", kappa, "starting renormalization depth");

    // capacity
    std::string spec_path;
    auto* c_cap = app.add_subcommand("capacity", "qs constants and capacity bounds from a JSON spec");
    c_cap->add_option("--spec", spec_path, "JSON spec file")->required();

    // scan
    std::string range = "1.5:2";
    int nsamples = 100, workers = 1;
    uint64_t seed = 0;
    auto* c_scan = app.add_subcommand("scan", "batch parameter scan (deterministic CSV)");
    c_scan->add_option("--range", range, "parameter range lo:hi");
    c_scan->add_option("--n", nsamples, "number of samples");
    c_scan->add_option("--workers", workers, "worker threads");
    c_scan->add_option("--seed", seed, "RNG seed");

    // simulate-exclusion
    std::string schedule = "1e-6";
    long trials = 100000;
    double eps = 0.1;
    auto* c_sim = app.add_subcommand("simulate-exclusion", "random model for the return counts");
    c_sim->add_option("--schedule", schedule, "comma separated c_1,c_2,...");
    c_sim->add_option("--trials", trials, "trials per level");
    c_sim->add_option("--eps", eps, "window exponent epsilon");
    c_sim->add_option("--seed", seed, "RNG seed");

    // render
    std::string in_path, format = "svg-bifurcation", out_path = "out.svg";
    bool log_scale = false;
    auto* c_rend = app.add_subcommand("render", "render a scan CSV or nest JSON as SVG");
    c_rend->add_option("--in", in_path, "input file")->required();
    c_rend->add_option("--format", format, "svg-bifurcation | svg-nest-intervals");
    c_rend->add_option("--out", out_path, "output file")->required();
    c_rend->add_flag("--log-scale", log_scale, "log-scale the nest ladder");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        PrecisionContext ctx = make_ctx(g);

        if (*c_cls) {
            QuadraticMap map(a_str, ctx);
            Classification cls = classify(map, iters, max_period, ctx.tol);
            nlohmann::json j;
            j["a"] = a_str;
            j["classification"] = to_string(cls.tag);
            if (cls.tag == Classification::Tag::RegularSink) {
                j["period"] = cls.period;
                j["multiplier"] = cls.multiplier;
                j["sink_point"] = cls.sink_point.str(30);
            }
            if (cls.tag == Classification::Tag::SuperstableCycle) j["period"] = cls.period;
            if (cls.tag == Classification::Tag::RecurrentCandidate) j["kappa"] = cls.kappa;
            j["iters_used"] = cls.iters_used;
            j["bits"] = static_cast<long>(ctx.bits);
            emit(j);
            return kExitOk;
        }

        if (*c_nest) {
            PrecisionContext cur = ctx;
            NestResult nest;
            while (true) {
                QuadraticMap map(a_str, cur);
                nest = build_nest(map, kappa, depth, coverage);
                bool precision_like = nest.outcome == NestOutcome::PrecisionExhausted;
                if (!precision_like || no_autoraise ||
                    cur.bits >= PrecisionContext::kAutoRaiseCap)
                    break;
                cur = cur.doubled();
            }
            QuadraticMap map(a_str, cur);
            nlohmann::json j = nest_report_json(map, nest);
            // attach gape intervals where defined (i > 1)
            for (int i = 2; i < static_cast<int>(nest.levels.size()); ++i) {
                try {
                    GapeInterval gi = gape_interval(map, nest, i);
                    j["levels"][static_cast<size_t>(i)]["gape_lo"] = gi.interval.lo.str();
                    j["levels"][static_cast<size_t>(i)]["gape_hi"] = gi.interval.hi.str();
                } catch (const Error&) {
                    break;
                }
            }
            emit(j);
            bool clean = nest.outcome == NestOutcome::Completed ||
                         nest.outcome == NestOutcome::SinkDetected ||
                         nest.outcome == NestOutcome::CriticalEscape ||
                         nest.outcome == NestOutcome::NotRenormalizableDeeper;
            return clean ? kExitOk : kExitBudget;
        }

        if (*c_ren) {
            QuadraticMap map(a_str, ctx);
            auto recs = detect_renormalizations(map, m_max, ctx.tol);
            nlohmann::json j;
            j["a"] = a_str;
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : recs)
                arr.push_back({{"period", r.period},
                               {"T_lo", r.T.lo.str(30)},
                               {"T_hi", r.T.hi.str(30)},
                               {"hatT_lo", r.hatT.lo.str(30)},
                               {"hatT_hi", r.hatT.hi.str(30)}});
            j["renormalizations"] = std::move(arr);
            emit(j);
            return kExitOk;
        }

        if (*c_knead) {
            QuadraticMap map(a_str, ctx);
            KneadingWord w = kneading(map, klen);
            if (g.out_format == "csv") {
                std::cout << w.symbols << "\n";
            } else {
                nlohmann::json j;
                j["a"] = a_str;
                j["symbols"] = w.symbols;
                j["terminal"] = w.terminal;
                emit(j);
            }
            return kExitOk;
        }

        if (*c_win) {
            QuadraticMap map(a_str, ctx);
            WindowKind wk = kind == "J" ? WindowKind::J : WindowKind::Jj;
            ParameterWindow w = window(map, kappa, level, wk, ctx.tol, wj);
            nlohmann::json j;
            j["a"] = a_str;
            j["level"] = w.level;
            j["kind"] = kind;
            if (wk == WindowKind::Jj) j["j"] = w.j;
            j["lo"] = w.interval.lo.str();
            j["hi"] = w.interval.hi.str();
            j["lo_certified_outside"] = w.lo_out.str();
            j["hi_certified_outside"] = w.hi_out.str();
            emit(j);
            return kExitOk;
        }

        if (*c_xi) {
            QuadraticMap map(a_str, ctx);
            XiSample xs = xi_sample(map, kappa, level, endpoints, ctx.tol);
            if (g.out_format == "json") {
                nlohmann::json j;
                j["a"] = a_str;
                j["level"] = level;
                nlohmann::json arr = nlohmann::json::array();
                for (size_t k = 0; k < xs.pairs.size(); ++k)
                    arr.push_back({{"address", static_cast<long>(k)},
                                   {"phase_x", xs.pairs[k].first.str()},
                                   {"param_a", xs.pairs[k].second.str()}});
                j["pairs"] = std::move(arr);
                emit(j);
            } else {
                std::cout << "address,phase_x,param_a\n";
                for (size_t k = 0; k < xs.pairs.size(); ++k)
                    std::cout << k << "," << xs.pairs[k].first.str() << ","
                              << xs.pairs[k].second.str() << "\n";
            }
            return kExitOk;
        }

        if (*c_hol) {
            QuadraticMap f(a_str, ctx);
            QuadraticMap gmap(g_str, ctx);
            HolonomyPairs hp = holonomy_sample(f, gmap, kappa, level, ctx.tol);
            if (g.out_format == "json") {
                nlohmann::json j;
                j["a"] = a_str;
                j["g"] = g_str;
                j["level"] = level;
                nlohmann::json arr = nlohmann::json::array();
                for (size_t k = 0; k < hp.pairs.size(); ++k)
                    arr.push_back({{"address", static_cast<long>(k)},
                                   {"phase_x", hp.pairs[k].first.str()},
                                   {"phase_y", hp.pairs[k].second.str()}});
                j["pairs"] = std::move(arr);
                emit(j);
            } else {
                std::cout << "address,phase_x,phase_y\n";
                for (size_t k = 0; k < hp.pairs.size(); ++k)
                    std::cout << k << "," << hp.pairs[k].first.str() << ","
                              << hp.pairs[k].second.str() << "\n";
            }
            return kExitOk;
        }

        if (*c_cap) {
            std::ifstream in(spec_path);
            if (!in) throw SchemaError("cannot open spec: " + spec_path);
            nlohmann::json spec;
            try {
                in >> spec;
            } catch (const std::exception& e) {
                throw SchemaError(std::string("invalid JSON: ") + e.what());
            }
            std::string mode = spec.value("mode", "lower_bound");
            PowerFamily fam;
            if (spec.contains("family")) {
                const auto& f = spec["family"];
                fam.max_exponent = f.value("p", fam.max_exponent);
                fam.breakpoints = f.value("breakpoints", fam.breakpoints);
                fam.strict = f.value("strict", fam.strict);
            }
            double k = spec.value("k", 2.0);
            auto parse_intervals = [&](const nlohmann::json& arr) {
                std::vector<RealInterval> out;
                for (const auto& p : arr)
                    out.push_back(RealInterval(Real(p[0].get<double>(), ctx.bits),
                                               Real(p[1].get<double>(), ctx.bits)));
                return out;
            };
            nlohmann::json j;
            if (mode == "qs_constant") {
                std::vector<std::pair<Real, Real>> pairs;
                for (const auto& p : spec["pairs"])
                    pairs.emplace_back(Real(p[0].get<double>(), ctx.bits),
                                       Real(p[1].get<double>(), ctx.bits));
                j["qs_constant"] = qs_constant(MonotonePairs::normalized(pairs));
            } else if (mode == "lower_bound") {
                RealInterval T(Real(spec["T"][0].get<double>(), ctx.bits),
                               Real(spec["T"][1].get<double>(), ctx.bits));
                CapacityEstimate est = capacity_lower_bound(parse_intervals(spec["X"]), T, k, fam);
                j["value"] = est.value;
                j["k"] = est.k;
                j["family"] = est.family;
            } else if (mode == "tree_check") {
                RealInterval T(Real(spec["T"][0].get<double>(), ctx.bits),
                               Real(spec["T"][1].get<double>(), ctx.bits));
                TreeCheck tc = tree_subadditivity_check(parse_intervals(spec["children"]), T,
                                                        parse_intervals(spec["X"]), k, fam);
                j["holds"] = tc.holds;
                j["family_artifact"] = tc.family_artifact;
                j["slack"] = tc.slack;
                j["lhs"] = tc.lhs;
                j["cover"] = tc.cover;
                j["sup_child"] = tc.sup_child;
            } else {
                throw SchemaError("unknown capacity mode: " + mode);
            }
            emit(j);
            return kExitOk;
        }

        if (*c_scan) {
            size_t colon = range.find(':');
            if (colon == std::string::npos) throw DomainError("range must be lo:hi");
            double lo = std::stod(range.substr(0, colon));
            double hi = std::stod(range.substr(colon + 1));
            ScanResult res = scan(lo, hi, nsamples, ctx, ScanBudgets{}, workers, seed);
            if (g.out_format == "json")
                emit(scan_json(res));
            else
                std::cout << scan_csv(res);
            return kExitOk;
        }

        if (*c_sim) {
            ExclusionModel model;
            model.trials = trials;
            model.seed = seed;
            std::stringstream ss(schedule);
            std::string tok;
            while (std::getline(ss, tok, ',')) model.c_schedule.push_back(std::stod(tok));
            ExclusionReport rep = exclusion_simulation(model, eps);
            nlohmann::json j;
            j["eps"] = rep.eps;
            j["trials"] = rep.trials;
            j["seed"] = rep.seed;
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& st : rep.levels) {
                nlohmann::json row;
                row["c"] = st.c;
                row["median_ratio"] = st.median_ratio;
                row["window_prob"] = st.window_prob;
                row["escape_prob"] = st.escape_prob;
                row["escape_bound"] = st.escape_bound;
                row["escape_sigma"] = st.escape_sigma;
                row["low_trials"] = st.low_trials;
                nlohmann::json tails = nlohmann::json::array();
                for (const auto& tp : st.tails)
                    tails.push_back({{"k", tp.k},
                                     {"empirical", tp.empirical},
                                     {"expected", tp.expected},
                                     {"sigma", tp.sigma}});
                row["tails"] = std::move(tails);
                arr.push_back(std::move(row));
            }
            j["levels"] = std::move(arr);
            emit(j);
            return kExitOk;
        }

        if (*c_rend) {
            render_file(in_path, format, out_path, log_scale);
            return kExitOk;
        }
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
