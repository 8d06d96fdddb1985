#include "commands.hpp"

#include "qgb/bounds.hpp"
#include "qgb/divergence.hpp"
#include "qgb/errors.hpp"
#include "qgb/fig2.hpp"
#include "qgb/optimize.hpp"
#include "qgb/parallel.hpp"
#include "qgb/plot.hpp"
#include "qgb/subgaussian.hpp"
#include "qgb/tails.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#ifndef QGB_DOCS_DIR
#define QGB_DOCS_DIR "docs"
#endif

namespace qgb::cli {

namespace {

const std::map<std::string, double> kDefaultTolerances{{"soundness", 1e-9}, {"hoeffding", 1e-9}, {"coverage_sigmas", 3.0}};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string normalize_kind(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json term_json(const TermValue& t) { return t.infinite ? Json("inf") : Json(t.value); }

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        int n = 0;
        char tail = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &tail) != 3 || !(lo > 0) || !(hi > lo) || n < 2)
            throw ConfigError("grid '" + spec + "' must look like lo:hi:n with 0 < lo < hi and n >= 2");
        return log_grid(lo, hi, n);
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("grid entry '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError("grid is empty");
    std::sort(out.begin(), out.end());
    return out;
}

void split_grid(const std::vector<double>& g, std::vector<double>& below, std::vector<double>& above) {
    below.clear();
    above.clear();
    for (double v : g) {
        if (!(v > 0.0) || v == 1.0) throw DomainError("grid values must be positive and different from 1");
        (v < 1.0 ? below : above).push_back(v);
    }
}

void emit(const Globals& g, std::ostream& out, const Json& result, const std::string& csv) {
    const Json r = rounded(result, g.digits);
    if (!g.out.empty() && ends_with(g.out, ".csv")) {
        write_text(g.out, csv);
    } else if (!g.out.empty()) {
        write_text(g.out, r.dump(2) + "\n");
        return;
    }
    out << r.dump(2) << "\n";
}

std::vector<double> diagonal_or_dist(const Json& j, const std::string& field) {
    if (j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number(); })) {
        std::vector<double> p;
        for (const auto& e : j) p.push_back(e.get<double>());
        return p;
    }
    const Mat m = matrix_from_json(j, field);
    if (m.rows() != m.cols()) throw ConfigError("field '" + field + "': expected a square matrix");
    Mat off = m;
    off.diagonal().setZero();
    if (off.norm() > 1e-12 || m.diagonal().imag().norm() > 1e-12)
        throw ConfigError("field '" + field + "': classical divergences need a diagonal matrix or a probability list");
    std::vector<double> p;
    for (int i = 0; i < m.rows(); ++i) p.push_back(m(i, i).real());
    return p;
}

Json divergence_json(const DivergenceValue& d, std::optional<double> alpha) {
    Json r;
    r["command"] = "divergence";
    r["kind"] = to_string(d.kind);
    r["alpha"] = optional_number(alpha);
    r["value"] = d.infinite ? Json(nullptr) : Json(d.value);
    r["infinite"] = d.infinite;
    if (d.diagnostics) {
        const auto& o = *d.diagnostics;
        r["diagnostics"] = Json{{"iterations", o.iterations},
                                {"restarts", o.restarts},
                                {"final_gradient_norm", o.final_gradient_norm},
                                {"spread", o.spread},
                                {"warning", o.warning}};
    }
    return r;
}

struct DivergenceArgs {
    std::string kind = "petz";
    std::optional<double> alpha;
    std::string rho, sigma;
    double epsilon = 0.0;
    int restarts = 4;
};

int cmd_divergence(const Globals& g, const DivergenceArgs& a, std::ostream& out) {
    const DivKind kind = div_kind_from_string(normalize_kind(a.kind));
    const Json rj = json_argument(a.rho), sj = json_argument(a.sigma);
    const auto need_alpha = [&] {
        if (!a.alpha) throw ConfigError("--alpha is required for kind '" + a.kind + "'");
        return *a.alpha;
    };
    DivergenceValue d;
    std::optional<double> alpha;
    switch (kind) {
        case DivKind::classical:
        case DivKind::kl:
        case DivKind::smooth_max: {
            const auto p = diagonal_or_dist(rj, "rho"), q = diagonal_or_dist(sj, "sigma");
            const ClassicalDist pd(p), qd(q);
            if (kind == DivKind::classical) {
                alpha = need_alpha();
                d = classical_renyi(pd, qd, *alpha);
            } else if (kind == DivKind::kl) {
                d = classical_kl(pd, qd);
            } else {
                alpha = a.epsilon;
                d = smooth_max_divergence(pd, qd, a.epsilon);
            }
            break;
        }
        default: {
            const State rho = state_from_json(rj, "rho"), sigma = state_from_json(sj, "sigma");
            if (kind == DivKind::relative_entropy) {
                d = quantum_relative_entropy(rho, sigma);
            } else if (kind == DivKind::measured) {
                alpha = need_alpha();
                MeasuredConfig cfg;
                cfg.random_restarts = a.restarts;
                cfg.seed = g.seed;
                d = measured_renyi(rho, sigma, *alpha, cfg);
            } else {
                alpha = need_alpha();
                switch (kind) {
                    case DivKind::petz: d = petz_renyi(rho, sigma, *alpha); break;
                    case DivKind::sandwiched: d = sandwiched_renyi(rho, sigma, *alpha); break;
                    case DivKind::reverse_sandwiched: d = reverse_sandwiched(rho, sigma, *alpha); break;
                    default: d = modified_sandwiched(rho, sigma, *alpha); break;
                }
            }
        }
    }
    const Json r = divergence_json(d, alpha);
    std::string csv = "kind,alpha,value,infinite\n" + to_string(d.kind) + "," + (alpha ? format_number(*alpha) : "") + "," +
                      (d.infinite ? "inf" : format_number(d.value)) + "," + (d.infinite ? "true" : "false") + "\n";
    emit(g, out, r, csv);
    return d.diagnostics && d.diagnostics->warning ? warning : ok;
}

struct HoeffdingArgs {
    std::string observable, state;
    double lambda_min = -10.0, lambda_max = 10.0;
    int steps = 101;
    std::optional<double> a, b;
};

int cmd_hoeffding(const Globals& g, const HoeffdingArgs& h, std::ostream& out) {
    const Observable l = observable_from_json(json_argument(h.observable), "observable");
    const State rho = state_from_json(json_argument(h.state), "state");
    if (!(h.lambda_max > h.lambda_min) || h.steps < 2) throw ConfigError("lambda grid needs lambda-max > lambda-min and steps >= 2");
    const std::vector<double> grid = linear_grid(h.lambda_min, h.lambda_max, h.steps);
    const double a = h.a.value_or(l.lambda_min()), b = h.b.value_or(l.lambda_max());
    const HoeffdingCheck c = check_quantum_hoeffding(l, rho, a, b, grid);
    const bool holds = c.worst_slack >= -g.tolerance("hoeffding");
    Json r;
    r["command"] = "hoeffding";
    r["a"] = a;
    r["b"] = b;
    r["holds"] = holds;
    r["worst_slack"] = c.worst_slack;
    r["worst_lambda"] = c.worst_lambda;
    r["mu_spectral"] = derive_mu_from_spectrum(l).mu;
    r["mu_norm"] = derive_mu_from_norm(l).mu;
    r["mu_grid_fit"] = fit_mu_on_grid(l, rho, grid).mu;
    const std::string csv = "holds,worst_slack,worst_lambda,a,b\n" + std::string(holds ? "true" : "false") + "," +
                            format_number(c.worst_slack) + "," + format_number(c.worst_lambda) + "," + format_number(a) +
                            "," + format_number(b) + "\n";
    emit(g, out, r, csv);
    return holds ? ok : warning;
}

struct BoundArgs {
    std::string instance;
    std::string kind = "renyi-mod";
    std::string alpha_grid, gamma_grid;
    double p = 2.0;
};

Json regime_json(const std::optional<RegimeOptimum>& r) {
    if (!r) return nullptr;
    return Json{{"alpha", r->alpha},
                {"gamma", r->gamma},
                {"quantum", term_json(r->quantum)},
                {"classical", term_json(r->classical)},
                {"total", term_json(r->total)}};
}

BoundOptions bound_options(const std::string& alpha_grid, const std::string& gamma_grid) {
    BoundOptions o = default_bound_options();
    if (!alpha_grid.empty()) split_grid(parse_grid(alpha_grid), o.alpha_below_one, o.alpha_above_one);
    if (!gamma_grid.empty()) split_grid(parse_grid(gamma_grid), o.gamma_below_one, o.gamma_above_one);
    return o;
}

int cmd_bound(const Globals& g, const BoundArgs& a, std::ostream& out) {
    const LearningInstance inst = load_instance(a.instance);
    const BoundKind kind = bound_kind_from_string(a.kind);
    const BoundOptions opts = bound_options(a.alpha_grid, a.gamma_grid);
    const InducedJoint j = induce(inst);
    const BoundReport rep = bound_by_kind(kind, j, inst, opts, a.p);
    const bool sound = rep.vacuous || rep.realized_abs_gen <= rep.optimum + g.tolerance("soundness");
    Json r;
    r["command"] = "bound";
    r["kind"] = to_string(rep.kind);
    r["divergence"] = rep.divergence;
    r["optimum"] = rep.vacuous ? Json(nullptr) : Json(rep.optimum);
    r["vacuous"] = rep.vacuous;
    r["argmin_alpha"] = optional_number(rep.argmin_alpha);
    r["argmin_gamma"] = optional_number(rep.argmin_gamma);
    r["realized_abs_gen"] = rep.realized_abs_gen;
    r["old_definition"] = rep.old_definition;
    r["sound"] = sound;
    r["mu"] = rep.mu;
    r["tau"] = rep.tau;
    r["below_one"] = regime_json(rep.below_one);
    r["above_one"] = regime_json(rep.above_one);
    Json grid = Json::array();
    std::ostringstream csv;
    csv << "kind,param,value,optimum,realized_abs_gen,sound\n";
    for (const auto& p : rep.grid) {
        grid.push_back(Json{{"axis", p.axis}, {"param", p.param}, {"value", p.infinite ? Json("inf") : Json(p.value)}});
        csv << to_string(rep.kind) << ',' << p.axis << '=' << format_number(p.param) << ','
            << (p.infinite ? "inf" : format_number(p.value)) << ',' << (rep.vacuous ? "inf" : format_number(rep.optimum))
            << ',' << format_number(rep.realized_abs_gen) << ',' << (sound ? "true" : "false") << '\n';
    }
    r["grid"] = grid;
    Json warnings = Json::array();
    for (const auto& w : j.warnings) warnings.push_back(w);
    for (const auto& w : audit_instance(j, inst)) warnings.push_back(w);
    r["warnings"] = warnings;
    emit(g, out, r, csv.str());
    return (rep.vacuous || !sound || !warnings.empty()) ? warning : ok;
}

struct TailArgs {
    std::string instance;
    std::string kind = "classical-renyi";
    double delta = 0.1;
    std::optional<double> nu;
    double gamma = 2.0;
    int draws = 10000;
    std::string alpha_grid;
};

int cmd_tail(const Globals& g, const TailArgs& a, std::ostream& out) {
    const LearningInstance inst = load_instance(a.instance);
    const TailKind kind = tail_kind_from_string(a.kind);
    TailParams params;
    params.delta = a.delta;
    params.nu = a.nu.value_or(a.delta / 2.0);
    params.gamma = a.gamma;
    if (!a.alpha_grid.empty()) params.alpha_grid = parse_grid(a.alpha_grid);
    const InducedJoint j = induce(inst);
    const TailReport rep = verify_coverage(j, inst, kind, params, a.draws, g.seed, effective_cert(inst));
    const double threshold =
        1.0 - rep.delta - g.tolerance("coverage_sigmas") * std::sqrt(rep.delta * (1.0 - rep.delta) / rep.draws);
    const bool pass = rep.vacuous || rep.empirical_coverage >= threshold;
    const bool smooth = kind == TailKind::classical_smooth_max || kind == TailKind::quantum_smooth_max;
    const bool quantum = kind == TailKind::quantum_renyi || kind == TailKind::quantum_smooth_max;
    Json r;
    r["command"] = "tail";
    r["kind"] = to_string(kind);
    r["delta"] = rep.delta;
    r["epsilon"] = rep.vacuous ? Json(nullptr) : Json(rep.epsilon);
    r["vacuous"] = rep.vacuous;
    r["nu"] = smooth ? Json(rep.nu) : Json(nullptr);
    r["gamma"] = smooth ? Json(nullptr) : Json(rep.gamma);
    r["alpha"] = quantum ? Json(rep.alpha) : Json(nullptr);
    r["c1"] = quantum ? Json(rep.c1) : Json(nullptr);
    r["empirical_coverage"] = rep.empirical_coverage;
    r["draws"] = rep.draws;
    r["threshold"] = threshold;
    r["pass"] = pass;
    std::ostringstream csv;
    csv << "kind,delta,nu,gamma,alpha,epsilon,c1,empirical_coverage,draws,threshold,pass\n"
        << to_string(kind) << ',' << format_number(rep.delta) << ',' << (smooth ? format_number(rep.nu) : "") << ','
        << (smooth ? "" : format_number(rep.gamma)) << ',' << (quantum ? format_number(rep.alpha) : "") << ','
        << (rep.vacuous ? "inf" : format_number(rep.epsilon)) << ',' << (quantum ? format_number(rep.c1) : "") << ','
        << format_number(rep.empirical_coverage) << ',' << rep.draws << ',' << format_number(threshold) << ','
        << (pass ? "true" : "false") << '\n';
    emit(g, out, r, csv.str());
    return (rep.vacuous || !pass) ? warning : ok;
}

struct Fig2Args {
    std::string which = "both";
    std::string out_dir = ".";
};

int cmd_fig2(const Globals& g, const Fig2Args& a, std::ostream& out) {
    const Fig2Config cfg = default_fig2_config();
    const std::vector<std::string> files = emit_fig2(cfg, a.which, a.out_dir);
    Json r;
    r["command"] = "reproduce-fig2";
    r["files"] = files;
    Json checks = Json::object();
    bool all = true;
    if (a.which != "alpha") {
        const Table t = sweep_p(cfg);
        const int kl = t.column("B_kl"), mod = t.column("B_mod"), petz = t.column("B_petz"), gen = t.column("abs_expected_gen");
        bool le_petz = true, le_kl = true, sound = true;
        for (const auto& row : t.rows) {
            le_petz = le_petz && row[mod] <= row[petz] + 1e-9;
            le_kl = le_kl && row[mod] <= row[kl] + 1e-9;
            sound = sound && row[gen] <= std::min({row[kl], row[mod], row[petz]});
        }
        checks["p_sweep_mod_le_petz"] = le_petz;
        checks["p_sweep_mod_le_kl"] = le_kl;
        checks["p_sweep_sound"] = sound;
        all = all && le_petz && le_kl && sound;
    }
    if (a.which != "p") {
        const Table t = sweep_alpha(cfg);
        const int mod = t.column("B_mod"), petz = t.column("B_petz");
        bool le_petz = true;
        for (const auto& row : t.rows) le_petz = le_petz && row[mod] <= row[petz] + 1e-9;
        checks["alpha_sweep_mod_le_petz"] = le_petz;
        all = all && le_petz;
    }
    r["checks"] = checks;
    emit(g, out, r, "");
    return all ? ok : warning;
}

}  // namespace

double Globals::tolerance(const std::string& key) const {
    if (const auto it = tolerances.find(key); it != tolerances.end()) return it->second;
    return kDefaultTolerances.at(key);
}

Json rounded(const Json& j, int digits) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) return nullptr;
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        const double r = std::strtod(buf, nullptr);
        return r == 0.0 ? 0.0 : r;
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& e : j) out.push_back(rounded(e, digits));
        return out;
    }
    if (j.is_object()) {
        Json out = Json::object();
        for (const auto& [k, v] : j.items()) out[k] = rounded(v, digits);
        return out;
    }
    return j;
}

Json json_argument(const std::string& arg) {
    if (arg.empty()) throw ConfigError("missing JSON argument");
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json(arg, "<inline>");
    return load_json(arg);
}

std::map<std::string, double> parse_tolerances(const std::string& spec) {
    std::map<std::string, double> out;
    if (spec.empty()) return out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("tolerance override '" + item + "' must look like key=value");
        const std::string key = item.substr(0, eq);
        if (!kDefaultTolerances.count(key)) throw ConfigError("unknown tolerance key '" + key + "'");
        try {
            out[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("tolerance override '" + item + "' has no numeric value");
        }
    }
    return out;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum generalization bound toolkit"};
    app.require_subcommand(1);
    Globals g;
    std::string tolerance_spec;
    app.add_option("--seed", g.seed, "Seed for every stochastic output")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (QGB_THREADS takes precedence)");
    app.add_option("--digits", g.digits, "Significant digits in JSON output")->capture_default_str()->check(CLI::Range(1, 17));
    app.add_option("--tolerance-overrides", tolerance_spec, "Comma-separated key=value list (soundness, hoeffding, coverage_sigmas)");

    DivergenceArgs div;
    auto* sc_div = app.add_subcommand("divergence", "Evaluate a divergence between two states");
    sc_div->add_option("--kind", div.kind, "petz, sandwiched, reverse-sandwiched, modified, relative-entropy, measured, classical, kl, smooth-max")
        ->capture_default_str();
    sc_div->add_option("--alpha", div.alpha, "Order");
    sc_div->add_option("--rho", div.rho, "First argument (file or inline JSON)")->required();
    sc_div->add_option("--sigma", div.sigma, "Second argument (file or inline JSON)")->required();
    sc_div->add_option("--epsilon", div.epsilon, "Smoothing for smooth-max")->capture_default_str();
    sc_div->add_option("--restarts", div.restarts, "Random restarts for measured")->capture_default_str()->check(CLI::NonNegativeNumber);
    sc_div->add_option("--out", g.out, "Output file (.csv for CSV, otherwise JSON)");

    HoeffdingArgs hoe;
    auto* sc_hoe = app.add_subcommand("hoeffding", "Check the quantum Hoeffding inequality on a lambda grid");
    sc_hoe->add_option("--observable", hoe.observable, "Loss observable (file or inline JSON)")->required();
    sc_hoe->add_option("--state", hoe.state, "State (file or inline JSON)")->required();
    sc_hoe->add_option("--lambda-min", hoe.lambda_min)->capture_default_str();
    sc_hoe->add_option("--lambda-max", hoe.lambda_max)->capture_default_str();
    sc_hoe->add_option("--lambda-steps,--steps", hoe.steps)->capture_default_str();
    sc_hoe->add_option("--a", hoe.a, "Lower spectral bound (default: smallest eigenvalue)");
    sc_hoe->add_option("--b", hoe.b, "Upper spectral bound (default: largest eigenvalue)");
    sc_hoe->add_option("--out", g.out, "Output file (.csv for CSV, otherwise JSON)");

    BoundArgs bnd;
    auto* sc_bnd = app.add_subcommand("bound", "Evaluate an expected generalization bound");
    sc_bnd->add_option("--instance", bnd.instance, "Instance JSON file")->required();
    sc_bnd->add_option("--kind", bnd.kind, "l1, lp, kl, renyi-mod, renyi-petz, caro-old, iid, classical")->capture_default_str();
    sc_bnd->add_option("--alpha-grid", bnd.alpha_grid, "lo:hi:n (log-spaced) or a comma list");
    sc_bnd->add_option("--gamma-grid", bnd.gamma_grid, "lo:hi:n (log-spaced) or a comma list");
    sc_bnd->add_option("--p", bnd.p, "Schatten index for lp")->capture_default_str();
    sc_bnd->add_option("--out", g.out, "Output file (.csv for CSV, otherwise JSON)");

    TailArgs tl;
    auto* sc_tail = app.add_subcommand("tail", "Evaluate a single-draw tail bound and its Monte Carlo coverage");
    sc_tail->add_option("--instance", tl.instance, "Instance JSON file")->required();
    sc_tail->add_option("--kind", tl.kind, "classical-renyi, classical-smooth-max, quantum-renyi, quantum-smooth-max")
        ->capture_default_str();
    sc_tail->add_option("--delta", tl.delta)->capture_default_str();
    sc_tail->add_option("--nu", tl.nu, "Smoothing (default delta/2)");
    sc_tail->add_option("--gamma", tl.gamma)->capture_default_str();
    sc_tail->add_option("--draws", tl.draws)->capture_default_str();
    sc_tail->add_option("--alpha-grid", tl.alpha_grid, "Grid in (0, 1) for the deviation term");
    sc_tail->add_option("--seed", g.seed, "Seed for the Monte Carlo draws");
    sc_tail->add_option("--out", g.out, "Output file (.csv for CSV, otherwise JSON)");

    Fig2Args f2;
    auto* sc_fig = app.add_subcommand("reproduce-fig2", "Run the worked-example sweeps and write CSV and SVG files");
    sc_fig->add_option("--which", f2.which, "p, alpha or both")->capture_default_str()->check(CLI::IsMember({"p", "alpha", "both"}));
    sc_fig->add_option("--out-dir", f2.out_dir)->capture_default_str();

    SelftestOptions st;
    st.docs_dir = QGB_DOCS_DIR;
    auto* sc_self = app.add_subcommand("selftest", "Run the built-in property checks and the documented examples");
    sc_self->add_option("--docs-dir", st.docs_dir)->capture_default_str();
    sc_self->add_flag("--quick", st.quick, "Smaller sample counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }

    try {
        g.tolerances = parse_tolerances(tolerance_spec);
        if (g.threads > 0) set_threads(g.threads);
        if (sc_div->parsed()) return cmd_divergence(g, div, out);
        if (sc_hoe->parsed()) return cmd_hoeffding(g, hoe, out);
        if (sc_bnd->parsed()) return cmd_bound(g, bnd, out);
        if (sc_tail->parsed()) return cmd_tail(g, tl, out);
        if (sc_fig->parsed()) return cmd_fig2(g, f2, out);
        const Json r = run_selftest(g, st);
        out << rounded(r, g.digits).dump(2) << "\n";
        return r["failed"].get<int>() == 0 ? ok : warning;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return config_error;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << "\n";
        return config_error;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return config_error;
    } catch (const RangeError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
}

}  // namespace qgb::cli
