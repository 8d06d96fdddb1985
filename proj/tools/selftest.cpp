#include "commands.hpp"

#include "qgb/bounds.hpp"
#include "qgb/divergence.hpp"
#include "qgb/errors.hpp"
#include "qgb/fig2.hpp"
#include "qgb/instances.hpp"
#include "qgb/random.hpp"
#include "qgb/subgaussian.hpp"
#include "qgb/tails.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>

namespace qgb::cli {

namespace {

class Suite {
public:
    void check(const std::string& name, const std::function<std::string()>& body) {
        Json entry;
        entry["name"] = name;
        try {
            const std::string problem = body();
            entry["pass"] = problem.empty();
            if (!problem.empty()) entry["detail"] = problem;
        } catch (const std::exception& e) {
            entry["pass"] = false;
            entry["detail"] = std::string("exception: ") + e.what();
        }
        (entry["pass"].get<bool>() ? passed_ : failed_)++;
        checks_.push_back(entry);
    }

    Json report() const {
        Json r;
        r["command"] = "selftest";
        r["passed"] = passed_;
        r["failed"] = failed_;
        r["checks"] = checks_;
        return r;
    }

private:
    int passed_ = 0;
    int failed_ = 0;
    Json checks_ = Json::array();
};

std::string expect(bool ok, const std::string& what) { return ok ? "" : what; }

BoundOptions compact_options() {
    BoundOptions o;
    o.alpha_below_one = log_grid(0.05, 0.95, 9);
    o.alpha_above_one = log_grid(1.05, 4.0, 9);
    o.gamma_below_one = o.alpha_below_one;
    o.gamma_above_one = o.alpha_above_one;
    o.golden_iterations = 12;
    return o;
}

std::string check_instance(const LearningInstance& inst, const Globals& g, int draws) {
    const InducedJoint j = induce(inst);
    const BoundOptions opts = compact_options();
    std::vector<BoundKind> kinds{BoundKind::l1, BoundKind::kl, BoundKind::renyi_mod, BoundKind::renyi_petz,
                                 BoundKind::caro_old};
    if (inst.mode == InstanceMode::iid_local) kinds.push_back(BoundKind::iid);
    for (BoundKind k : kinds) {
        const BoundReport r = bound_by_kind(k, j, inst, opts);
        if (!r.vacuous && !(r.realized_abs_gen <= r.optimum + g.tolerance("soundness")))
            return to_string(k) + " bound " + format_number(r.optimum) + " is below |gen| " + format_number(r.realized_abs_gen);
    }
    std::vector<TailKind> tails{TailKind::classical_renyi, TailKind::classical_smooth_max};
    if (inst.mode == InstanceMode::iid_local) tails.push_back(TailKind::quantum_renyi);
    TailParams params;
    params.alpha_grid = log_grid(0.1, 0.9, 5);
    for (TailKind k : tails) {
        const TailReport t = verify_coverage(j, inst, k, params, draws, g.seed, effective_cert(inst));
        if (!t.pass) return to_string(k) + " coverage " + format_number(t.empirical_coverage) + " below " + format_number(t.threshold);
    }
    return "";
}

}  // namespace

Json run_selftest(const Globals& g, const SelftestOptions& opts) {
    Suite suite;
    const int pairs = opts.quick ? 10 : 40;
    const int draws = opts.quick ? 1000 : 4000;

    suite.check("petz example value", [] {
        const HilbertSpace q = HilbertSpace::single("q", 2);
        Mat r = Mat::Zero(2, 2), s = Mat::Zero(2, 2);
        r(0, 0) = 0.75;
        r(1, 1) = 0.25;
        s(0, 0) = s(1, 1) = 0.5;
        const double v = petz_renyi(State(q, r), State(q, s), 2.0).value;
        return expect(std::abs(v - std::log(1.25)) < 1e-12, "got " + format_number(v));
    });

    suite.check("classical relative entropy example", [] {
        const double v = classical_kl(ClassicalDist({0.75, 0.25}), ClassicalDist({0.5, 0.5})).value;
        return expect(std::abs(v - (0.75 * std::log(1.5) + 0.25 * std::log(0.5))) < 1e-12, "got " + format_number(v));
    });

    suite.check("hoeffding spot value", [] {
        const HilbertSpace q = HilbertSpace::single("q", 2);
        Mat z = Mat::Zero(2, 2);
        z(0, 0) = 1.0;
        z(1, 1) = -1.0;
        const Observable l(q, z);
        const State rho = State::maximally_mixed(q);
        const double v = quantum_mgf(l, rho, 1.0);
        const HoeffdingCheck c = check_quantum_hoeffding(l, rho, -1.0, 1.0, default_lambda_grid());
        return expect(std::abs(v - std::log(std::cosh(1.0))) < 1e-12 && c.holds, "mgf " + format_number(v));
    });

    suite.check("divergence ordering on random pairs", [&] {
        Rng rng(derive_seed(g.seed, 1));
        for (int t = 0; t < pairs; ++t) {
            const HilbertSpace h = HilbertSpace::single("q", 2 + t % 3);
            const State rho = random_density(h, h.dim(), rng), sigma = random_density(h, h.dim(), rng);
            for (double a : {0.3, 0.7, 1.5, 2.0}) {
                const double sw = sandwiched_renyi(rho, sigma, a).value;
                const double pz = petz_renyi(rho, sigma, a).value;
                const double md = modified_sandwiched(rho, sigma, a).value;
                if (a >= 0.5 && sw > pz + 1e-9) return "sandwiched above Petz at alpha " + format_number(a);
                if (md > pz + 1e-9) return "modified above Petz at alpha " + format_number(a);
            }
        }
        return std::string();
    });

    suite.check("data processing on random channels", [&] {
        Rng rng(derive_seed(g.seed, 2));
        for (int t = 0; t < pairs / 2; ++t) {
            const HilbertSpace h = HilbertSpace::single("q", 2);
            const State rho = random_density(h, 2, rng), sigma = random_density(h, 2, rng);
            const Channel ch = random_cptp(h, h, 2, rng);
            const State r2 = ch.apply(rho), s2 = ch.apply(sigma);
            for (double a : {0.3, 0.7, 2.0}) {
                if (modified_sandwiched(r2, s2, a).value > modified_sandwiched(rho, sigma, a).value + 1e-8)
                    return "modified divergence increased at alpha " + format_number(a);
            }
        }
        return std::string();
    });

    suite.check("measured divergence below the modified divergence", [&] {
        Rng rng(derive_seed(g.seed, 3));
        MeasuredConfig cfg;
        cfg.seed = g.seed;
        for (int t = 0; t < 3; ++t) {
            const HilbertSpace h = HilbertSpace::single("q", 2);
            const State rho = random_density(h, 2, rng), sigma = random_density(h, 2, rng);
            const double m = measured_renyi(rho, sigma, 0.7, cfg).value;
            const double md = modified_sandwiched(rho, sigma, 0.7).value;
            if (m > md + 1e-6) return "measured " + format_number(m) + " above " + format_number(md);
        }
        return std::string();
    });

    suite.check("bounds and tails on random instances", [&] {
        Rng rng(derive_seed(g.seed, 4));
        RandomInstanceSpec spec;
        for (int t = 0; t < (opts.quick ? 2 : 4); ++t) {
            spec.mode = t % 2 ? InstanceMode::iid_local : InstanceMode::general;
            const std::string problem = check_instance(random_instance(spec, rng), g, draws);
            if (!problem.empty()) return problem;
        }
        return std::string();
    });

    suite.check("worked example orderings", [] {
        const Fig2Config cfg = default_fig2_config();
        const Table t = sweep_p(cfg);
        const int kl = t.column("B_kl"), mod = t.column("B_mod"), petz = t.column("B_petz");
        for (const auto& r : t.rows)
            if (r[mod] > r[petz] + 1e-9 || r[mod] > r[kl] + 1e-9) return "ordering fails at p = " + format_number(r[0]);
        const Table a = sweep_alpha(cfg);
        for (const auto& r : a.rows)
            if (r[2] > r[3] + 1e-9) return "ordering fails at alpha = " + format_number(r[0]);
        return std::string();
    });

    suite.check("instance json round trip", [&] {
        Rng rng(derive_seed(g.seed, 5));
        RandomInstanceSpec spec;
        spec.mode = InstanceMode::iid_local;
        spec.n = 2;
        const LearningInstance inst = random_instance(spec, rng);
        const Json dumped = instance_to_json(inst);
        const LearningInstance back = instance_from_json(parse_json(dumped.dump(), "round-trip"));
        return expect(instance_to_json(back).dump() == dumped.dump(), "instance changed after a round trip");
    });

    std::vector<std::filesystem::path> docs;
    const std::filesystem::path dir = std::filesystem::path(opts.docs_dir) / "examples";
    if (std::filesystem::is_directory(dir))
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.path().extension() == ".json") docs.push_back(e.path());
    std::sort(docs.begin(), docs.end());
    suite.check("documented examples present", [&] {
        return expect(!docs.empty(), "no JSON examples under " + dir.string());
    });
    for (const auto& path : docs) {
        suite.check("example " + path.filename().string(), [&] {
            const Json j = load_json(path.string());
            if (j.is_object() && j.contains("sample_space")) return check_instance(load_instance(path.string()), g, draws);
            if (j.is_object() && j.contains("rows")) {
                observable_from_json(j, path.filename().string());
                return std::string();
            }
            if (j.is_array()) {
                ClassicalDist d(j.get<std::vector<double>>());
                return std::string();
            }
            return std::string("unrecognized example format");
        });
    }
    return suite.report();
}

}  // namespace qgb::cli
