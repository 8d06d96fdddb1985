#include "qgb/bounds.hpp"
#include "qgb/divergence.hpp"
#include "qgb/errors.hpp"
#include "qgb/fig2.hpp"
#include "qgb/framework.hpp"
#include "qgb/instances.hpp"
#include "qgb/random.hpp"
#include "qgb/subgaussian.hpp"
#include "qgb/tails.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

using namespace qgb;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& what) {
        if (pass) detail = what;
        pass = false;
    }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) o.fail("runtime " + std::to_string(secs) + " s over budget");
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d  %-34s %8.2f s%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

State random_full_rank(const HilbertSpace& h, Rng& rng) { return random_density(h, h.dim(), rng); }

State diag_state(const HilbertSpace& h, const std::vector<double>& p) {
    Mat m = Mat::Zero(h.dim(), h.dim());
    for (int i = 0; i < h.dim(); ++i) m(i, i) = p[i];
    return State(h, m);
}

const std::vector<double> kAlphas{0.3, 0.5, 0.7, 0.9, 1.1, 1.5, 2.0, 3.0};

void divergence_ordering(Outcome& o) {
    Rng rng(derive_seed(42, 1));
    MeasuredConfig cfg;
    for (int t = 0; t < 200; ++t) {
        const HilbertSpace h = HilbertSpace::single("q", 2 + t % 3);
        const int rank = t % 4 == 0 ? 1 + t % 3 : h.dim();
        const State rho = random_density(h, rank, rng), sigma = random_full_rank(h, rng);
        cfg.seed = derive_seed(42, 1000 + t);
        for (double a : kAlphas) {
            const DivergenceValue sw = sandwiched_renyi(rho, sigma, a), pz = petz_renyi(rho, sigma, a);
            const DivergenceValue md = modified_sandwiched(rho, sigma, a);
            const DivergenceValue me = measured_renyi(rho, sigma, a, cfg);
            if (a >= 0.5 && sw.finite() && pz.finite() && sw.value > pz.value + 1e-9)
                o.fail("sandwiched above Petz, pair " + std::to_string(t) + " alpha " + fmt(a));
            if (me.finite() && md.finite() && me.value > md.value + 1e-6)
                o.fail("measured above modified, pair " + std::to_string(t) + " alpha " + fmt(a));
            if (md.finite() && pz.finite() && md.value > pz.value + 1e-6)
                o.fail("modified above Petz, pair " + std::to_string(t) + " alpha " + fmt(a));
        }
    }
}

bool contracts(const DivergenceValue& after, const DivergenceValue& before) {
    if (before.infinite) return true;
    if (after.infinite) return false;
    return after.value <= before.value + 1e-8;
}

void data_processing(Outcome& o) {
    Rng rng(derive_seed(42, 2));
    for (int c = 0; c < 50; ++c) {
        const HilbertSpace in = HilbertSpace::single("a", 2 + c % 2), out = HilbertSpace::single("b", 2 + (c / 2) % 2);
        const int kraus = std::max(1 + c % 3, (in.dim() + out.dim() - 1) / out.dim());
        const Channel ch = random_cptp(in, out, kraus, rng);
        for (int t = 0; t < 20; ++t) {
            const State rho = random_density(in, t % 5 == 0 ? 1 : in.dim(), rng), sigma = random_full_rank(in, rng);
            const State r2 = ch.apply(rho), s2 = ch.apply(sigma);
            for (double a : kAlphas) {
                const std::string where = "channel " + std::to_string(c) + " pair " + std::to_string(t) + " alpha " + fmt(a);
                if (a >= 0.5 && !contracts(sandwiched_renyi(r2, s2, a), sandwiched_renyi(rho, sigma, a)))
                    o.fail("sandwiched expands, " + where);
                if (a <= 2.0 && !contracts(petz_renyi(r2, s2, a), petz_renyi(rho, sigma, a))) o.fail("Petz expands, " + where);
                if (!contracts(modified_sandwiched(r2, s2, a), modified_sandwiched(rho, sigma, a)))
                    o.fail("modified expands, " + where);
            }
        }
    }
}

void additivity(Outcome& o) {
    Rng rng(derive_seed(42, 3));
    for (int t = 0; t < 100; ++t) {
        const HilbertSpace h1 = HilbertSpace::single("a", 2), h2 = HilbertSpace::single("b", 2 + t % 2);
        const State r1 = random_full_rank(h1, rng), s1 = random_full_rank(h1, rng);
        const State r2 = random_full_rank(h2, rng), s2 = random_full_rank(h2, rng);
        const State r = tensor(r1, r2), s = tensor(s1, s2);
        for (double a : kAlphas) {
            const double pz = petz_renyi(r, s, a).value - petz_renyi(r1, s1, a).value - petz_renyi(r2, s2, a).value;
            const double sw =
                sandwiched_renyi(r, s, a).value - sandwiched_renyi(r1, s1, a).value - sandwiched_renyi(r2, s2, a).value;
            if (std::abs(pz) > 1e-9) o.fail("Petz defect " + fmt(pz) + " at pair " + std::to_string(t));
            if (std::abs(sw) > 1e-9) o.fail("sandwiched defect " + fmt(sw) + " at pair " + std::to_string(t));
        }
    }
}

void limits(Outcome& o) {
    Rng rng(derive_seed(42, 4));
    for (int t = 0; t < 50; ++t) {
        const HilbertSpace h = HilbertSpace::single("q", 2 + t % 3);
        const State rho = random_full_rank(h, rng), sigma = random_full_rank(h, rng);
        const double d = quantum_relative_entropy(rho, sigma).value;
        const std::vector<double> p = random_simplex(3 + t % 3, rng), q = random_simplex(3 + t % 3, rng);
        const double kl = classical_kl(p, q).value;
        for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
            if (std::abs(petz_renyi(rho, sigma, a).value - d) > 5e-3) o.fail("Petz limit, pair " + std::to_string(t));
            if (std::abs(sandwiched_renyi(rho, sigma, a).value - d) > 5e-3)
                o.fail("sandwiched limit, pair " + std::to_string(t));
            if (std::abs(classical_renyi(p, q, a).value - kl) > 5e-3) o.fail("classical limit, pair " + std::to_string(t));
        }
    }
}

void hoeffding(Outcome& o) {
    Rng rng(derive_seed(42, 5));
    const std::vector<double> grid = linear_grid(-10.0, 10.0, 101);
    for (int t = 0; t < 500; ++t) {
        const HilbertSpace h = HilbertSpace::single("q", 2 + t % 3);
        const Observable l = random_hermitian(h, 1.0 + t % 4, rng);
        const State rho = random_density(h, 1 + t % h.dim(), rng);
        const HoeffdingCheck c = check_quantum_hoeffding(l, rho, l.lambda_min(), l.lambda_max(), grid);
        if (c.worst_slack < -1e-9)
            o.fail("slack " + fmt(c.worst_slack) + " at sample " + std::to_string(t) + " lambda " + fmt(c.worst_lambda));
    }
    const HilbertSpace q = HilbertSpace::single("q", 2);
    const Observable z = Observable(q, diag_state(q, {1.0, 0.0}).matrix() * 2.0 - Mat::Identity(2, 2));
    const double lhs = quantum_mgf(z, State::maximally_mixed(q), 1.0);
    if (std::abs(lhs - std::log(std::cosh(1.0))) > 1e-12 || !(lhs <= 0.5)) o.fail("Pauli Z spot value " + fmt(lhs));
}

void commuting(Outcome& o) {
    Rng rng(derive_seed(42, 6));
    MeasuredConfig cfg;
    for (int t = 0; t < 30; ++t) {
        const int d = 2 + t % 3;
        const HilbertSpace h = HilbertSpace::single("q", d);
        const std::vector<double> p = random_simplex(d, rng), q = random_simplex(d, rng);
        const State rho = diag_state(h, p), sigma = diag_state(h, q);
        const std::string where = "pair " + std::to_string(t);
        if (std::abs(quantum_relative_entropy(rho, sigma).value - classical_kl(p, q).value) > 1e-10)
            o.fail("relative entropy, " + where);
        cfg.seed = derive_seed(42, 2000 + t);
        for (double a : kAlphas) {
            const double c = classical_renyi(p, q, a).value;
            if (std::abs(petz_renyi(rho, sigma, a).value - c) > 1e-10) o.fail("Petz, " + where);
            if (std::abs(sandwiched_renyi(rho, sigma, a).value - c) > 1e-10) o.fail("sandwiched, " + where);
            if (std::abs(modified_sandwiched(rho, sigma, a).value - c) > 1e-10) o.fail("modified, " + where);
            if (a < 1.0 && std::abs(reverse_sandwiched(rho, sigma, a).value - c) > 1e-10)
                o.fail("reverse sandwiched, " + where);
            if (std::abs(measured_renyi(rho, sigma, a, cfg).value - c) > 1e-6) o.fail("measured, " + where);
        }
    }
}

void soundness(Outcome& o) {
    Rng rng(derive_seed(42, 7));
    const BoundOptions opts = default_bound_options();
    RandomInstanceSpec spec;
    for (int t = 0; t < 50; ++t) {
        spec.num_w = 2 + t % 2;
        spec.mode = t % 2 ? InstanceMode::iid_local : InstanceMode::general;
        const LearningInstance inst = random_instance(spec, rng);
        const InducedJoint j = induce(inst);
        for (BoundKind k : {BoundKind::l1, BoundKind::kl, BoundKind::renyi_mod, BoundKind::renyi_petz, BoundKind::caro_old}) {
            const BoundReport r = bound_by_kind(k, j, inst, opts);
            if (!r.vacuous && !(r.realized_abs_gen <= r.optimum + 1e-9))
                o.fail(to_string(k) + " optimum " + fmt(r.optimum) + " below |gen| " + fmt(r.realized_abs_gen) +
                       " on instance " + std::to_string(t));
        }
    }
}

void figure_two(Outcome& o, const std::string& out_dir) {
    const Fig2Config cfg = default_fig2_config();
    const Table p = sweep_p(cfg);
    const int kl = p.column("B_kl"), mod = p.column("B_mod"), petz = p.column("B_petz");
    if (p.rows.size() != 7) o.fail("expected 7 values of p");
    for (const auto& r : p.rows) {
        if (r[mod] > r[petz] + 1e-9) o.fail("B_mod above B_petz at p = " + fmt(r[0]));
        if (r[mod] > r[kl] + 1e-9) o.fail("B_mod above B_kl at p = " + fmt(r[0]));
    }
    const Table a = sweep_alpha(cfg);
    const int amod = a.column("B_mod"), apetz = a.column("B_petz");
    for (const auto& r : a.rows) {
        if (r[0] < 0.4 || r[0] >= 1.0) o.fail("alpha grid leaves [0.4, 1)");
        if (r[amod] > r[apetz] + 1e-9) o.fail("B_mod above B_petz at alpha = " + fmt(r[0]));
    }
    const std::vector<std::string> files = emit_fig2(cfg, "both", out_dir);
    for (const auto& f : files)
        if (!std::filesystem::exists(f) || std::filesystem::file_size(f) == 0) o.fail("missing output " + f);
    if (files.size() != 4) o.fail("expected CSV and SVG for both panels");
}

void tail_coverage(Outcome& o) {
    Rng rng(derive_seed(42, 9));
    RandomInstanceSpec spec;
    spec.mode = InstanceMode::iid_local;
    for (int t = 0; t < 20; ++t) {
        spec.num_w = 2 + t % 2;
        const LearningInstance inst = random_instance(spec, rng);
        const InducedJoint j = induce(inst);
        const SubGaussianCert cert = effective_cert(inst);
        for (TailKind k : {TailKind::classical_renyi, TailKind::classical_smooth_max, TailKind::quantum_renyi,
                           TailKind::quantum_smooth_max})
            for (double delta : {0.05, 0.1}) {
                TailParams params;
                params.delta = delta;
                params.nu = delta / 2.0;
                const TailReport r = verify_coverage(j, inst, k, params, 10000, derive_seed(42, 100 * t), cert);
                if (!r.pass)
                    o.fail(to_string(k) + " coverage " + fmt(r.empirical_coverage) + " below " + fmt(r.threshold) +
                           " on instance " + std::to_string(t) + " delta " + fmt(delta));
            }
    }
}

double scalar_gen(const std::vector<double>& prior, int n, const std::vector<std::vector<double>>& values, int w,
                  int s) {
    const int k = static_cast<int>(prior.size());
    int num_s = 1;
    for (int i = 0; i < n; ++i) num_s *= k;
    auto average = [&](int t) {
        double v = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            v += values[w][t % k];
            t /= k;
        }
        return v / n;
    };
    double expected = 0.0;
    for (int z = 0; z < k; ++z) expected += prior[z] * values[w][z];
    return expected - average(s);
}

void classical_reduction(Outcome& o) {
    Rng rng(derive_seed(42, 10));
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + t % 2;
        const LearningInstance inst = random_classical_embedding(2 + t % 2, 2, n, rng);
        const InducedJoint j = induce(inst);
        const std::string where = " on instance " + std::to_string(t);
        const ClassicalBounds cb = classical_bounds(j, inst, 0.6, {});
        if (n == 1 && std::abs(bound_kl(j, inst, {}).optimum - cb.xu_raginsky) > 1e-9)
            o.fail("relative-entropy bound differs from the mutual-information bound" + where);
        if (std::abs(bound_iid_individual(j, inst, DivKind::relative_entropy, {}).optimum - cb.bu) > 1e-9)
            o.fail("individual-sample bound differs" + where);
        BoundOptions g;
        g.alpha_below_one = {0.6};
        g.gamma_below_one = {0.6};
        if (std::abs(bound_iid_individual(j, inst, DivKind::modified_sandwiched, g).optimum - cb.modak.value) > 1e-9)
            o.fail("Renyi individual-sample bound differs" + where);

        std::vector<double> prior = inst.prior;
        std::vector<std::vector<double>> values(j.num_w, std::vector<double>(prior.size()));
        for (int w = 0; w < j.num_w; ++w)
            for (std::size_t z = 0; z < prior.size(); ++z) values[w][z] = inst.losses[w][z].matrix()(0, 0).real();
        for (int w = 0; w < j.num_w; ++w)
            for (int s = 0; s < j.num_s; ++s)
                if (j.pairs[w][s].present && std::abs(gen_error(j, inst, w, s) - scalar_gen(prior, n, values, w, s)) > 1e-12)
                    o.fail("gen_error differs from the scalar formula" + where);
    }
}

void measured_trend(Outcome& o) {
    Rng rng(derive_seed(42, 11));
    MeasuredConfig cfg;
    for (int t = 0; t < 10; ++t) {
        const HilbertSpace h = HilbertSpace::single("q", 2);
        const State rho = random_full_rank(h, rng), sigma = random_full_rank(h, rng);
        cfg.seed = derive_seed(42, 3000 + t);
        for (double a : {0.4, 0.7, 2.0}) {
            const std::vector<TrendPoint> tr = tensor_power_trend(rho, sigma, a, 3, cfg);
            const double cap = modified_sandwiched(rho, sigma, a).value;
            for (std::size_t i = 0; i < tr.size(); ++i) {
                if (i > 0 && tr[i].per_copy < tr[i - 1].per_copy - 1e-4)
                    o.fail("per-copy value decreases at n = " + std::to_string(tr[i].n) + ", pair " + std::to_string(t) +
                           " alpha " + fmt(a));
                if (tr[i].per_copy > cap + 1e-6)
                    o.fail("per-copy value above the modified divergence, pair " + std::to_string(t) + " alpha " + fmt(a));
            }
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string out_dir = "acceptance_out";
    app.add_option("--out-dir", out_dir, "directory for the figure outputs");
    CLI11_PARSE(app, argc, argv);

    criterion(1, "divergence ordering", 60, divergence_ordering);
    criterion(2, "data processing", 60, data_processing);
    criterion(3, "additivity", 0, additivity);
    criterion(4, "limits at alpha near one", 0, limits);
    criterion(5, "quantum Hoeffding lemma", 0, hoeffding);
    criterion(6, "commuting reductions", 0, commuting);
    criterion(7, "bound soundness", 180, soundness);
    criterion(8, "worked example figure", 120, [&](Outcome& o) { figure_two(o, out_dir); });
    criterion(9, "tail coverage", 180, tail_coverage);
    criterion(10, "classical reduction", 0, classical_reduction);
    criterion(11, "measured tensor-power trend", 0, measured_trend);
    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
