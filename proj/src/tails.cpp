#include "qgb/tails.hpp"

#include "qgb/errors.hpp"
#include "qgb/optimize.hpp"

#include <cmath>
#include <limits>

namespace qgb {

std::string to_string(TailKind k) {
    switch (k) {
        case TailKind::classical_renyi: return "classical-renyi";
        case TailKind::classical_smooth_max: return "classical-smooth-max";
        case TailKind::quantum_renyi: return "quantum-renyi";
        case TailKind::quantum_smooth_max: return "quantum-smooth-max";
    }
    return "unknown";
}

TailKind tail_kind_from_string(const std::string& s) {
    for (TailKind k : {TailKind::classical_renyi, TailKind::classical_smooth_max, TailKind::quantum_renyi,
                       TailKind::quantum_smooth_max})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown tail kind '" + s + "'");
}

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

void check_nu(double nu, double delta) {
    check_delta(delta);
    if (!(nu >= 0.0 && nu < delta)) throw DomainError("nu must satisfy 0 <= nu < delta");
}

std::vector<double> product_of_marginals(const InducedJoint& j) {
    std::vector<double> prod(j.joint.size());
    for (int w = 0; w < j.num_w; ++w)
        for (int s = 0; s < j.num_s; ++s) prod[static_cast<std::size_t>(w) * j.num_s + s] = j.marginal_w[w] * j.prior_s[s];
    return prod;
}

TailRadius radius_from(double tau, int n, double info, double log_term) {
    TailRadius r;
    r.information = info;
    r.epsilon = std::sqrt(2.0 * tau * tau / n * (std::max(info, 0.0) + std::log(2.0) + log_term));
    return r;
}

std::vector<double> alpha_grid_or_default(const std::vector<double>& g) {
    return g.empty() ? log_grid(0.05, 0.95, 25) : g;
}

TailRadius add_c1(TailRadius r, const InducedJoint& j, int n, const std::vector<double>& grid, double mu) {
    if (r.vacuous) return r;
    const auto alphas = alpha_grid_or_default(grid);
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw DomainError("c1 uses alpha in (0, 1)");
    const ScalarMin m = grid_then_golden(
        [&](double a) {
            const TermValue t = c1_term(j, n, a, mu);
            return t.infinite ? std::numeric_limits<double>::infinity() : t.value;
        },
        alphas);
    if (!std::isfinite(m.value)) {
        r.vacuous = true;
        return r;
    }
    r.c1 = m.value;
    r.c1_alpha = m.x;
    r.epsilon += m.value;
    return r;
}

}  // namespace

double smooth_max_information(const InducedJoint& j, double nu) {
    const DivergenceValue d = smooth_max_divergence(j.joint, product_of_marginals(j), nu);
    if (d.infinite) throw NumericalError("smooth max-information is infinite");
    return d.value;
}

TailRadius classical_tail_renyi(const InducedJoint& j, double tau, int n, double gamma, double delta) {
    check_delta(delta);
    if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
    const TermValue info = renyi_mutual_information(j, gamma);
    if (info.infinite) {
        TailRadius r;
        r.vacuous = true;
        return r;
    }
    return radius_from(tau, n, info.value, gamma / (gamma - 1.0) * std::log(1.0 / delta));
}

TailRadius classical_tail_smooth_max(const InducedJoint& j, double tau, int n, double nu, double delta) {
    check_nu(nu, delta);
    return radius_from(tau, n, smooth_max_information(j, nu), std::log(1.0 / (delta - nu)));
}

TermValue c1_term(const InducedJoint& j, int n, double alpha, double mu) {
    double best = 0.0;
    for (int w = 0; w < j.num_w; ++w) {
        if (!j.in_support(w)) continue;
        double acc = 0.0;
        for (int s = 0; s < j.num_s; ++s) {
            if (!j.pairs[w][s].present || j.prior_s[s] == 0.0) continue;
            const DeviationTerms d = deviation_terms(j, w, s, alpha, DivKind::modified_sandwiched, mu / std::sqrt(n));
            if (d.d1.infinite || d.d2.infinite) return {0.0, true};
            acc += j.prior_s[s] * (d.d1.value + d.d2.value);
        }
        best = std::max(best, acc);
    }
    return {best, false};
}

TailRadius quantum_tail_renyi(const InducedJoint& j, const LearningInstance& inst, double gamma, double delta,
                              const std::vector<double>& alpha_grid, const SubGaussianCert& cert) {
    if (inst.mode != InstanceMode::iid_local) throw ConfigError("quantum tail bounds need an iid_local instance");
    return add_c1(classical_tail_renyi(j, cert.tau, inst.n, gamma, delta), j, inst.n, alpha_grid, cert.mu);
}

TailRadius quantum_tail_smooth_max(const InducedJoint& j, const LearningInstance& inst, double nu, double delta,
                                   const std::vector<double>& alpha_grid, const SubGaussianCert& cert) {
    if (inst.mode != InstanceMode::iid_local) throw ConfigError("quantum tail bounds need an iid_local instance");
    return add_c1(classical_tail_smooth_max(j, cert.tau, inst.n, nu, delta), j, inst.n, alpha_grid, cert.mu);
}

TailRadius tail_radius(TailKind kind, const InducedJoint& j, const LearningInstance& inst, const TailParams& params,
                       const SubGaussianCert& cert) {
    switch (kind) {
        case TailKind::classical_renyi: return classical_tail_renyi(j, cert.tau, inst.n, params.gamma, params.delta);
        case TailKind::classical_smooth_max: return classical_tail_smooth_max(j, cert.tau, inst.n, params.nu, params.delta);
        case TailKind::quantum_renyi:
            return quantum_tail_renyi(j, inst, params.gamma, params.delta, params.alpha_grid, cert);
        case TailKind::quantum_smooth_max:
            return quantum_tail_smooth_max(j, inst, params.nu, params.delta, params.alpha_grid, cert);
    }
    throw ConfigError("unknown tail kind");
}

TailReport verify_coverage(const InducedJoint& j, const LearningInstance& inst, TailKind kind, const TailParams& params,
                           int draws, std::uint64_t seed, const SubGaussianCert& cert) {
    if (draws < 1000) throw ConfigError("coverage checks need at least 1000 draws");
    const TailRadius r = tail_radius(kind, j, inst, params, cert);
    TailReport rep;
    rep.kind = kind;
    rep.delta = params.delta;
    rep.nu = (kind == TailKind::classical_smooth_max || kind == TailKind::quantum_smooth_max) ? params.nu : 0.0;
    rep.gamma = (kind == TailKind::classical_renyi || kind == TailKind::quantum_renyi) ? params.gamma : 0.0;
    rep.alpha = r.c1_alpha;
    rep.c1 = r.c1;
    rep.epsilon = r.epsilon;
    rep.vacuous = r.vacuous;
    rep.draws = draws;
    rep.threshold = 1.0 - params.delta - 3.0 * std::sqrt(params.delta * (1.0 - params.delta) / draws);
    if (r.vacuous) {
        rep.empirical_coverage = 1.0;
        rep.pass = true;
        return rep;
    }
    std::vector<double> true_loss(j.num_w, 0.0);
    for (int w = 0; w < j.num_w; ++w)
        if (j.in_support(w)) true_loss[w] = true_loss_new(j, inst, w);
    std::vector<double> abs_gen(j.joint.size(), 0.0);
    for (int w = 0; w < j.num_w; ++w)
        for (int s = 0; s < j.num_s; ++s)
            if (j.pairs[w][s].present && j.in_support(w))
                abs_gen[static_cast<std::size_t>(w) * j.num_s + s] = std::abs(true_loss[w] - empirical_loss(j, inst, w, s));
    int covered = 0;
    for (const auto& [w, s] : sample_ws(j, draws, seed))
        if (abs_gen[static_cast<std::size_t>(w) * j.num_s + s] <= r.epsilon) ++covered;
    rep.empirical_coverage = static_cast<double>(covered) / draws;
    rep.pass = rep.empirical_coverage >= rep.threshold;
    return rep;
}

}  // namespace qgb
