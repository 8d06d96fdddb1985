#include "qgb/bounds.hpp"

#include "qgb/errors.hpp"
#include "qgb/optimize.hpp"
#include "qgb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgb {

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::l1: return "l1";
        case BoundKind::lp: return "lp";
        case BoundKind::kl: return "kl";
        case BoundKind::renyi_mod: return "renyi-mod";
        case BoundKind::renyi_petz: return "renyi-petz";
        case BoundKind::caro_old: return "caro-old";
        case BoundKind::iid: return "iid";
        case BoundKind::classical: return "classical";
    }
    return "unknown";
}

BoundKind bound_kind_from_string(const std::string& s) {
    for (BoundKind k : {BoundKind::l1, BoundKind::lp, BoundKind::kl, BoundKind::renyi_mod, BoundKind::renyi_petz,
                        BoundKind::caro_old, BoundKind::iid, BoundKind::classical})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown bound kind '" + s + "'");
}

BoundOptions default_bound_options() {
    BoundOptions o;
    o.alpha_below_one = log_grid(0.05, 0.95, 25);
    o.alpha_above_one = log_grid(1.05, 4.0, 25);
    o.gamma_below_one = o.alpha_below_one;
    o.gamma_above_one = o.alpha_above_one;
    return o;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double as_double(const TermValue& t) {
    return t.infinite ? kInf : t.value;
}

double divisor(double alpha, DivKind kind) {
    if (kind == DivKind::relative_entropy || kind == DivKind::kl) return 1.0;
    return alpha < 1.0 ? alpha : 1.0;
}

TermValue radical(const DivergenceValue& d, double mu, double c) {
    if (d.infinite) return {0.0, true};
    return {std::sqrt(2.0 * mu * mu * std::max(d.value, 0.0) / c), false};
}

struct PairView {
    int w = 0;
    int s = 0;
    double weight = 0.0;
    const State* sigma = nullptr;
    State product;
    const State* hyp_ws = nullptr;
    const State* hyp_w = nullptr;
};

std::vector<PairView> collect_pairs(const InducedJoint& j) {
    std::vector<PairView> out;
    for (int w = 0; w < j.num_w; ++w)
        for (int s = 0; s < j.num_s; ++s) {
            const auto& r = j.pairs[w][s];
            if (!r.present || j.p(w, s) <= 0.0 || !j.sigma_hyp_w[w]) continue;
            PairView v;
            v.w = w;
            v.s = s;
            v.weight = j.p(w, s);
            v.sigma = &r.sigma;
            v.product = State::normalized(j.te_hyp, kron(j.rho_te[s].matrix(), r.sigma_hyp.matrix()));
            v.hyp_ws = &r.sigma_hyp;
            v.hyp_w = &*j.sigma_hyp_w[w];
            out.push_back(std::move(v));
        }
    return out;
}

struct PairDivergences {
    DivergenceValue d1;
    DivergenceValue d2;
};

std::vector<PairDivergences> pair_divergences(const std::vector<PairView>& pairs, double alpha, DivKind kind,
                                              bool need_d2) {
    std::vector<PairDivergences> out(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        out[i].d1 = quantum_divergence(kind, *pairs[i].sigma, pairs[i].product, alpha);
        if (need_d2) out[i].d2 = quantum_divergence(kind, *pairs[i].hyp_ws, *pairs[i].hyp_w, alpha);
    });
    return out;
}

TermValue quantum_term_on(const std::vector<PairView>& pairs, double alpha, DivKind kind, double mu, bool include_d2) {
    const double c = divisor(alpha, kind);
    const auto divs = pair_divergences(pairs, alpha, kind, include_d2);
    TermValue t;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const TermValue a = radical(divs[i].d1, mu, c);
        const TermValue b = include_d2 ? radical(divs[i].d2, mu, c) : TermValue{};
        if (a.infinite || b.infinite) return {0.0, true};
        t.value += pairs[i].weight * (a.value + b.value);
    }
    return t;
}

// sqrt(2 mu^2 E[D1] / (n c)) + sqrt(2 mu^2 E[D2] / (n c))
TermValue pooled_quantum_term(const std::vector<PairView>& pairs, double alpha, DivKind kind, double mu, int n) {
    const double c = divisor(alpha, kind);
    const auto divs = pair_divergences(pairs, alpha, kind, true);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (divs[i].d1.infinite || divs[i].d2.infinite) return {0.0, true};
        e1 += pairs[i].weight * std::max(divs[i].d1.value, 0.0);
        e2 += pairs[i].weight * std::max(divs[i].d2.value, 0.0);
    }
    const double k = 2.0 * mu * mu / (n * c);
    return {std::sqrt(k * e1) + std::sqrt(k * e2), false};
}

std::vector<double> posterior_row(const InducedJoint& j, int w) {
    std::vector<double> row(j.num_s);
    for (int s = 0; s < j.num_s; ++s) row[s] = j.posterior(s, w);
    return row;
}

TermValue per_w_gamma_term(const std::vector<std::vector<double>>& cond, const std::vector<double>& pw,
                           const std::vector<double>& reference, double gamma, double tau) {
    const double c = gamma < 1.0 ? gamma : 1.0;
    TermValue t;
    for (std::size_t w = 0; w < cond.size(); ++w) {
        if (pw[w] <= kDropProb) continue;
        const DivergenceValue d =
            gamma == 1.0 ? classical_kl(cond[w], reference) : classical_renyi(cond[w], reference, gamma);
        if (d.infinite) return {0.0, true};
        t.value += pw[w] * std::sqrt(2.0 * tau * tau * std::max(d.value, 0.0) / c);
    }
    return t;
}

using TermFn = std::function<TermValue(double)>;

RegimeOptimum optimize_regime(const TermFn& quantum, const std::vector<double>& alphas, const TermFn& classical,
                              const std::vector<double>& gammas, int iterations, std::vector<GridPoint>& grid) {
    RegimeOptimum r;
    std::vector<double> qv, cv;
    const ScalarMin qa = grid_then_golden([&](double a) { return as_double(quantum(a)); }, alphas, &qv, iterations);
    const ScalarMin cg = grid_then_golden([&](double g) { return as_double(classical(g)); }, gammas, &cv, iterations);
    for (std::size_t i = 0; i < alphas.size(); ++i)
        grid.push_back({"alpha", alphas[i], std::isfinite(qv[i]) ? qv[i] : 0.0, !std::isfinite(qv[i])});
    for (std::size_t i = 0; i < gammas.size(); ++i)
        grid.push_back({"gamma", gammas[i], std::isfinite(cv[i]) ? cv[i] : 0.0, !std::isfinite(cv[i])});
    r.alpha = qa.x;
    r.gamma = cg.x;
    r.quantum = std::isfinite(qa.value) ? TermValue{qa.value, false} : TermValue{0.0, true};
    r.classical = std::isfinite(cg.value) ? TermValue{cg.value, false} : TermValue{0.0, true};
    r.total = (r.quantum.infinite || r.classical.infinite) ? TermValue{0.0, true}
                                                           : TermValue{r.quantum.value + r.classical.value, false};
    return r;
}

void finish_regimes(BoundReport& rep) {
    const RegimeOptimum* best = nullptr;
    for (const auto* r : {rep.below_one ? &*rep.below_one : nullptr, rep.above_one ? &*rep.above_one : nullptr}) {
        if (!r || r->total.infinite) continue;
        if (!best || r->total.value < best->total.value) best = r;
    }
    if (!best) {
        rep.vacuous = true;
        rep.optimum = 0.0;
        return;
    }
    rep.optimum = best->total.value;
    rep.argmin_alpha = best->alpha;
    rep.argmin_gamma = best->gamma;
}

void finish_soundness(BoundReport& rep, const InducedJoint& j, const LearningInstance& inst) {
    rep.realized_abs_gen = std::abs(rep.old_definition ? expected_gen_old(j, inst) : expected_gen(j, inst));
    rep.sound = rep.vacuous || rep.realized_abs_gen <= rep.optimum + 1e-9;
}

SubGaussianCert cert_for(const LearningInstance& inst, const BoundOptions& opts) {
    return opts.cert ? *opts.cert : effective_cert(inst);
}

BoundReport base_report(BoundKind kind, const LearningInstance& inst, const BoundOptions& opts) {
    BoundReport rep;
    rep.kind = kind;
    const SubGaussianCert c = cert_for(inst, opts);
    rep.mu = c.mu;
    rep.tau = c.tau;
    return rep;
}

}  // namespace

DeviationTerms deviation_terms(const InducedJoint& j, int w, int s, double alpha, DivKind kind, double mu) {
    const auto& r = j.pairs[w][s];
    if (!r.present) throw DomainError("pair (w, s) has zero probability");
    if (!j.sigma_hyp_w[w]) throw DomainError("hypothesis is outside the support of P_W");
    const State prod = State::normalized(j.te_hyp, kron(j.rho_te[s].matrix(), r.sigma_hyp.matrix()));
    const double c = divisor(alpha, kind);
    DeviationTerms t;
    t.d1 = radical(quantum_divergence(kind, r.sigma, prod, alpha), mu, c);
    t.d2 = radical(quantum_divergence(kind, r.sigma_hyp, *j.sigma_hyp_w[w], alpha), mu, c);
    return t;
}

TermValue classical_gamma_term(const InducedJoint& j, double gamma, double tau) {
    std::vector<std::vector<double>> cond;
    for (int w = 0; w < j.num_w; ++w) cond.push_back(posterior_row(j, w));
    return per_w_gamma_term(cond, j.marginal_w, j.prior_s, gamma, tau);
}

TermValue quantum_term(const InducedJoint& j, double alpha, DivKind kind, double mu, bool include_d2) {
    return quantum_term_on(collect_pairs(j), alpha, kind, mu, include_d2);
}

namespace {

std::vector<double> product_of_marginals(const InducedJoint& j) {
    std::vector<double> prod(j.joint.size());
    for (int w = 0; w < j.num_w; ++w)
        for (int s = 0; s < j.num_s; ++s) prod[static_cast<std::size_t>(w) * j.num_s + s] = j.marginal_w[w] * j.prior_s[s];
    return prod;
}

}  // namespace

double mutual_information(const InducedJoint& j) {
    const DivergenceValue d = classical_kl(j.joint, product_of_marginals(j));
    if (d.infinite) throw NumericalError("mutual information is infinite");
    return std::max(d.value, 0.0);
}

TermValue renyi_mutual_information(const InducedJoint& j, double gamma) {
    const DivergenceValue d = classical_renyi(j.joint, product_of_marginals(j), gamma);
    if (d.infinite) return {0.0, true};
    return {std::max(d.value, 0.0), false};
}

std::vector<std::vector<double>> marginal_wz(const InducedJoint& j, const LearningInstance& inst, int i) {
    std::vector<std::vector<double>> m(j.num_w, std::vector<double>(inst.num_z(), 0.0));
    for (int s = 0; s < j.num_s; ++s) {
        const int z = inst.digits(s)[i];
        for (int w = 0; w < j.num_w; ++w) m[w][z] += j.p(w, s);
    }
    return m;
}

BoundReport bound_renyi(const InducedJoint& j, const LearningInstance& inst, DivKind kind, const BoundOptions& opts) {
    if (kind != DivKind::modified_sandwiched && kind != DivKind::petz)
        throw ConfigError("bound_renyi supports the modified sandwiched and Petz divergences");
    BoundReport rep = base_report(kind == DivKind::petz ? BoundKind::renyi_petz : BoundKind::renyi_mod, inst, opts);
    rep.divergence = to_string(kind);
    const auto pairs = collect_pairs(j);
    const TermFn q = [&](double a) { return quantum_term_on(pairs, a, kind, rep.mu, true); };
    const TermFn c = [&](double g) { return classical_gamma_term(j, g, rep.tau); };
    if (!opts.alpha_below_one.empty() && !opts.gamma_below_one.empty())
        rep.below_one = optimize_regime(q, opts.alpha_below_one, c, opts.gamma_below_one, opts.golden_iterations, rep.grid);
    if (!opts.alpha_above_one.empty() && !opts.gamma_above_one.empty())
        rep.above_one = optimize_regime(q, opts.alpha_above_one, c, opts.gamma_above_one, opts.golden_iterations, rep.grid);
    finish_regimes(rep);
    finish_soundness(rep, j, inst);
    return rep;
}

BoundReport bound_kl(const InducedJoint& j, const LearningInstance& inst, const BoundOptions& opts) {
    BoundReport rep = base_report(BoundKind::kl, inst, opts);
    rep.divergence = to_string(DivKind::relative_entropy);
    const TermValue q = quantum_term_on(collect_pairs(j), 1.0, DivKind::relative_entropy, rep.mu, true);
    const double cl = std::sqrt(2.0 * rep.tau * rep.tau * mutual_information(j));
    rep.grid.push_back({"quantum", 1.0, q.value, q.infinite});
    rep.grid.push_back({"classical", 1.0, cl, false});
    rep.vacuous = q.infinite;
    rep.optimum = q.infinite ? 0.0 : q.value + cl;
    finish_soundness(rep, j, inst);
    return rep;
}

BoundReport bound_caro_old(const InducedJoint& j, const LearningInstance& inst, const BoundOptions& opts) {
    BoundReport rep = base_report(BoundKind::caro_old, inst, opts);
    rep.divergence = to_string(DivKind::modified_sandwiched);
    rep.old_definition = true;
    const auto pairs = collect_pairs(j);
    const TermFn q = [&](double a) { return quantum_term_on(pairs, a, DivKind::modified_sandwiched, rep.mu, false); };
    const TermFn c = [&](double g) { return classical_gamma_term(j, g, rep.tau); };
    if (!opts.alpha_below_one.empty() && !opts.gamma_below_one.empty())
        rep.below_one = optimize_regime(q, opts.alpha_below_one, c, opts.gamma_below_one, opts.golden_iterations, rep.grid);
    if (!opts.alpha_above_one.empty() && !opts.gamma_above_one.empty())
        rep.above_one = optimize_regime(q, opts.alpha_above_one, c, opts.gamma_above_one, opts.golden_iterations, rep.grid);
    finish_regimes(rep);
    finish_soundness(rep, j, inst);
    return rep;
}

BoundReport bound_l1(const InducedJoint& j, const LearningInstance& inst, double p, const BoundOptions& opts) {
    if (!(p >= 1.0)) throw DomainError("Schatten index p must be >= 1");
    BoundReport rep = base_report(p == 1.0 ? BoundKind::l1 : BoundKind::lp, inst, opts);
    rep.divergence = "schatten-" + (std::isinf(p) ? std::string("inf") : std::to_string(p));
    rep.old_definition = true;
    double mu = rep.mu, tau = rep.tau;
    if (p > 1.0 && !opts.cert) {
        const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
        mu = 0.0;
        double tau_sum = 0.0, tau_max = 0.0;
        for (int w = 0; w < j.num_w; ++w) {
            std::vector<double> f(j.num_s);
            for (int s = 0; s < j.num_s; ++s) {
                const Observable l(j.te_hyp, inst.loss(w, s));
                const double mid = 0.5 * (l.lambda_max() + l.lambda_min());
                mu = std::max(mu, schatten_norm(l.matrix() - mid * Mat::Identity(l.dim(), l.dim()), q));
                f[s] = l.expectation(kron(j.rho_te[s].matrix(), j.hyp_state(w, s).matrix()));
            }
            const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
            const double mid = 0.5 * (*lo + *hi);
            for (double v : f) {
                tau_sum += std::pow(std::abs(v - mid), q);
                tau_max = std::max(tau_max, std::abs(v - mid));
            }
        }
        tau = std::isinf(q) ? tau_max : std::pow(tau_sum, 1.0 / q);
        rep.mu = mu;
        rep.tau = tau;
    }
    double quantum = 0.0;
    for (const auto& pv : collect_pairs(j))
        quantum += pv.weight * schatten_norm(pv.sigma->matrix() - pv.product.matrix(), p);
    const auto prod = product_of_marginals(j);
    Eigen::VectorXd diff(static_cast<Eigen::Index>(prod.size()));
    for (std::size_t k = 0; k < prod.size(); ++k) diff(static_cast<Eigen::Index>(k)) = j.joint[k] - prod[k];
    const double dnorm = std::isinf(p) ? diff.cwiseAbs().maxCoeff() : std::pow(diff.cwiseAbs().array().pow(p).sum(), 1.0 / p);
    rep.grid.push_back({"quantum", p, mu * quantum, false});
    rep.grid.push_back({"classical", p, tau * dnorm, false});
    rep.optimum = mu * quantum + tau * dnorm;
    finish_soundness(rep, j, inst);
    return rep;
}

BoundReport bound_iid_individual(const InducedJoint& j, const LearningInstance& inst, DivKind kind,
                                 const BoundOptions& opts) {
    if (inst.mode != InstanceMode::iid_local) throw ConfigError("the individual-sample bound needs an iid_local instance");
    if (kind == DivKind::kl) kind = DivKind::relative_entropy;
    if (kind != DivKind::modified_sandwiched && kind != DivKind::petz && kind != DivKind::relative_entropy)
        throw ConfigError("unsupported divergence for the individual-sample bound");
    BoundReport rep = base_report(BoundKind::iid, inst, opts);
    rep.divergence = to_string(kind);
    const int n = inst.n;
    const auto pairs = collect_pairs(j);
    std::vector<std::vector<std::vector<double>>> cond(n);
    for (int i = 0; i < n; ++i) {
        const auto m = marginal_wz(j, inst, i);
        cond[i].assign(j.num_w, std::vector<double>(inst.num_z(), 0.0));
        for (int w = 0; w < j.num_w; ++w)
            for (int z = 0; z < inst.num_z(); ++z)
                cond[i][w][z] = j.marginal_w[w] > 0.0 ? m[w][z] / j.marginal_w[w] : 0.0;
    }
    const TermFn c = [&](double g) {
        TermValue t;
        for (int i = 0; i < n; ++i) {
            const TermValue ti = per_w_gamma_term(cond[i], j.marginal_w, inst.prior, g, rep.tau);
            if (ti.infinite) return TermValue{0.0, true};
            t.value += ti.value / n;
        }
        return t;
    };
    if (kind == DivKind::relative_entropy) {
        const TermValue q = pooled_quantum_term(pairs, 1.0, kind, rep.mu, n);
        double cl = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto m = marginal_wz(j, inst, i);
            std::vector<double> joint, prod;
            for (int w = 0; w < j.num_w; ++w)
                for (int z = 0; z < inst.num_z(); ++z) {
                    joint.push_back(m[w][z]);
                    prod.push_back(j.marginal_w[w] * inst.prior[z]);
                }
            cl += std::sqrt(2.0 * rep.tau * rep.tau * std::max(classical_kl(joint, prod).value, 0.0)) / n;
        }
        rep.grid.push_back({"quantum", 1.0, q.value, q.infinite});
        rep.grid.push_back({"classical", 1.0, cl, false});
        rep.vacuous = q.infinite;
        rep.optimum = q.infinite ? 0.0 : q.value + cl;
    } else {
        const TermFn q = [&](double a) { return pooled_quantum_term(pairs, a, kind, rep.mu, n); };
        if (!opts.alpha_below_one.empty() && !opts.gamma_below_one.empty())
            rep.below_one = optimize_regime(q, opts.alpha_below_one, c, opts.gamma_below_one, opts.golden_iterations, rep.grid);
        if (!opts.alpha_above_one.empty() && !opts.gamma_above_one.empty())
            rep.above_one = optimize_regime(q, opts.alpha_above_one, c, opts.gamma_above_one, opts.golden_iterations, rep.grid);
        finish_regimes(rep);
    }
    finish_soundness(rep, j, inst);
    return rep;
}

ClassicalBounds classical_bounds(const InducedJoint& j, const LearningInstance& inst, double gamma,
                                 const BoundOptions& opts) {
    if (inst.mode != InstanceMode::iid_local) throw ConfigError("classical bounds need an iid_local instance");
    const double tau = cert_for(inst, opts).tau;
    const int n = inst.n;
    ClassicalBounds out;
    out.xu_raginsky = std::sqrt(2.0 * tau * tau / n * mutual_information(j));
    for (int i = 0; i < n; ++i) {
        const auto m = marginal_wz(j, inst, i);
        std::vector<double> joint, prod;
        std::vector<std::vector<double>> cond(j.num_w, std::vector<double>(inst.num_z(), 0.0));
        for (int w = 0; w < j.num_w; ++w)
            for (int z = 0; z < inst.num_z(); ++z) {
                joint.push_back(m[w][z]);
                prod.push_back(j.marginal_w[w] * inst.prior[z]);
                cond[w][z] = j.marginal_w[w] > 0.0 ? m[w][z] / j.marginal_w[w] : 0.0;
            }
        out.bu += std::sqrt(2.0 * tau * tau * std::max(classical_kl(joint, prod).value, 0.0)) / n;
        const TermValue t = per_w_gamma_term(cond, j.marginal_w, inst.prior, gamma, tau);
        if (t.infinite) out.modak.infinite = true;
        out.modak.value += t.value / n;
    }
    if (out.modak.infinite) out.modak.value = 0.0;
    return out;
}

BoundReport bound_by_kind(BoundKind kind, const InducedJoint& j, const LearningInstance& inst,
                          const BoundOptions& opts, double p) {
    switch (kind) {
        case BoundKind::l1: return bound_l1(j, inst, 1.0, opts);
        case BoundKind::lp: return bound_l1(j, inst, p, opts);
        case BoundKind::kl: return bound_kl(j, inst, opts);
        case BoundKind::renyi_mod: return bound_renyi(j, inst, DivKind::modified_sandwiched, opts);
        case BoundKind::renyi_petz: return bound_renyi(j, inst, DivKind::petz, opts);
        case BoundKind::caro_old: return bound_caro_old(j, inst, opts);
        case BoundKind::iid: return bound_iid_individual(j, inst, DivKind::modified_sandwiched, opts);
        case BoundKind::classical: {
            BoundReport rep = base_report(BoundKind::classical, inst, opts);
            rep.divergence = "classical";
            double best = std::numeric_limits<double>::max();
            std::optional<double> best_gamma;
            const ClassicalBounds base = classical_bounds(j, inst, 0.5, opts);
            rep.grid.push_back({"xu_raginsky", 1.0, base.xu_raginsky, false});
            rep.grid.push_back({"bu", 1.0, base.bu, false});
            best = std::min(base.xu_raginsky, base.bu);
            for (const auto* g : {&opts.gamma_below_one, &opts.gamma_above_one})
                for (double gamma : *g) {
                    const ClassicalBounds cb = classical_bounds(j, inst, gamma, opts);
                    rep.grid.push_back({"modak", gamma, cb.modak.value, cb.modak.infinite});
                    if (!cb.modak.infinite && cb.modak.value < best) {
                        best = cb.modak.value;
                        best_gamma = gamma;
                    }
                }
            rep.optimum = best;
            rep.argmin_gamma = best_gamma;
            finish_soundness(rep, j, inst);
            return rep;
        }
    }
    throw ConfigError("unknown bound kind");
}

}  // namespace qgb
