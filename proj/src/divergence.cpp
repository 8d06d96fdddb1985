#include "qgb/divergence.hpp"

#include "qgb/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgb {

ClassicalDist::ClassicalDist(std::vector<double> probs) : probs_(std::move(probs)) {
    labels_.resize(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) labels_[i] = std::to_string(i);
    *this = ClassicalDist(labels_, probs_);
}

ClassicalDist::ClassicalDist(std::vector<std::string> labels, std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.size() != probs_.size()) throw ConfigError("distribution labels and probabilities differ in length");
    if (probs_.empty()) throw ConfigError("empty distribution");
    double s = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw ConfigError("negative or NaN probability");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-10) throw ConfigError("probabilities do not sum to 1");
}

std::string to_string(DivKind k) {
    switch (k) {
        case DivKind::classical: return "classical";
        case DivKind::kl: return "kl";
        case DivKind::smooth_max: return "smooth_max";
        case DivKind::petz: return "petz";
        case DivKind::sandwiched: return "sandwiched";
        case DivKind::reverse_sandwiched: return "reverse_sandwiched";
        case DivKind::modified_sandwiched: return "modified_sandwiched";
        case DivKind::measured: return "measured";
        case DivKind::relative_entropy: return "relative_entropy";
    }
    return "unknown";
}

DivKind div_kind_from_string(const std::string& s) {
    for (auto k : {DivKind::classical, DivKind::kl, DivKind::smooth_max, DivKind::petz, DivKind::sandwiched,
                   DivKind::reverse_sandwiched, DivKind::modified_sandwiched, DivKind::measured,
                   DivKind::relative_entropy})
        if (to_string(k) == s) return k;
    if (s == "modified") return DivKind::modified_sandwiched;
    if (s == "reverse") return DivKind::reverse_sandwiched;
    throw ConfigError("unknown divergence kind '" + s + "'");
}

DivergenceValue DivergenceValue::infinity(DivKind kind, double alpha) {
    DivergenceValue v;
    v.infinite = true;
    v.kind = kind;
    v.alpha = alpha;
    return v;
}

DivergenceValue DivergenceValue::of(double x, DivKind kind, double alpha) {
    if (!std::isfinite(x)) throw NumericalError("divergence evaluated to a non-finite number");
    DivergenceValue v;
    v.value = x;
    v.kind = kind;
    v.alpha = alpha;
    return v;
}

namespace {

constexpr double kSingularEps = 1e-14;

void check_order(double a) {
    if (!(a > 0.0) || a == 1.0 || !std::isfinite(a))
        throw DomainError("order must lie in (0,1) or (1,inf); use the KL/relative-entropy routine at 1");
}

bool near_one(double a) {
    return std::abs(a - 1.0) <= kOneTol;
}

void check_sizes(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ConfigError("distribution sizes differ");
}

void check_same_space(const State& rho, const State& sigma) {
    if (rho.dim() != sigma.dim()) throw ConfigError("states live on spaces of different dimension");
}

DivergenceValue relabel(DivergenceValue v, DivKind kind, double alpha) {
    v.kind = kind;
    v.alpha = alpha;
    return v;
}

// sum_{ij} lambda_i^a mu_j^b |<u_i|v_j>|^2 restricted to both supports
double overlap_power_sum(const Eig& er, const Eig& es, double a, double b) {
    const double tr = support_threshold(er.values), ts = support_threshold(es.values);
    const Mat o = er.vectors.adjoint() * es.vectors;
    double s = 0.0;
    for (int i = 0; i < er.values.size(); ++i) {
        if (er.values(i) <= tr) continue;
        const double li = std::pow(er.values(i), a);
        for (int j = 0; j < es.values.size(); ++j) {
            if (es.values(j) <= ts) continue;
            s += li * std::pow(es.values(j), b) * std::norm(o(i, j));
        }
    }
    return s;
}

}  // namespace

DivergenceValue classical_kl(std::span<const double> p, std::span<const double> q) {
    check_sizes(p, q);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return DivergenceValue::infinity(DivKind::kl, 1.0);
        s += p[i] * std::log(p[i] / q[i]);
    }
    return DivergenceValue::of(s, DivKind::kl, 1.0);
}

DivergenceValue classical_kl(const ClassicalDist& p, const ClassicalDist& q) {
    return classical_kl(std::span(p.probs()), std::span(q.probs()));
}

DivergenceValue classical_renyi(std::span<const double> p, std::span<const double> q, double g) {
    check_order(g);
    check_sizes(p, q);
    if (near_one(g)) return relabel(classical_kl(p, q), DivKind::classical, g);
    std::vector<double> ratio, mass;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) {
            if (g > 1.0) return DivergenceValue::infinity(DivKind::classical, g);
            continue;
        }
        ratio.push_back((g - 1.0) * std::log(p[i] / q[i]));
        mass.push_back(p[i]);
    }
    if (ratio.empty()) return DivergenceValue::infinity(DivKind::classical, g);
    const double top = *std::max_element(ratio.begin(), ratio.end());
    double s = 0.0, total = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        s += mass[i] * std::exp(ratio[i] - top);
        total += mass[i];
    }
    return DivergenceValue::of((top + std::log(s / total)) / (g - 1.0), DivKind::classical, g);
}

DivergenceValue classical_renyi(const ClassicalDist& p, const ClassicalDist& q, double g) {
    return classical_renyi(std::span(p.probs()), std::span(q.probs()), g);
}

DivergenceValue smooth_max_divergence(std::span<const double> p, std::span<const double> q, double eps) {
    check_sizes(p, q);
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("smoothing parameter must lie in [0,1)");
    std::vector<std::pair<double, double>> atoms;  // (log ratio, P mass)
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return DivergenceValue::infinity(DivKind::smooth_max, eps);
        atoms.emplace_back(std::log(p[i] / q[i]), p[i]);
    }
    std::sort(atoms.begin(), atoms.end());
    double cum = 0.0;
    for (const auto& [r, m] : atoms) {
        cum += m;
        if (cum >= 1.0 - eps - 1e-12) return DivergenceValue::of(r, DivKind::smooth_max, eps);
    }
    return DivergenceValue::of(atoms.back().first, DivKind::smooth_max, eps);
}

DivergenceValue smooth_max_divergence(const ClassicalDist& p, const ClassicalDist& q, double eps) {
    return smooth_max_divergence(std::span(p.probs()), std::span(q.probs()), eps);
}

DivergenceValue quantum_relative_entropy(const State& rho, const State& sigma) {
    check_same_space(rho, sigma);
    if (!supported_in(rho, sigma)) return DivergenceValue::infinity(DivKind::relative_entropy, 1.0);
    const Eig& er = rho.eig();
    const Eig& es = sigma.eig();
    const double tr = support_threshold(er.values), ts = support_threshold(es.values);
    double ent = 0.0;
    for (int i = 0; i < er.values.size(); ++i)
        if (er.values(i) > tr) ent += er.values(i) * std::log(er.values(i));
    const Mat o = er.vectors.adjoint() * es.vectors;
    double cross = 0.0;
    for (int i = 0; i < er.values.size(); ++i) {
        if (er.values(i) <= tr) continue;
        for (int j = 0; j < es.values.size(); ++j) {
            if (es.values(j) <= ts) continue;
            cross += er.values(i) * std::log(es.values(j)) * std::norm(o(i, j));
        }
    }
    return DivergenceValue::of(ent - cross, DivKind::relative_entropy, 1.0);
}

DivergenceValue petz_renyi(const State& rho, const State& sigma, double a) {
    check_order(a);
    check_same_space(rho, sigma);
    if (near_one(a)) return relabel(quantum_relative_entropy(rho, sigma), DivKind::petz, a);
    if (a > 1.0 && !supported_in(rho, sigma)) return DivergenceValue::infinity(DivKind::petz, a);
    if (a < 1.0 && orthogonal(rho, sigma)) return DivergenceValue::infinity(DivKind::petz, a);
    const double q = overlap_power_sum(rho.eig(), sigma.eig(), a, 1.0 - a);
    if (!(q > 0.0)) return DivergenceValue::infinity(DivKind::petz, a);
    return DivergenceValue::of(std::log(q) / (a - 1.0), DivKind::petz, a);
}

DivergenceValue sandwiched_renyi(const State& rho, const State& sigma, double a) {
    check_order(a);
    check_same_space(rho, sigma);
    if (near_one(a)) return relabel(quantum_relative_entropy(rho, sigma), DivKind::sandwiched, a);
    if (a > 1.0 && !supported_in(rho, sigma)) return DivergenceValue::infinity(DivKind::sandwiched, a);
    if (a < 1.0 && orthogonal(rho, sigma)) return DivergenceValue::infinity(DivKind::sandwiched, a);
    const double t = (1.0 - a) / (2.0 * a);
    const Mat s = apply_spectral(sigma.eig(), [t](double x) { return std::pow(x, t); }, true);
    const Mat r = apply_spectral(rho.eig(), [](double x) { return std::sqrt(x); }, true);
    const Mat proj = apply_spectral(sigma.eig(), [](double) { return 1.0; }, true);
    const RVec support_sv = Eigen::JacobiSVD<Mat>(proj * r).singularValues();
    const double support_thr = kSingularEps * (support_sv.size() ? support_sv.maxCoeff() : 0.0);
    int rank = 0;
    for (int i = 0; i < support_sv.size(); ++i)
        if (support_sv(i) > support_thr) ++rank;
    const RVec sv = Eigen::JacobiSVD<Mat>(s * r).singularValues();
    double q = 0.0;
    for (int i = 0; i < rank; ++i)
        if (sv(i) > 0.0) q += std::pow(sv(i), 2.0 * a);
    if (!(q > 0.0)) return DivergenceValue::infinity(DivKind::sandwiched, a);
    return DivergenceValue::of(std::log(q) / (a - 1.0), DivKind::sandwiched, a);
}

DivergenceValue reverse_sandwiched(const State& rho, const State& sigma, double a) {
    check_order(a);
    if (a > 1.0) throw DomainError("reverse sandwiched divergence needs an order in (0,1)");
    check_same_space(rho, sigma);
    if (near_one(a)) return relabel(quantum_relative_entropy(rho, sigma), DivKind::reverse_sandwiched, a);
    const DivergenceValue inner = sandwiched_renyi(sigma, rho, 1.0 - a);
    if (inner.infinite) return DivergenceValue::infinity(DivKind::reverse_sandwiched, a);
    return DivergenceValue::of(a / (1.0 - a) * inner.value, DivKind::reverse_sandwiched, a);
}

DivergenceValue modified_sandwiched(const State& rho, const State& sigma, double a) {
    check_order(a);
    const DivergenceValue v = a < 0.5 ? reverse_sandwiched(rho, sigma, a) : sandwiched_renyi(rho, sigma, a);
    return relabel(v, DivKind::modified_sandwiched, a);
}

DivergenceValue quantum_divergence(DivKind kind, const State& rho, const State& sigma, double a) {
    switch (kind) {
        case DivKind::petz: return petz_renyi(rho, sigma, a);
        case DivKind::sandwiched: return sandwiched_renyi(rho, sigma, a);
        case DivKind::reverse_sandwiched: return reverse_sandwiched(rho, sigma, a);
        case DivKind::modified_sandwiched: return modified_sandwiched(rho, sigma, a);
        case DivKind::relative_entropy:
        case DivKind::kl: return quantum_relative_entropy(rho, sigma);
        default: throw ConfigError("divergence kind '" + to_string(kind) + "' is not a quantum state divergence");
    }
}

namespace {

// log sum_k w_k exp(c x_k) for w_k >= 0
double log_weighted_exp(const RVec& x, const RVec& w, double c) {
    double m = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < x.size(); ++k)
        if (w(k) > 0.0) m = std::max(m, c * x(k));
    if (!std::isfinite(m)) throw NumericalError("variational objective: state has no weight");
    double s = 0.0;
    for (int k = 0; k < x.size(); ++k)
        if (w(k) > 0.0) s += w(k) * std::exp(c * x(k) - m);
    return m + std::log(s);
}

}  // namespace

double variational_objective(const State& rho, const State& sigma, double a, const Observable& h) {
    check_order(a);
    check_same_space(rho, sigma);
    if (h.dim() != rho.dim()) throw ConfigError("variational variable has the wrong dimension");
    const Eig& eh = h.eig();
    const RVec shifted = eh.values.array() - eh.values(0);
    const Mat rr = eh.vectors.adjoint() * rho.matrix() * eh.vectors;
    const Mat ss = eh.vectors.adjoint() * sigma.matrix() * eh.vectors;
    RVec wr(shifted.size()), ws(shifted.size());
    for (int k = 0; k < shifted.size(); ++k) {
        wr(k) = std::max(rr(k, k).real(), 0.0);
        ws(k) = std::max(ss(k, k).real(), 0.0);
    }
    return a / (a - 1.0) * log_weighted_exp(shifted, wr, a - 1.0) - log_weighted_exp(shifted, ws, a);
}

}  // namespace qgb
