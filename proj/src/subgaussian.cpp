#include "qgb/subgaussian.hpp"

#include "qgb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgb {

std::string to_string(CertSource s) {
    switch (s) {
        case CertSource::user_supplied: return "user_supplied";
        case CertSource::norm_derived: return "norm_derived";
        case CertSource::spectral_width: return "spectral_width";
        case CertSource::grid_fitted: return "grid_fitted";
    }
    return "unknown";
}

namespace {

double log_sum_weighted_exp(std::span<const double> x, std::span<const double> w, double lambda) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k)
        if (w[k] > 0.0) m = std::max(m, lambda * x[k]);
    if (!std::isfinite(m)) throw NumericalError("moment generating function of an empty distribution");
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (w[k] > 0.0) s += w[k] * std::exp(lambda * x[k] - m);
    return m + std::log(s);
}

void check_range(double lambda, double norm) {
    if (std::abs(lambda) * norm > 700.0)
        throw RangeError("|lambda| * ||L|| exceeds 700; the exponential would overflow");
}

}  // namespace

double quantum_mgf(const Observable& l, const State& rho, double lambda) {
    if (l.dim() != rho.dim()) throw ConfigError("observable and state dimensions differ");
    const Eig& e = l.eig();
    check_range(lambda, std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1))));
    const double mean = l.expectation(rho.matrix());
    const int d = l.dim();
    std::vector<double> x(d), w(d);
    const Mat rr = e.vectors.adjoint() * rho.matrix() * e.vectors;
    for (int k = 0; k < d; ++k) {
        x[k] = e.values(k) - mean;
        w[k] = std::max(rr(k, k).real(), 0.0);
    }
    return log_sum_weighted_exp(x, w, lambda);
}

std::vector<double> default_lambda_grid() {
    std::vector<double> g(101);
    for (int i = 0; i <= 100; ++i) g[i] = -10.0 + 0.2 * i;
    return g;
}

HoeffdingCheck check_quantum_hoeffding(const Observable& l, const State& rho, double a, double b,
                                       const std::vector<double>& lambda_grid) {
    if (l.lambda_min() < a - 1e-10 || l.lambda_max() > b + 1e-10)
        throw DomainError("spectrum of L is not contained in [a, b]");
    HoeffdingCheck out;
    out.worst_slack = std::numeric_limits<double>::infinity();
    for (double lam : lambda_grid) {
        const double rhs = lam * lam * (b - a) * (b - a) / 8.0;
        const double slack = rhs - quantum_mgf(l, rho, lam);
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_lambda = lam;
        }
    }
    out.holds = out.worst_slack >= -1e-9;
    return out;
}

SubGaussianCert derive_mu_from_norm(const Observable& l) {
    SubGaussianCert c;
    c.mu = schatten_norm(l.matrix(), std::numeric_limits<double>::infinity()) / 2.0;
    c.source = CertSource::norm_derived;
    return c;
}

SubGaussianCert derive_mu_from_spectrum(const Observable& l) {
    SubGaussianCert c;
    c.mu = (l.lambda_max() - l.lambda_min()) / 2.0;
    c.source = CertSource::spectral_width;
    return c;
}

SubGaussianCert fit_mu_on_grid(const Observable& l, const State& rho, const std::vector<double>& lambda_grid) {
    SubGaussianCert c;
    c.source = CertSource::grid_fitted;
    for (double lam : lambda_grid) {
        if (lam == 0.0) continue;
        const double m = quantum_mgf(l, rho, lam);
        c.mu = std::max(c.mu, std::sqrt(std::max(0.0, 2.0 * m) / (lam * lam)));
    }
    return c;
}

ChangeOfMeasure change_of_measure_bound(const Observable& l, const State& rho, const State& sigma) {
    ChangeOfMeasure out;
    out.mu = derive_mu_from_spectrum(l).mu;
    const DivergenceValue d = quantum_relative_entropy(rho, sigma);
    if (d.infinite) {
        out.vacuous = true;
        out.upper = std::numeric_limits<double>::max();
        out.lower = -std::numeric_limits<double>::max();
        return out;
    }
    const double base = l.expectation(sigma.matrix());
    const double r = out.mu * std::sqrt(2.0 * std::max(d.value, 0.0));
    out.upper = base + r;
    out.lower = base - r;
    return out;
}

double classical_mgf(std::span<const double> values, std::span<const double> dist, double lambda) {
    if (values.size() != dist.size()) throw ConfigError("values and distribution sizes differ");
    double lo = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        mean += values[i] * dist[i];
        lo = std::max(lo, std::abs(values[i]));
    }
    check_range(lambda, lo);
    std::vector<double> centered(values.begin(), values.end());
    for (auto& v : centered) v -= mean;
    return log_sum_weighted_exp(centered, dist, lambda);
}

HoeffdingCheck check_classical_hoeffding(std::span<const double> values, std::span<const double> dist, double a,
                                         double b, const std::vector<double>& lambda_grid) {
    for (double v : values)
        if (v < a - 1e-10 || v > b + 1e-10) throw DomainError("value outside [a, b]");
    HoeffdingCheck out;
    out.worst_slack = std::numeric_limits<double>::infinity();
    for (double lam : lambda_grid) {
        const double slack = lam * lam * (b - a) * (b - a) / 8.0 - classical_mgf(values, dist, lam);
        if (slack < out.worst_slack) {
            out.worst_slack = slack;
            out.worst_lambda = lam;
        }
    }
    out.holds = out.worst_slack >= -1e-9;
    return out;
}

double derive_tau(std::span<const double> values) {
    if (values.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return (*hi - *lo) / 2.0;
}

ChangeOfMeasure classical_change_of_measure(std::span<const double> values, std::span<const double> p,
                                            std::span<const double> q) {
    ChangeOfMeasure out;
    out.mu = derive_tau(values);
    const DivergenceValue d = classical_kl(p, q);
    if (d.infinite) {
        out.vacuous = true;
        out.upper = std::numeric_limits<double>::max();
        out.lower = -std::numeric_limits<double>::max();
        return out;
    }
    double base = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) base += values[i] * q[i];
    const double r = out.mu * std::sqrt(2.0 * std::max(d.value, 0.0));
    out.upper = base + r;
    out.lower = base - r;
    return out;
}

}  // namespace qgb
