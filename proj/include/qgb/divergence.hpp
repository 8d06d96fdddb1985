#pragma once

#include "qgb/linalg.hpp"
#include "qgb/optimize.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgb {

constexpr double kOneTol = 1e-6;

class ClassicalDist {
public:
    ClassicalDist() = default;
    explicit ClassicalDist(std::vector<double> probs);
    ClassicalDist(std::vector<std::string> labels, std::vector<double> probs);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

private:
    std::vector<std::string> labels_;
    std::vector<double> probs_;
};

enum class DivKind {
    classical,
    kl,
    smooth_max,
    petz,
    sandwiched,
    reverse_sandwiched,
    modified_sandwiched,
    measured,
    relative_entropy
};

std::string to_string(DivKind k);
DivKind div_kind_from_string(const std::string& s);

struct OptimizerRecord {
    int iterations = 0;
    int restarts = 0;
    double final_gradient_norm = 0.0;
    double spread = 0.0;
    bool warning = false;
    std::vector<double> restart_values;
};

// value is meaningful only when !infinite; +infinity never appears as a double.
struct DivergenceValue {
    double value = 0.0;
    bool infinite = false;
    double alpha = 0.0;
    DivKind kind = DivKind::classical;
    std::optional<OptimizerRecord> diagnostics;

    bool finite() const { return !infinite; }
    static DivergenceValue infinity(DivKind kind, double alpha);
    static DivergenceValue of(double v, DivKind kind, double alpha);
};

DivergenceValue classical_renyi(std::span<const double> p, std::span<const double> q, double gamma);
DivergenceValue classical_renyi(const ClassicalDist& p, const ClassicalDist& q, double gamma);
DivergenceValue classical_kl(std::span<const double> p, std::span<const double> q);
DivergenceValue classical_kl(const ClassicalDist& p, const ClassicalDist& q);
DivergenceValue smooth_max_divergence(std::span<const double> p, std::span<const double> q, double eps);
DivergenceValue smooth_max_divergence(const ClassicalDist& p, const ClassicalDist& q, double eps);

DivergenceValue quantum_relative_entropy(const State& rho, const State& sigma);
DivergenceValue petz_renyi(const State& rho, const State& sigma, double alpha);
DivergenceValue sandwiched_renyi(const State& rho, const State& sigma, double alpha);
DivergenceValue reverse_sandwiched(const State& rho, const State& sigma, double alpha);
DivergenceValue modified_sandwiched(const State& rho, const State& sigma, double alpha);

// Dispatch used by bound evaluators: petz, sandwiched, modified_sandwiched or relative_entropy.
DivergenceValue quantum_divergence(DivKind kind, const State& rho, const State& sigma, double alpha);

// (alpha/(alpha-1)) log Tr[e^{(alpha-1)H} rho] - log Tr[e^{alpha H} sigma], evaluated after
// shifting H by its largest eigenvalue.
double variational_objective(const State& rho, const State& sigma, double alpha, const Observable& h);

struct MeasuredConfig {
    int random_restarts = 4;
    QuasiNewtonConfig qn{};
    // convex variational refinement used for orders >= 1/2
    QuasiNewtonConfig variational{2000, 1e-10, 1e-6, 0.1};
    bool polish = false;
    NelderMeadConfig nm{400, 1e-9, 1e-3};
    std::uint64_t seed = 42;
    std::vector<Mat> extra_bases;
};

struct MeasuredResult {
    DivergenceValue value;
    Mat basis;
};

MeasuredResult measured_renyi_detailed(const State& rho, const State& sigma, double alpha,
                                       const MeasuredConfig& cfg = {});
DivergenceValue measured_renyi(const State& rho, const State& sigma, double alpha, const MeasuredConfig& cfg = {});

// Pinches both states in the columns of basis and returns the classical Renyi value.
DivergenceValue pinched_renyi(const State& rho, const State& sigma, const Mat& basis, double alpha);

struct TrendPoint {
    int n = 1;
    double per_copy = 0.0;
    bool infinite = false;
};

std::vector<TrendPoint> tensor_power_trend(const State& rho, const State& sigma, double alpha, int n_max,
                                           const MeasuredConfig& cfg = {});

// Self-test lower bound: maximizes variational_objective over H with Nelder-Mead,
// warm-started at the log of the pinched likelihood ratio.
double variational_lower_bound(const State& rho, const State& sigma, double alpha, const NelderMeadConfig& nm = {});

}  // namespace qgb
