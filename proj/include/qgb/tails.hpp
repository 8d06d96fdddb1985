#pragma once

#include "qgb/bounds.hpp"
#include "qgb/framework.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgb {

enum class TailKind { classical_renyi, classical_smooth_max, quantum_renyi, quantum_smooth_max };

std::string to_string(TailKind k);
TailKind tail_kind_from_string(const std::string& s);

struct TailParams {
    double delta = 0.1;
    double nu = 0.05;
    double gamma = 2.0;
    std::vector<double> alpha_grid;  // empty means 25 log-spaced points on [0.05, 0.95]
};

struct TailRadius {
    double epsilon = 0.0;
    bool vacuous = false;
    double information = 0.0;  // I_gamma or the smooth max-information
    double c1 = 0.0;
    double c1_alpha = 0.0;
};

struct TailReport {
    TailKind kind = TailKind::classical_renyi;
    double delta = 0.0;
    double epsilon = 0.0;
    double nu = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double c1 = 0.0;
    bool vacuous = false;
    double empirical_coverage = 0.0;
    int draws = 0;
    double threshold = 0.0;
    bool pass = false;
};

double smooth_max_information(const InducedJoint& j, double nu);

TailRadius classical_tail_renyi(const InducedJoint& j, double tau, int n, double gamma, double delta);
TailRadius classical_tail_smooth_max(const InducedJoint& j, double tau, int n, double nu, double delta);

// sup over supported w of E_{S ~ P^n} of the two per-sample deviation radicals with divisor n alpha.
TermValue c1_term(const InducedJoint& j, int n, double alpha, double mu);

TailRadius quantum_tail_renyi(const InducedJoint& j, const LearningInstance& inst, double gamma, double delta,
                              const std::vector<double>& alpha_grid, const SubGaussianCert& cert);
TailRadius quantum_tail_smooth_max(const InducedJoint& j, const LearningInstance& inst, double nu, double delta,
                                   const std::vector<double>& alpha_grid, const SubGaussianCert& cert);

TailRadius tail_radius(TailKind kind, const InducedJoint& j, const LearningInstance& inst, const TailParams& params,
                       const SubGaussianCert& cert);

TailReport verify_coverage(const InducedJoint& j, const LearningInstance& inst, TailKind kind, const TailParams& params,
                           int draws, std::uint64_t seed, const SubGaussianCert& cert);

}  // namespace qgb
