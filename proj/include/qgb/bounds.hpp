#pragma once

#include "qgb/divergence.hpp"
#include "qgb/framework.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qgb {

enum class BoundKind { l1, lp, kl, renyi_mod, renyi_petz, caro_old, iid, classical };

std::string to_string(BoundKind k);
BoundKind bound_kind_from_string(const std::string& s);

struct TermValue {
    double value = 0.0;
    bool infinite = false;
};

struct DeviationTerms {
    TermValue d1;
    TermValue d2;
};

struct GridPoint {
    std::string axis;
    double param = 0.0;
    double value = 0.0;
    bool infinite = false;
};

struct RegimeOptimum {
    double alpha = 0.0;
    double gamma = 0.0;
    TermValue quantum;
    TermValue classical;
    TermValue total;
};

struct BoundReport {
    BoundKind kind = BoundKind::kl;
    std::string divergence;
    std::vector<GridPoint> grid;
    std::optional<RegimeOptimum> below_one;
    std::optional<RegimeOptimum> above_one;
    double optimum = 0.0;
    std::optional<double> argmin_alpha;
    std::optional<double> argmin_gamma;
    bool vacuous = false;
    double realized_abs_gen = 0.0;
    bool old_definition = false;
    bool sound = true;
    double mu = 0.0;
    double tau = 0.0;
};

struct BoundOptions {
    std::vector<double> alpha_below_one;
    std::vector<double> alpha_above_one;
    std::vector<double> gamma_below_one;
    std::vector<double> gamma_above_one;
    int golden_iterations = 20;
    std::optional<SubGaussianCert> cert;
};

// 25 log-spaced points on [0.05, 0.95] and on [1.05, 4] for both parameters.
BoundOptions default_bound_options();

// Per-pair radicals sqrt(2 mu^2 D / c) with c = alpha below one and c = 1 otherwise.
// kind is modified_sandwiched, petz or relative_entropy.
DeviationTerms deviation_terms(const InducedJoint& j, int w, int s, double alpha, DivKind kind, double mu);

// E_W sqrt(2 tau^2 D_gamma(P_{S|W} || P_S) / c)
TermValue classical_gamma_term(const InducedJoint& j, double gamma, double tau);

// E_{P_WS}[d1 + d2], or d1 alone when include_d2 is false.
TermValue quantum_term(const InducedJoint& j, double alpha, DivKind kind, double mu, bool include_d2 = true);

double mutual_information(const InducedJoint& j);
TermValue renyi_mutual_information(const InducedJoint& j, double gamma);
// Joint of W and the i-th sample coordinate, indexed [w][z].
std::vector<std::vector<double>> marginal_wz(const InducedJoint& j, const LearningInstance& inst, int i);

BoundReport bound_renyi(const InducedJoint& j, const LearningInstance& inst, DivKind kind, const BoundOptions& opts);
BoundReport bound_kl(const InducedJoint& j, const LearningInstance& inst, const BoundOptions& opts);
BoundReport bound_caro_old(const InducedJoint& j, const LearningInstance& inst, const BoundOptions& opts);
BoundReport bound_l1(const InducedJoint& j, const LearningInstance& inst, double p, const BoundOptions& opts);
BoundReport bound_iid_individual(const InducedJoint& j, const LearningInstance& inst, DivKind kind,
                                 const BoundOptions& opts);

struct ClassicalBounds {
    double xu_raginsky = 0.0;
    double bu = 0.0;
    TermValue modak;
};

// Finite-alphabet evaluation on a classical-embedding instance; tau from the options or the instance.
ClassicalBounds classical_bounds(const InducedJoint& j, const LearningInstance& inst, double gamma,
                                 const BoundOptions& opts);

BoundReport bound_by_kind(BoundKind kind, const InducedJoint& j, const LearningInstance& inst,
                          const BoundOptions& opts, double p = 2.0);

}  // namespace qgb
