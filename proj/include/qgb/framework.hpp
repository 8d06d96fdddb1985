#pragma once

#include "qgb/linalg.hpp"
#include "qgb/subgaussian.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qgb {

constexpr double kDropProb = 1e-12;
constexpr int kEnumerationCap = 4096;

enum class InstanceMode { general, iid_local };

std::string to_string(InstanceMode m);
InstanceMode instance_mode_from_string(const std::string& s);

// Sample tuples s in Z^n are indexed lexicographically with z_1 most significant.
// general:   data_states, povms, channels[w], losses[w] are indexed by s on the full registers.
// iid_local: data_states, channels[w], losses[w] are indexed by z on a single copy;
//            povms are indexed by s on the n-copy training register.
struct LearningInstance {
    std::vector<std::string> sample_space;
    std::vector<double> prior;
    int n = 1;
    InstanceMode mode = InstanceMode::general;
    std::vector<std::string> hypotheses;
    HilbertSpace te, tr, hyp;
    std::vector<State> data_states;
    std::vector<Povm> povms;
    std::vector<std::vector<Channel>> channels;
    std::vector<std::vector<Observable>> losses;
    std::optional<double> mu, tau;

    int num_w() const { return static_cast<int>(hypotheses.size()); }
    int num_z() const { return static_cast<int>(sample_space.size()); }
    int num_s() const;
    std::vector<int> digits(int s) const;
    double prior_of(int s) const;

    int te_dim() const;
    int tr_dim() const;
    int hyp_dim() const;

    // Full-register objects; the te and hyp factors of an n-copy instance are grouped copy by copy.
    Mat data_state(int s) const;
    Mat effect(int s, int w) const;
    std::vector<Mat> kraus(int w, int s) const;
    Mat loss(int w, int s) const;

    void validate() const;
};

struct PairRecord {
    bool present = false;
    double p_w_given_s = 0.0;
    State sigma;
    State sigma_hyp;
};

struct InducedJoint {
    int num_w = 0;
    int num_s = 0;
    HilbertSpace te_hyp;
    HilbertSpace hyp;
    std::vector<double> prior_s;
    std::vector<double> joint;
    std::vector<double> marginal_w;
    std::vector<State> rho_te;
    std::vector<std::vector<PairRecord>> pairs;
    std::vector<std::optional<State>> sigma_hyp_w;
    std::vector<std::vector<State>> fallback_hyp;
    std::vector<std::string> warnings;

    double p(int w, int s) const { return joint[static_cast<std::size_t>(w) * num_s + s]; }
    double posterior(int s, int w) const;
    bool in_support(int w) const { return marginal_w[w] > kDropProb; }
    // sigma_hyp(w, s) where defined; the channel applied to the unmeasured training state otherwise
    const State& hyp_state(int w, int s) const;
};

InducedJoint induce(const LearningInstance& inst);

double empirical_loss(const InducedJoint& j, const LearningInstance& inst, int w, int s);
double true_loss_new(const InducedJoint& j, const LearningInstance& inst, int w);
double true_loss_old(const InducedJoint& j, const LearningInstance& inst, int w);

struct ExpectedLosses {
    double empirical = 0.0;
    double true_new = 0.0;
    double true_old = 0.0;
};

ExpectedLosses expected_losses(const InducedJoint& j, const LearningInstance& inst);

double gen_error(const InducedJoint& j, const LearningInstance& inst, int w, int s);
double gen_error_old(const InducedJoint& j, const LearningInstance& inst, int w, int s);
double expected_gen(const InducedJoint& j, const LearningInstance& inst);
double expected_gen_old(const InducedJoint& j, const LearningInstance& inst);

std::vector<std::pair<int, int>> sample_ws(const InducedJoint& j, int count, std::uint64_t seed);

// User-supplied constants when present; spectral widths of the loss observables otherwise.
SubGaussianCert effective_cert(const LearningInstance& inst);

// Grid audit of the sub-Gaussian assumptions and of the structure the bounds rely on.
std::vector<std::string> audit_instance(const InducedJoint& j, const LearningInstance& inst);

}  // namespace qgb
