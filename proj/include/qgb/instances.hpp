#pragma once

#include "qgb/framework.hpp"
#include "qgb/random.hpp"

#include <vector>

namespace qgb {

struct RandomInstanceSpec {
    int num_w = 2;
    int num_z = 2;
    int n = 1;
    int dim = 2;
    InstanceMode mode = InstanceMode::general;
    int kraus = 2;
    double loss_scale = 1.0;
    bool product_data = false;
};

LearningInstance random_instance(const RandomInstanceSpec& spec, Rng& rng);

// One-dimensional registers: effects are the conditional probabilities cond[s][w] and the local loss
// observable for (w, z) is values[w][z] times the identity.
LearningInstance classical_embedding(const std::vector<double>& prior, int n,
                                     const std::vector<std::vector<double>>& cond,
                                     const std::vector<std::vector<double>>& values);

// Random classical embedding with |W| hypotheses, |Z| labels and a random learner.
LearningInstance random_classical_embedding(int num_w, int num_z, int n, Rng& rng);

}  // namespace qgb
