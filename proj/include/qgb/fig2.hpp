#pragma once

#include "qgb/framework.hpp"
#include "qgb/plot.hpp"

#include <array>
#include <string>
#include <vector>

namespace qgb {

struct Fig2Config {
    std::vector<double> p_grid;
    std::vector<double> alpha_grid;
    double p_star = 0.6;
    double cos2_theta = 0.45;
    double cos2_beta = 0.5;
    std::array<cplx, 2> phi0{cplx(-0.59, -0.29), cplx(-0.25, 0.71)};
    std::array<cplx, 2> phi1{cplx(0.34, -0.42), cplx(-0.83, -0.12)};
    double mu = 0.8;
    double tau = 0.8;
    double perp_sign = 1.0;
    std::vector<double> optimizer_grid;  // alpha and gamma grid inside (0, 1) for the p-sweep optima
    int golden_iterations = 20;
};

Fig2Config default_fig2_config();

struct Fig2States {
    std::array<Vec, 2> phi;
    std::array<Vec, 2> phi_perp;
    std::array<Vec, 2> psi;
};

Fig2States fig2_states(const Fig2Config& cfg);

LearningInstance build_fig2_instance(const Fig2Config& cfg, double p);

// Columns: p, B_kl, B_mod, B_petz, alpha_mod, gamma_mod, alpha_petz, gamma_petz, abs_expected_gen.
Table sweep_p(const Fig2Config& cfg);

// Columns: alpha, B_kl, B_mod, B_petz, abs_expected_gen at p = p_star with gamma = alpha.
Table sweep_alpha(const Fig2Config& cfg);

PlotSpec fig2a_plot();
PlotSpec fig2b_plot();

// which is "p", "alpha" or "both"; returns the written paths.
std::vector<std::string> emit_fig2(const Fig2Config& cfg, const std::string& which, const std::string& out_dir);

}  // namespace qgb
