#pragma once

#include <functional>
#include <vector>

namespace qgb {

struct NelderMeadConfig {
    int max_iterations = 2000;
    double size_tol = 1e-8;
    double initial_step = 0.4;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Minimizes f with the GSL simplex method (nmsimplex2).
NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0, const NelderMeadConfig& cfg = {});

struct QuasiNewtonConfig {
    int max_iterations = 300;
    double gradient_tol = 1e-7;
    double fd_step = 1e-6;
    double initial_step = 0.1;
};

// Returns f(x) and writes the gradient into grad (already sized like x).
using GradientObjective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

// Minimizes f with GSL's BFGS (vector_bfgs2).
NelderMeadResult quasi_newton(const GradientObjective& f, const std::vector<double>& x0,
                              const QuasiNewtonConfig& cfg = {});
// Same, with central-difference gradients of step fd_step.
NelderMeadResult quasi_newton(const Objective& f, const std::vector<double>& x0, const QuasiNewtonConfig& cfg = {});

struct ScalarMin {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section refinement of a bracketed minimum (lo < mid < hi, f(mid) <= f(lo), f(hi)).
// Returns the best point seen, never worse than mid.
ScalarMin golden_refine(const std::function<double(double)>& f, double lo, double mid, double hi, double f_lo,
                        double f_mid, double f_hi, int iterations = 20);

// Minimizes over a sorted grid, then refines around the grid argmin.
ScalarMin grid_then_golden(const std::function<double(double)>& f, const std::vector<double>& grid,
                           std::vector<double>* values_out = nullptr, int iterations = 20);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> linear_grid(double lo, double hi, int points, bool include_hi = true);

}  // namespace qgb
