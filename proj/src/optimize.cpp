#include "qgb/optimize.hpp"

#include "qgb/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgb {

namespace {

struct GslSilencer {
    GslSilencer() { gsl_set_error_handler_off(); }
};
const GslSilencer silencer;

struct MultiCtx {
    const Objective* f;
    std::vector<double> buf;
};

double multi_trampoline(const gsl_vector* v, void* params) {
    auto* ctx = static_cast<MultiCtx*>(params);
    for (std::size_t i = 0; i < ctx->buf.size(); ++i) ctx->buf[i] = gsl_vector_get(v, i);
    const double y = (*ctx->f)(ctx->buf);
    return std::isfinite(y) ? y : std::numeric_limits<double>::max() / 4;
}

struct GradCtx {
    const GradientObjective* f;
    std::vector<double> x;
    std::vector<double> g;
};

double grad_eval(const gsl_vector* v, void* params, gsl_vector* out) {
    auto* ctx = static_cast<GradCtx*>(params);
    for (std::size_t i = 0; i < ctx->x.size(); ++i) ctx->x[i] = gsl_vector_get(v, i);
    std::fill(ctx->g.begin(), ctx->g.end(), 0.0);
    const double y = (*ctx->f)(ctx->x, ctx->g);
    if (out)
        for (std::size_t i = 0; i < ctx->g.size(); ++i) gsl_vector_set(out, i, std::isfinite(ctx->g[i]) ? ctx->g[i] : 0.0);
    return std::isfinite(y) ? y : std::numeric_limits<double>::max() / 4;
}

double grad_value(const gsl_vector* v, void* params) { return grad_eval(v, params, nullptr); }

void grad_gradient(const gsl_vector* v, void* params, gsl_vector* g) { grad_eval(v, params, g); }

void grad_both(const gsl_vector* v, void* params, double* f, gsl_vector* g) { *f = grad_eval(v, params, g); }

struct ScalarCtx {
    const std::function<double(double)>* f;
    ScalarMin best;
};

double scalar_trampoline(double x, void* params) {
    auto* ctx = static_cast<ScalarCtx*>(params);
    const double y = (*ctx->f)(x);
    if (y < ctx->best.value) ctx->best = {x, y};
    return y;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const std::vector<double>& x0, const NelderMeadConfig& cfg) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    if (n == 0) {
        res.value = f(x0);
        res.converged = true;
        return res;
    }
    MultiCtx ctx{&f, std::vector<double>(n)};
    gsl_multimin_function fn{&multi_trampoline, n, &ctx};

    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
    gsl_vector_set_all(step, cfg.initial_step);

    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, step);

    int iter = 0;
    bool converged = false;
    while (iter < cfg.max_iterations) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), cfg.size_tol) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }
    res.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.x[i] = gsl_vector_get(s->x, i);
    res.value = s->fval;
    res.iterations = iter;
    res.converged = converged;

    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
    return res;
}

NelderMeadResult quasi_newton(const Objective& f, const std::vector<double>& x0, const QuasiNewtonConfig& cfg) {
    const double h = cfg.fd_step;
    const GradientObjective fg = [&f, h](const std::vector<double>& x, std::vector<double>& grad) {
        std::vector<double> y = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = x[i] + h;
            const double up = f(y);
            y[i] = x[i] - h;
            const double down = f(y);
            y[i] = x[i];
            grad[i] = (up - down) / (2.0 * h);
        }
        return f(x);
    };
    return quasi_newton(fg, x0, cfg);
}

NelderMeadResult quasi_newton(const GradientObjective& f, const std::vector<double>& x0, const QuasiNewtonConfig& cfg) {
    const std::size_t n = x0.size();
    NelderMeadResult res;
    if (n == 0) {
        std::vector<double> g;
        res.value = f(x0, g);
        res.converged = true;
        return res;
    }
    GradCtx ctx{&f, std::vector<double>(n), std::vector<double>(n)};
    gsl_multimin_function_fdf fn{&grad_value, &grad_gradient, &grad_both, n, &ctx};

    gsl_vector* x = gsl_vector_alloc(n);
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
    gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
    gsl_multimin_fdfminimizer_set(s, &fn, x, cfg.initial_step, 0.1);

    int iter = 0;
    bool converged = false;
    while (iter < cfg.max_iterations) {
        ++iter;
        if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_gradient(s->gradient, cfg.gradient_tol) == GSL_SUCCESS) {
            converged = true;
            break;
        }
    }
    if (!converged && gsl_multimin_test_gradient(s->gradient, std::sqrt(cfg.gradient_tol)) == GSL_SUCCESS) converged = true;
    res.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.x[i] = gsl_vector_get(s->x, i);
    res.value = s->f;
    res.iterations = iter;
    res.converged = converged;

    gsl_multimin_fdfminimizer_free(s);
    gsl_vector_free(x);
    return res;
}

ScalarMin golden_refine(const std::function<double(double)>& f, double lo, double mid, double hi, double f_lo,
                        double f_mid, double f_hi, int iterations) {
    ScalarCtx ctx{&f, ScalarMin{mid, f_mid}};
    if (!(f_mid < f_lo && f_mid < f_hi) || !(lo < mid && mid < hi)) return ctx.best;
    gsl_function fn{&scalar_trampoline, &ctx};
    gsl_min_fminimizer* s = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
    if (gsl_min_fminimizer_set_with_values(s, &fn, mid, f_mid, lo, f_lo, hi, f_hi) == GSL_SUCCESS) {
        for (int i = 0; i < iterations; ++i)
            if (gsl_min_fminimizer_iterate(s) != GSL_SUCCESS) break;
    }
    gsl_min_fminimizer_free(s);
    return ctx.best;
}

ScalarMin grid_then_golden(const std::function<double(double)>& f, const std::vector<double>& grid,
                           std::vector<double>* values_out, int iterations) {
    if (grid.empty()) throw ConfigError("empty parameter grid");
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    if (values_out) *values_out = vals;
    std::size_t k = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (vals[i] < vals[k]) k = i;
    ScalarMin best{grid[k], vals[k]};
    if (!std::isfinite(best.value) || k == 0 || k + 1 == grid.size()) return best;
    const ScalarMin ref =
        golden_refine(f, grid[k - 1], grid[k], grid[k + 1], vals[k - 1], vals[k], vals[k + 1], iterations);
    return ref.value < best.value ? ref : best;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("invalid log grid");
    std::vector<double> g(points);
    if (points == 1) return {lo};
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int points, bool include_hi) {
    if (points < 1) throw ConfigError("invalid linear grid");
    std::vector<double> g(points);
    const int denom = include_hi ? std::max(points - 1, 1) : points;
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / denom;
    return g;
}

}  // namespace qgb
