#include "qgb/divergence.hpp"
#include "qgb/errors.hpp"
#include "qgb/parallel.hpp"
#include "qgb/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgb {

namespace {

constexpr double kPinchFloor = 1e-14;
constexpr double kVeryNegative = -1e300;

// Product of complex Givens rotations, one per column pair (p, q) with parameter z = x[k] + i x[k+1].
// Column phases are left out because they do not change a pinching.
Mat unitary_from(const std::vector<double>& x, int d) {
    Mat u = Mat::Identity(d, d);
    std::size_t k = 0;
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) {
            const cplx z(x[k], x[k + 1]);
            k += 2;
            const double r = std::abs(z);
            if (r == 0.0) continue;
            const double c = std::cos(r);
            const cplx e = z * (std::sin(r) / r);
            const Vec cp = u.col(p);
            u.col(p) = c * cp + e * u.col(q);
            u.col(q) = -std::conj(e) * cp + c * u.col(q);
        }
    return u;
}

void pinch(const Mat& rho, const Mat& sigma, const Mat& u, std::vector<double>& p, std::vector<double>& q,
           double alpha) {
    const int d = static_cast<int>(u.cols());
    const Mat ru = rho * u, su = sigma * u;
    p.assign(d, 0.0);
    q.assign(d, 0.0);
    for (int k = 0; k < d; ++k) {
        double pk = u.col(k).dot(ru.col(k)).real();
        double qk = u.col(k).dot(su.col(k)).real();
        if (pk < kPinchFloor) pk = 0.0;
        if (qk < kPinchFloor) qk = 0.0;
        // supp(rho) within supp(sigma) was verified; a vanishing q makes p round-off
        if (alpha > 1.0 && qk == 0.0) pk = 0.0;
        p[k] = pk;
        q[k] = qk;
    }
}

double pinched_value(const Mat& rho, const Mat& sigma, const Mat& u, double alpha) {
    std::vector<double> p, q;
    pinch(rho, sigma, u, p, q, alpha);
    const DivergenceValue v = classical_renyi(std::span<const double>(p), std::span<const double>(q), alpha);
    return v.infinite ? std::numeric_limits<double>::infinity() : v.value;
}

struct GivensBlock {
    int p, q;
    double c;
    cplx e;
    // derivatives of c and e with respect to Re z and Im z
    double dc[2];
    cplx de[2];
};

GivensBlock givens_block(int p, int q, double a, double b) {
    GivensBlock g{p, q, 1.0, cplx(0.0), {0.0, 0.0}, {cplx(1.0), cplx(0.0, 1.0)}};
    const cplx z(a, b);
    const double r = std::abs(z);
    if (r < 1e-8) {
        g.c = 1.0 - 0.5 * r * r;
        g.e = z;
        g.dc[0] = -a;
        g.dc[1] = -b;
        return g;
    }
    const double sn = std::sin(r), cs = std::cos(r);
    const double sinc = sn / r, dsinc = (r * cs - sn) / (r * r);
    g.c = cs;
    g.e = z * sinc;
    g.dc[0] = -sn * a / r;
    g.dc[1] = -sn * b / r;
    g.de[0] = sinc + z * dsinc * (a / r);
    g.de[1] = cplx(0.0, sinc) + z * dsinc * (b / r);
    return g;
}

void apply_right(Mat& m, const GivensBlock& g) {
    const Vec cp = m.col(g.p);
    m.col(g.p) = g.c * cp + g.e * m.col(g.q);
    m.col(g.q) = -std::conj(g.e) * cp + g.c * m.col(g.q);
}

void apply_left(Mat& m, const GivensBlock& g) {
    const Eigen::RowVectorXcd rp = m.row(g.p);
    m.row(g.p) = g.c * rp - std::conj(g.e) * m.row(g.q);
    m.row(g.q) = g.e * rp + g.c * m.row(g.q);
}

// Pinched classical Renyi value of (rho, sigma) in the basis b * unitary_from(x) and its gradient in x.
double pinched_value_grad(const Mat& rho, const Mat& sigma, const Mat& b, const std::vector<double>& x, double alpha,
                          std::vector<double>& grad) {
    const int d = static_cast<int>(b.cols());
    std::vector<GivensBlock> blocks;
    std::size_t k = 0;
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q, k += 2) blocks.push_back(givens_block(p, q, x[k], x[k + 1]));
    const std::size_t m = blocks.size();

    std::vector<Mat> suffix(m + 1, Mat::Identity(d, d));
    for (std::size_t j = m; j-- > 0;) {
        suffix[j] = suffix[j + 1];
        apply_left(suffix[j], blocks[j]);
    }
    std::vector<Mat> prefix(m + 1, b);
    for (std::size_t j = 0; j < m; ++j) {
        prefix[j + 1] = prefix[j];
        apply_right(prefix[j + 1], blocks[j]);
    }
    const Mat& u = prefix[m];
    const Mat ru = rho * u, su = sigma * u;

    std::vector<double> p(d), q(d), dp(d, 0.0), dq(d, 0.0);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        p[i] = u.col(i).dot(ru.col(i)).real();
        q[i] = u.col(i).dot(su.col(i)).real();
        if (p[i] < kPinchFloor) p[i] = 0.0;
        if (q[i] < kPinchFloor) q[i] = 0.0;
        if (alpha > 1.0 && q[i] == 0.0) p[i] = 0.0;
        total += p[i];
    }
    // log-sum-exp of (alpha - 1) log(p/q) weighted by p, as in the classical routine
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        top = std::max(top, (alpha - 1.0) * std::log(p[i] / q[i]));
    }
    if (!std::isfinite(top)) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::vector<double> w(d, 0.0);
    for (int i = 0; i < d; ++i) {
        if (p[i] == 0.0) continue;
        w[i] = std::exp((alpha - 1.0) * std::log(p[i] / q[i]) - top);
        sum += p[i] * w[i];
    }
    const double value = (top + std::log(sum / total)) / (alpha - 1.0);
    // d value / d p_i and d value / d q_i
    for (int i = 0; i < d; ++i) {
        if (p[i] == 0.0) continue;
        dp[i] = (alpha * w[i] / sum - 1.0 / total) / (alpha - 1.0);
        dq[i] = -p[i] * w[i] / (q[i] * sum);
    }

    for (std::size_t j = 0; j < m; ++j) {
        const GivensBlock& g = blocks[j];
        const Mat& pre = prefix[j];
        const Mat& suf = suffix[j + 1];
        for (int t = 0; t < 2; ++t) {
            // columns p and q of pre * dG; the other columns vanish
            const Vec cp = g.dc[t] * pre.col(g.p) + g.de[t] * pre.col(g.q);
            const Vec cq = -std::conj(g.de[t]) * pre.col(g.p) + g.dc[t] * pre.col(g.q);
            const Eigen::VectorXcd ap = ru.adjoint() * cp, aq = ru.adjoint() * cq;
            const Eigen::VectorXcd bp = su.adjoint() * cp, bq = su.adjoint() * cq;
            double acc = 0.0;
            for (int i = 0; i < d; ++i) {
                if (p[i] == 0.0) continue;
                const cplx sp = suf(g.p, i), sq = suf(g.q, i);
                const double dpi = 2.0 * (sp * ap(i) + sq * aq(i)).real();
                const double dqi = 2.0 * (sp * bp(i) + sq * bq(i)).real();
                acc += dp[i] * dpi + dq[i] * dqi;
            }
            grad[2 * j + static_cast<std::size_t>(t)] = acc;
        }
    }
    return value;
}

// For alpha >= 1/2 the measured divergence has the convex variational form
//   Q = inf (alpha < 1) or sup (alpha > 1) over omega > 0 of alpha Tr[rho omega^{1-1/alpha}] + (1-alpha) Tr[sigma omega],
// and the eigenbasis of the optimal omega is an optimal measurement. omega = exp(H) with H Hermitian.
Mat variational_basis(const Mat& rho, const Mat& sigma, double alpha, const Mat& warm, const QuasiNewtonConfig& qn) {
    const int d = static_cast<int>(rho.rows());
    const double c = 1.0 - 1.0 / alpha;
    auto hermitian = [d](const std::vector<double>& x) {
        Mat h = Mat::Zero(d, d);
        std::size_t k = 0;
        for (int i = 0; i < d; ++i) {
            h(i, i) = x[k++];
            for (int j = i + 1; j < d; ++j, k += 2) {
                h(i, j) = cplx(x[k], x[k + 1]);
                h(j, i) = std::conj(h(i, j));
            }
        }
        return h;
    };
    const double weight = alpha / (alpha - 1.0);
    const GradientObjective f = [&](const std::vector<double>& x, std::vector<double>& grad) {
        const Eig e = herm_eig(hermitian(x));
        const Mat rt = e.vectors.adjoint() * rho * e.vectors;
        const Mat st = e.vectors.adjoint() * sigma * e.vectors;
        const RVec l = e.values.array() - e.values.maxCoeff();
        double a = 0.0;
        double b = 0.0;
        for (int i = 0; i < d; ++i) {
            a += rt(i, i).real() * std::exp(c * l(i));
            b += st(i, i).real() * std::exp(l(i));
        }
        if (!(a > 0.0) || !(b > 0.0)) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return std::numeric_limits<double>::infinity();
        }
        Mat m(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double gap = l(i) - l(j);
                const bool close = std::abs(gap) < 1e-10;
                const double gr = close ? c * std::exp(c * l(i)) : (std::exp(c * l(i)) - std::exp(c * l(j))) / gap;
                const double gs = close ? std::exp(l(i)) : (std::exp(l(i)) - std::exp(l(j))) / gap;
                m(i, j) = weight * gr * rt(i, j) / a - gs * st(i, j) / b;
            }
        }
        const Mat g = e.vectors * m * e.vectors.adjoint();
        std::size_t k = 0;
        for (int i = 0; i < d; ++i) {
            grad[k++] = -g(i, i).real();
            for (int j = i + 1; j < d; ++j, k += 2) {
                grad[k] = -2.0 * g(i, j).real();
                grad[k + 1] = -2.0 * g(i, j).imag();
            }
        }
        return -(weight * std::log(a) - std::log(b));
    };
    // in the warm basis the classical optimum is omega_k = (p_k / q_k)^alpha
    std::vector<double> p, q;
    pinch(rho, sigma, warm, p, q, alpha);
    Vec logw(d);
    for (int k = 0; k < d; ++k) {
        const double lr = std::log(std::max(p[k], 1e-300)) - std::log(std::max(q[k], 1e-300));
        logw(k) = std::clamp(alpha * lr, -300.0, 300.0);
    }
    const Mat h0 = warm * logw.asDiagonal() * warm.adjoint();
    std::vector<double> x0;
    for (int i = 0; i < d; ++i) {
        x0.push_back(h0(i, i).real());
        for (int j = i + 1; j < d; ++j) {
            x0.push_back(h0(i, j).real());
            x0.push_back(h0(i, j).imag());
        }
    }
    const NelderMeadResult r = quasi_newton(f, x0, qn);
    return herm_eig(hermitian(r.x)).vectors;
}

// eigenbasis of the solution of sigma x + x sigma = 2 rho, optimal at order two when that solution is positive
Mat lyapunov_basis(const Mat& rho, const Eig& sigma) {
    const int d = static_cast<int>(rho.rows());
    const Mat rt = sigma.vectors.adjoint() * rho * sigma.vectors;
    const double floor = 1e-14 * std::max(sigma.values.maxCoeff(), 1e-300);
    Mat x(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            x(i, j) = 2.0 * rt(i, j) / std::max(sigma.values(i) + sigma.values(j), floor);
        }
    }
    return sigma.vectors * herm_eig(x).vectors;
}

}  // namespace

DivergenceValue pinched_renyi(const State& rho, const State& sigma, const Mat& basis, double alpha) {
    std::vector<double> p, q;
    pinch(rho.matrix(), sigma.matrix(), basis, p, q, alpha);
    return classical_renyi(std::span<const double>(p), std::span<const double>(q), alpha);
}

MeasuredResult measured_renyi_detailed(const State& rho, const State& sigma, double alpha,
                                       const MeasuredConfig& cfg) {
    if (!(alpha > 0.0) || alpha == 1.0) throw DomainError("measured Renyi order must lie in (0,1) or (1,inf)");
    if (rho.dim() != sigma.dim()) throw ConfigError("states live on spaces of different dimension");
    const int d = rho.dim();
    MeasuredResult out;
    out.basis = Mat::Identity(d, d);
    if ((alpha > 1.0 && !supported_in(rho, sigma)) || (alpha < 1.0 && orthogonal(rho, sigma))) {
        out.value = DivergenceValue::infinity(DivKind::measured, alpha);
        return out;
    }

    std::vector<Mat> starts;
    starts.push_back(Mat::Identity(d, d));
    starts.push_back(rho.eig().vectors);
    starts.push_back(sigma.eig().vectors);
    starts.push_back(herm_eig(rho.matrix() - sigma.matrix()).vectors);
    starts.push_back(lyapunov_basis(rho.matrix(), sigma.eig()));
    for (int r = 0; r < cfg.random_restarts; ++r) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        starts.push_back(haar_unitary(d, rng));
    }
    for (const auto& b : cfg.extra_bases) {
        if (b.rows() != d || b.cols() != d) throw ConfigError("warm-start basis has the wrong shape");
        starts.push_back(b);
    }

    const Mat& rm = rho.matrix();
    const Mat& sm = sigma.matrix();
    const std::size_t nparam = static_cast<std::size_t>(d) * (d - 1);

    struct RestartOut {
        double value;
        int iterations;
        bool converged;
        Mat basis;
        std::vector<double> x;
    };
    auto run = [&](const Mat& b) {
        auto neg = [&](const std::vector<double>& x) {
            const double v = pinched_value(rm, sm, b * unitary_from(x, d), alpha);
            return std::isfinite(v) ? -v : -kVeryNegative;
        };
        auto neg_grad = [&](const std::vector<double>& x, std::vector<double>& g) {
            const double v = pinched_value_grad(rm, sm, b, x, alpha, g);
            for (double& gi : g) gi = -gi;
            return std::isfinite(v) ? -v : -kVeryNegative;
        };
        const double start_val = pinched_value(rm, sm, b, alpha);
        NelderMeadResult nm = quasi_newton(GradientObjective(neg_grad), std::vector<double>(nparam, 0.0), cfg.qn);
        if (cfg.polish) {
            NelderMeadConfig polish = cfg.nm;
            polish.initial_step = 1e-3;
            const NelderMeadResult fine = nelder_mead(neg, nm.x, polish);
            nm.iterations += fine.iterations;
            if (fine.value < nm.value) {
                nm.x = fine.x;
                nm.value = fine.value;
            }
            nm.converged = nm.converged || fine.converged;
        }
        RestartOut ro;
        ro.iterations = nm.iterations;
        ro.converged = nm.converged;
        if (std::isfinite(start_val) && start_val >= -nm.value) {
            ro.value = start_val;
            ro.basis = b;
            ro.x.assign(nparam, 0.0);
        } else {
            ro.value = -nm.value;
            ro.basis = b * unitary_from(nm.x, d);
            ro.x = nm.x;
        }
        return ro;
    };
    std::vector<RestartOut> results(starts.size());
    parallel_for(starts.size(), [&](std::size_t r) { results[r] = run(starts[r]); });
    if (alpha >= 0.5) {
        std::size_t lead = 0;
        for (std::size_t r = 1; r < results.size(); ++r)
            if (results[r].value > results[lead].value) lead = r;
        starts.push_back(variational_basis(rm, sm, alpha, results[lead].basis, cfg.variational));
        results.push_back(run(starts.back()));
    }

    OptimizerRecord rec;
    rec.restarts = static_cast<int>(results.size());
    std::size_t best = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < results.size(); ++r) {
        rec.iterations += results[r].iterations;
        rec.restart_values.push_back(results[r].value);
        lo = std::min(lo, results[r].value);
        if (results[r].value > results[best].value) best = r;
    }
    const auto& br = results[best];
    rec.spread = br.value - lo;
    rec.warning = !br.converged;

    // central-difference gradient of the objective at the optimum, in the chart of the winning restart
    {
        const Mat& b = starts[best];
        std::vector<double> x = br.x;
        double g2 = 0.0;
        const double h = 1e-6;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double x0 = x[i];
            x[i] = x0 + h;
            const double fp = pinched_value(rm, sm, b * unitary_from(x, d), alpha);
            x[i] = x0 - h;
            const double fm = pinched_value(rm, sm, b * unitary_from(x, d), alpha);
            x[i] = x0;
            if (std::isfinite(fp) && std::isfinite(fm)) g2 += std::pow((fp - fm) / (2 * h), 2);
        }
        rec.final_gradient_norm = std::sqrt(g2);
    }

    if (!std::isfinite(br.value)) {
        out.value = DivergenceValue::infinity(DivKind::measured, alpha);
    } else {
        out.value = DivergenceValue::of(br.value, DivKind::measured, alpha);
    }
    out.value.diagnostics = rec;
    out.basis = br.basis;
    return out;
}

DivergenceValue measured_renyi(const State& rho, const State& sigma, double alpha, const MeasuredConfig& cfg) {
    return measured_renyi_detailed(rho, sigma, alpha, cfg).value;
}

std::vector<TrendPoint> tensor_power_trend(const State& rho, const State& sigma, double alpha, int n_max,
                                           const MeasuredConfig& cfg) {
    if (n_max < 1) throw ConfigError("n_max must be at least 1");
    double total = 1.0;
    for (int i = 0; i < n_max; ++i) total *= rho.dim();
    if (total > 9.0) throw ConfigError("tensor power dimension exceeds the trend cap (dim^n <= 9)");

    std::vector<TrendPoint> out;
    Mat single_basis, prev_basis;
    for (int n = 1; n <= n_max; ++n) {
        const State rn = tensor_power(rho, n);
        const State sn = tensor_power(sigma, n);
        MeasuredConfig c = cfg;
        if (n > 1) c.extra_bases.push_back(kron(prev_basis, single_basis));
        const MeasuredResult m = measured_renyi_detailed(rn, sn, alpha, c);
        if (n == 1) single_basis = m.basis;
        prev_basis = m.basis;
        TrendPoint tp;
        tp.n = n;
        tp.infinite = m.value.infinite;
        tp.per_copy = m.value.infinite ? 0.0 : m.value.value / n;
        out.push_back(tp);
    }
    return out;
}

double variational_lower_bound(const State& rho, const State& sigma, double alpha, const NelderMeadConfig& nm) {
    const int d = rho.dim();
    const Mat v = sigma.eig().vectors;
    Mat h0 = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double p = std::max(v.col(k).dot(rho.matrix() * v.col(k)).real(), 1e-12);
        const double q = std::max(v.col(k).dot(sigma.matrix() * v.col(k)).real(), 1e-12);
        h0 += std::log(p / q) * v.col(k) * v.col(k).adjoint();
    }
    const HilbertSpace& sp = rho.space();
    auto build = [&](const std::vector<double>& x) {
        Mat h = h0;
        std::size_t k = 0;
        for (int p = 0; p < d; ++p) {
            h(p, p) += x[k++];
            for (int q = p + 1; q < d; ++q) {
                const cplx z(x[k], x[k + 1]);
                k += 2;
                h(p, q) += z;
                h(q, p) += std::conj(z);
            }
        }
        return Observable(sp, hermitize(h));
    };
    auto neg = [&](const std::vector<double>& x) { return -variational_objective(rho, sigma, alpha, build(x)); };
    const std::vector<double> x0(static_cast<std::size_t>(d) * d, 0.0);
    const double start = -neg(x0);
    const NelderMeadResult r = nelder_mead(neg, x0, nm);
    return std::max(start, -r.value);
}

}  // namespace qgb
