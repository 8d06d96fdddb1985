#pragma once

// Test-side reference computations. These deliberately avoid the library's
// Jacobi solver and use Eigen's SelfAdjointEigenSolver plus direct formulas.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline Mat mpow(const Mat& a, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) * 0.5);
    RVec v = es.eigenvalues();
    const double thr = 1e-12 * v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i) v(i) = v(i) > thr ? std::pow(v(i), t) : 0.0;
    return es.eigenvectors() * v.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat mlog(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) * 0.5);
    RVec v = es.eigenvalues();
    const double thr = 1e-12 * v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i) v(i) = v(i) > thr ? std::log(v(i)) : 0.0;
    return es.eigenvectors() * v.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

inline Mat mexp(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es((a + a.adjoint()) * 0.5);
    RVec v = es.eigenvalues();
    for (int i = 0; i < v.size(); ++i) v(i) = std::exp(v(i));
    return es.eigenvectors() * v.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

inline double petz(const Mat& rho, const Mat& sigma, double a) {
    return std::log((mpow(rho, a) * mpow(sigma, 1.0 - a)).trace().real()) / (a - 1.0);
}

inline double sandwiched(const Mat& rho, const Mat& sigma, double a) {
    const Mat s = mpow(sigma, (1.0 - a) / (2.0 * a));
    return std::log(mpow(s * rho * s, a).trace().real()) / (a - 1.0);
}

inline double relative_entropy(const Mat& rho, const Mat& sigma) {
    return (rho * (mlog(rho) - mlog(sigma))).trace().real();
}

inline double renyi(const std::vector<double>& p, const std::vector<double>& q, double g) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0 && q[i] > 0) s += std::pow(p[i], g) * std::pow(q[i], 1.0 - g);
    return std::log(s) / (g - 1.0);
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0) s += p[i] * std::log(p[i] / q[i]);
    return s;
}

inline Mat diag(const std::vector<double>& v) {
    Mat m = Mat::Zero(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
}

}  // namespace oracle
