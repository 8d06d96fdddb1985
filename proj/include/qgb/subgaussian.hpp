#pragma once

#include "qgb/divergence.hpp"
#include "qgb/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace qgb {

enum class CertSource { user_supplied, norm_derived, spectral_width, grid_fitted };

std::string to_string(CertSource s);

struct SubGaussianCert {
    double mu = 0.0;
    double tau = 0.0;
    CertSource source = CertSource::user_supplied;
};

// log Tr[exp(lambda (L - Tr[L rho] I)) rho]; RangeError when |lambda| * ||L||_inf > 700.
double quantum_mgf(const Observable& l, const State& rho, double lambda);

struct HoeffdingCheck {
    bool holds = true;
    double worst_slack = 0.0;
    double worst_lambda = 0.0;
};

std::vector<double> default_lambda_grid();

HoeffdingCheck check_quantum_hoeffding(const Observable& l, const State& rho, double a, double b,
                                       const std::vector<double>& lambda_grid);

// mu = ||L||_inf / 2
SubGaussianCert derive_mu_from_norm(const Observable& l);
// mu = (lambda_max - lambda_min) / 2, the constant delivered by the Hoeffding lemma
SubGaussianCert derive_mu_from_spectrum(const Observable& l);
// smallest mu consistent with the MGF on the grid (a falsification aid, not a certificate)
SubGaussianCert fit_mu_on_grid(const Observable& l, const State& rho, const std::vector<double>& lambda_grid);

struct ChangeOfMeasure {
    double upper = 0.0;
    double lower = 0.0;
    double mu = 0.0;
    bool vacuous = false;
};

ChangeOfMeasure change_of_measure_bound(const Observable& l, const State& rho, const State& sigma);

double classical_mgf(std::span<const double> values, std::span<const double> dist, double lambda);
HoeffdingCheck check_classical_hoeffding(std::span<const double> values, std::span<const double> dist, double a,
                                         double b, const std::vector<double>& lambda_grid);
double derive_tau(std::span<const double> values);

// Classical change of measure: E_P f <= E_Q f + tau sqrt(2 KL(P||Q)).
ChangeOfMeasure classical_change_of_measure(std::span<const double> values, std::span<const double> p,
                                            std::span<const double> q);

}  // namespace qgb
