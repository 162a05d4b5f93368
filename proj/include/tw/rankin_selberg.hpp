#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tw/gl_baxter.hpp"

namespace tw {

// int e^{-e^{x_{l+1}}} conj(Psi_gamma) Psi_{lambda + t} dx over R^{l+1}; l <= 1
QuadratureResult bump_friedberg_integral(int ell, const SpectralParams& gamma, const SpectralParams& lambda, Complex t,
                                         double tol, double delta = 0.25, const QuadOptions& opt = {});
// prod_{j,k} Gamma(i t + i lambda_k - i conj(gamma_j))
Complex bump_friedberg_rhs(const SpectralParams& gamma, const SpectralParams& lambda, Complex t);

// int conj(Psi^{gl_1}_gamma)(x1) Psi^{gl_2}_{lambda + t}(x1, x_last) dx1
QuadratureResult bump_inner_correlation(int ell, const SpectralParams& gamma_bot, const SpectralParams& lambda_top,
                                        Complex t, double x_last, double tol, double delta = 0.25,
                                        const QuadOptions& opt = {});
// e^{i (lambda_1 + lambda_2 + 2t - conj gamma) x_last} Gamma(i t + i lambda_1 - i conj gamma) Gamma(...)
Complex bump_inner_correlation_predicted(const SpectralParams& gamma_bot, const SpectralParams& lambda_top, Complex t,
                                         double x_last);

// lam_pair = (lambda_l, lambda_{l+1}); x_top has l + 1 entries, x_bot l - 1
Complex stade_kernel(std::span<const double> x_top, std::span<const double> x_bot, const std::pair<Complex, Complex>& lam_pair);

QuadratureResult double_step_kernel(std::span<const double> x_top, std::span<const double> x_bot,
                                    const std::pair<Complex, Complex>& lam_pair, double tol, const QuadOptions& opt = {});

// (1/2pi) int Gamma(iu - i l1) Gamma(iu - i l2) Gamma(i g1 - iu) Gamma(i g2 - iu) du
// against Gamma-products; the line Im u = offset must satisfy max Im g < offset < min Im l
IdentityCheck barnes_gustafson(const std::pair<Complex, Complex>& lambda2, const std::pair<Complex, Complex>& gamma2,
                               double tol, std::optional<double> offset = std::nullopt, const QuadOptions& opt = {});
double barnes_gustafson_check(const std::pair<Complex, Complex>& lambda2, const std::pair<Complex, Complex>& gamma2,
                              double tol, std::optional<double> offset = std::nullopt, const QuadOptions& opt = {});

}  // namespace tw
