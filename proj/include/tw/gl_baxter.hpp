#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tw/gl_whittaker.hpp"

namespace tw {

enum class BaxterTag { Lie, Iwasawa, IwasawaPi };

struct BaxterConvention {
    BaxterTag tag = BaxterTag::Lie;
    std::vector<double> rho_shift;  // only for IwasawaPi

    static BaxterConvention lie() { return {}; }
    static BaxterConvention iwasawa() { return {BaxterTag::Iwasawa, {}}; }
    static BaxterConvention iwasawa_pi(size_t n);
    void validate(size_t n) const;
};

// rho_j = l/2 + 1 - j, j = 1..n
std::vector<double> rho_vector(size_t n);

Complex baxter_kernel(std::span<const double> x, std::span<const double> y, Complex lam,
                      const BaxterConvention& conv);

// exponential decay rate of the Baxter-apply integrand along the last coordinate
double baxter_decay_rate(Complex gamma, std::span<const Complex> spectral, const BaxterConvention& conv);

Complex baxter_eigenvalue(Complex gamma, std::span<const Complex> spectral, const BaxterConvention& conv);

// the eigenfunction in the convention's own variables and spectral parameters
Complex baxter_eigenfunction(std::span<const Complex> spectral, std::span<const double> x,
                             const BaxterConvention& conv, double tol = 1e-10);

QuadratureResult baxter_apply(Complex gamma, const Evaluator& psi, std::span<const Complex> spectral,
                              std::span<const double> y, const BaxterConvention& conv, double tol,
                              double delta = 0.25, const QuadOptions& opt = {});

using SpectralFunction = std::function<Complex(std::span<const Complex>)>;

// gamma and the integration variables live in the Mellin-Barnes convention
QuadratureResult dual_baxter_apply(double z, const SpectralFunction& F, std::span<const Complex> gamma,
                                   const std::optional<ContourSpec>& contour, double tol,
                                   const QuadOptions& opt = {});

// (Q(a) o Q(b))(y, z) in the Lie convention
QuadratureResult baxter_compose(Complex a, Complex b, std::span<const double> y, std::span<const double> z,
                                double tol, const QuadOptions& opt = {});
double commutation_residual(Complex lambda, Complex lambda2, std::span<const double> y, std::span<const double> z,
                            double tol, const QuadOptions& opt = {});

struct IdentityCheck {
    Complex lhs = 0.0;
    Complex rhs = 0.0;
    double residual = 0.0;
    double abs_error = 0.0;
};

// Q^{gl2}(gamma) Q^{gl2}_{gl1}(lambda) vs Gamma(i gamma - i lambda) Q^{gl2}_{gl1}(lambda) Q^{gl1}(gamma)
IdentityCheck intertwining_check_gl2(Complex gamma, Complex lambda, std::span<const double> y, double w, double tol,
                                     double delta = 0.25, const QuadOptions& opt = {});

// Q(lambda - i) f vs i (lambda - H1) Q(lambda) f at n = 1; f must decay at least like e^{-right_rate x}
IdentityCheck difference_equation_check_gl1(Complex lambda, const Evaluator& f, double right_rate, double y,
                                            double step, double tol);

using RealMatrix = std::vector<std::vector<double>>;

Complex universal_baxter_phi(const RealMatrix& g, Complex lam);

// h(g) = log a for g = k a n, n lower unipotent
std::vector<double> iwasawa_projection(const RealMatrix& g);

// phi_gamma(diag(e^{x1}, e^{x2})) by the K-integral
QuadratureResult spherical_function_rank2(Complex g1, Complex g2, double x1, double x2, double tol);

IdentityCheck spherical_transform_rank2(Complex g1, Complex g2, Complex lam, double tol,
                                        const QuadOptions& opt = {});
double spherical_transform_check_rank2(Complex g1, Complex g2, Complex lam, double tol,
                                       const QuadOptions& opt = {});

// A+ integral with phi_gamma replaced by 1, against the product of two Gamma integrals
IdentityCheck spherical_gaussian_check(Complex lam, double tol);

}  // namespace tw
