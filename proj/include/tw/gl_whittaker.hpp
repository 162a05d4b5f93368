#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tw/quadrature.hpp"

namespace tw {

enum class Convention { Givental, Iwasawa };

struct SpectralParams {
    std::vector<Complex> values;
    Convention convention = Convention::Givental;

    size_t size() const { return values.size(); }
};

// x_{k,i}, row k (1-based) has k entries
struct TriangularPattern {
    std::vector<std::vector<double>> rows;

    void validate() const;
};

using Evaluator = std::function<Complex(std::span<const double>)>;

enum class Step { L, R };

// exponent F of the Givental integrand; last row of the pattern is the argument
Complex givental_exponent(std::span<const Complex> lambda, const TriangularPattern& p);

Complex givental_step_log(std::span<const double> x_top, std::span<const double> x_bot, Complex lambda_new);
Complex givental_step_kernel(std::span<const double> x_top, std::span<const double> x_bot, Complex lambda_new);

QuadratureResult givental_eval(const SpectralParams& lambda, std::span<const double> x, double tol,
                               const QuadOptions& opt = {});
QuadratureResult givental_recursive_eval(const SpectralParams& lambda, std::span<const double> x, double tol,
                                         const QuadOptions& opt = {});

// contour rows 1..l in the Mellin-Barnes variables gamma (top row gamma = -lambda)
ContourSpec default_contour(const SpectralParams& lambda);

Complex mb_step_kernel(std::span<const Complex> gamma_top, std::span<const Complex> gamma_bot, double x_new);

QuadratureResult mellin_barnes_eval(const SpectralParams& lambda, std::span<const double> x,
                                    const std::optional<ContourSpec>& contour, double tol,
                                    const QuadOptions& opt = {});

// word[0] is the outermost step
QuadratureResult mixed_eval(std::span<const Step> word, const SpectralParams& lambda, std::span<const double> x,
                            const std::optional<ContourSpec>& contour, double tol, const QuadOptions& opt = {});

Complex closed_form_gl2(Complex l1, Complex l2, double x1, double x2);

// log of 1/((2pi)^n n!) prod_{j!=k} 1/Gamma(i l_k - i l_j); false when the measure vanishes
bool log_measure(std::span<const Complex> lambda, Complex& out);
Complex plancherel_measure(const SpectralParams& lambda);

enum class Hamiltonian { H1, H2tilde };

Complex toda_apply(Hamiltonian h, const Evaluator& psi, std::span<const double> x, double step = 1e-3);

// t(mu) = sum_{j=0}^{n} (-1)^j mu^{n-j} H_j with H_0 = 1; n <= 2 only
Complex toda_generating_apply(Complex mu, const Evaluator& psi, std::span<const double> x, double step = 1e-3);
Complex toda_generating_eigenvalue(Complex mu, std::span<const Complex> lambda);

// Richardson: (4 A(h/2) - A(h)) / 3
Complex richardson(const std::function<Complex(double)>& a, double step);

}  // namespace tw
