#pragma once

#include <span>
#include <vector>

#include "tw/gl_whittaker.hpp"

namespace tw {

// x-rows x_{k,i} and z-rows z_{k,i}, 1 <= i <= k <= l
struct SoPattern {
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> z;

    void validate() const;
};

Complex so_exponent(std::span<const Complex> lambda, const SoPattern& p);

QuadratureResult so_givental_eval(std::span<const Complex> lambda, std::span<const double> x, double tol,
                                  const QuadOptions& opt = {});

// kernel from so_{2l-1} to so_{2l}, itself an l-dimensional z-integral; l <= 2
QuadratureResult so_step_kernel(std::span<const double> x_top, std::span<const double> x_bot, Complex lambda_new,
                                double tol, const QuadOptions& opt = {});

// outer x_{l-1} integral of the step kernel against the so_3 closed form; l = 2 only
QuadratureResult so_recursive_eval(std::span<const Complex> lambda, std::span<const double> x, double tol,
                                   const QuadOptions& opt = {});

// 2 K_{2 i lambda}(2 e^{x/2})
Complex closed_form_so3(Complex lambda, double x);

// requires Re(i gamma +- i lambda) >= delta
QuadratureResult so_baxter_apply(Complex gamma, std::span<const Complex> lambda, std::span<const double> y, double tol,
                                 double delta = 0.25, const QuadOptions& opt = {});
Complex so_baxter_eigenvalue(Complex gamma, std::span<const Complex> lambda);

// 2 Gamma(2 i g) B^{-i g} e^{i g (x + y)} K_{2 i g}(2 sqrt B), B = e^x + e^y, at l = 1
Complex so_baxter_kernel_closed(double y, double x, Complex gamma);

Complex so_toda_apply_h2(const Evaluator& psi, std::span<const double> x, double step = 1e-3);

}  // namespace tw
