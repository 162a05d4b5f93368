#pragma once

#include <span>
#include <vector>

#include "tw/errors.hpp"

namespace tw {

struct AccuracyBudget {
    double rel_tol = 1e-14;
    double abs_floor = 1e-300;
};

// log Gamma, Lanczos g=7 / 9 terms, reflection below Re z = 1/2
Complex log_gamma(Complex z);

// exp(sum log_gamma), summed in a fixed (sorted) order
Complex gamma_product(std::span<const Complex> zs);
Complex log_gamma_product(std::span<const Complex> zs);

// log(sin(pi z)) without overflow for large |Im z|
Complex log_sin_pi(Complex z);

// 1/(Gamma(w)Gamma(-w)) = -w sin(pi w)/pi, entire; log form returns false at the zero
bool log_rgamma_pair(Complex w, Complex& out);

// exp with log-space clamp: anything below e^{-745} is returned as 0
inline Complex exp_clamped(Complex z) { return z.real() < -745.0 ? Complex(0.0) : std::exp(z); }

// Standard Macdonald function K_nu(y) = int_0^inf e^{-y cosh u} cosh(nu u) du
Complex macdonald_k(Complex nu, double y, const AccuracyBudget& budget = {});

}  // namespace tw
