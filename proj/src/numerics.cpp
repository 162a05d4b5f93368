#include "tw/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace tw {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPoleEps = 1e-12;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool near_nonpositive_integer(Complex z) {
    if (z.real() > 0.5) return false;
    double n = std::round(z.real());
    if (n > 0) return false;
    return std::abs(z - Complex(n, 0.0)) < kPoleEps;
}

Complex lanczos_right(Complex z) {
    // valid for Re z >= 1/2
    z -= 1.0;
    Complex x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    Complex t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

Complex log_sin_pi(Complex z) {
    double y = z.imag();
    if (std::abs(y) < 10.0) return std::log(std::sin(kPi * z));
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z}) for Im z > 0, mirror otherwise
    const Complex I(0.0, 1.0);
    if (y > 0) return std::log(I / 2.0) - I * kPi * z + std::log(1.0 - std::exp(2.0 * I * kPi * z));
    return std::log(-I / 2.0) + I * kPi * z + std::log(1.0 - std::exp(-2.0 * I * kPi * z));
}

Complex log_gamma(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidArgument("log_gamma: non-finite argument");
    if (near_nonpositive_integer(z)) throw PoleError("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        return std::log(kPi) - log_sin_pi(z) - lanczos_right(1.0 - z);
    }
    return lanczos_right(z);
}

Complex log_gamma_product(std::span<const Complex> zs) {
    std::vector<size_t> order(zs.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (zs[a].real() != zs[b].real()) return zs[a].real() < zs[b].real();
        if (zs[a].imag() != zs[b].imag()) return zs[a].imag() < zs[b].imag();
        return a < b;
    });
    Complex acc = 0.0;
    for (size_t k : order) {
        try {
            acc += log_gamma(zs[k]);
        } catch (const PoleError&) {
            throw PoleError("gamma_product: pole at index " + std::to_string(k), long(k));
        }
    }
    return acc;
}

Complex gamma_product(std::span<const Complex> zs) { return std::exp(log_gamma_product(zs)); }

bool log_rgamma_pair(Complex w, Complex& out) {
    // Gamma(w)Gamma(-w) = -pi / (w sin(pi w))
    if (std::abs(w) < 1e-300) return false;
    double n = std::round(w.real());
    if (std::abs(w - Complex(n, 0.0)) < kPoleEps) return false;
    out = std::log(-w) + log_sin_pi(w) - std::log(kPi);
    return true;
}

Complex macdonald_k(Complex nu, double y, const AccuracyBudget& budget) {
    if (!(y > 0) || !std::isfinite(y)) throw InvalidArgument("macdonald_k: y must be positive");
    if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()))
        throw InvalidArgument("macdonald_k: non-finite order");
    const double a = std::abs(nu.real());
    if (a > 50) throw InvalidArgument("macdonald_k: |Re nu| > 50");
    const double floor = std::max(budget.abs_floor, 1e-300);
    const double thresh = -std::log(floor) + 40.0;

    if (y > thresh) return 0.0;

    // smallest U beyond the minimum with y cosh U - a U >= thresh
    double U = std::acosh(std::max(1.0, thresh / y)) + 1.0;
    for (int it = 0; it < 200; ++it) {
        double Un = std::acosh(std::max(1.0, (thresh + a * U) / y));
        if (std::abs(Un - U) < 1e-10) {
            U = Un;
            break;
        }
        U = Un;
    }
    U = std::max(U, 1e-3);

    // scaled integrand: K = e^{-y} * int_0^U g
    auto g = [&](double u) {
        double s = std::sinh(0.5 * u);
        double damp = -2.0 * y * s * s;
        return 0.5 * (std::exp(nu * u + damp) + std::exp(-nu * u + damp));
    };

    double h0 = std::min({0.5, 1.5 / std::sqrt(y), 1.0 / (1.0 + std::abs(nu.imag()))});
    long n = std::max(16L, long(std::ceil(U / h0)));
    double h = U / double(n);
    Complex sum = 0.5 * g(0.0) + 0.5 * g(U);
    double asum = std::abs(sum);
    for (long k = 1; k < n; ++k) {
        Complex v = g(k * h);
        sum += v;
        asum += std::abs(v);
    }
    Complex T = h * sum;

    const double scaled_floor = floor * std::exp(std::min(y, 700.0));
    for (int level = 0; level < 22; ++level) {
        Complex mid = 0.0;
        for (long k = 0; k < n; ++k) {
            Complex v = g((k + 0.5) * h);
            mid += v;
            asum += std::abs(v);
        }
        sum += mid;
        n *= 2;
        h *= 0.5;
        Complex Tn = h * sum;
        double diff = std::abs(Tn - T);
        T = Tn;
        // cancellation for oscillatory orders: cannot beat roundoff of the sum
        double noise = 64.0 * 2.2e-16 * h * asum;
        if (level >= 1 && diff <= std::max({budget.rel_tol * std::abs(T), scaled_floor, noise})) {
            Complex out = std::exp(-y) * T;
            if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
                throw ConvergenceError("macdonald_k: overflow");
            return out;
        }
    }
    throw ConvergenceError("macdonald_k: trapezoid refinement did not meet the budget");
}

}  // namespace tw
