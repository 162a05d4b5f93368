#include "tw/so_toda.hpp"

#include <algorithm>
#include <cmath>

#include "tw/errors.hpp"
#include "tw/numerics.hpp"

namespace tw {

namespace {

const Complex I(0.0, 1.0);

double margin(double eps) {
    double V = std::max(1.0, std::log(1.0 / eps));
    for (int it = 0; it < 30; ++it) V = std::max(1.0, std::log(1.0 / (eps * V)));
    return std::log(V) + 1.0;
}

Interval ordered(double lo, double hi) {
    if (hi <= lo) hi = lo + 1.0;
    return {lo, hi};
}

void check_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidArgument("non-finite argument");
}

Complex so5_log(std::span<const Complex> lam, double x21, double x22, double x11, double z11, double z21,
                double z22) {
    Complex F = -I * lam[0] * (x11 - 2 * z11) - I * lam[1] * (x21 + x22 - 2 * z21 - 2 * z22 + x11);
    F -= std::exp(z11) + std::exp(x11 - z11);
    F -= std::exp(z21) + std::exp(x11 - z21) + std::exp(x21 - z21);
    F -= std::exp(z22 - x11) + std::exp(z22 - x21) + std::exp(x22 - z22);
    return F;
}

}  // namespace

void SoPattern::validate() const {
    const size_t l = x.size();
    if (l == 0 || z.size() != l) throw InvalidArgument("SoPattern: x and z need the same number of rows");
    for (size_t k = 0; k < l; ++k)
        if (x[k].size() != k + 1 || z[k].size() != k + 1) throw InvalidArgument("SoPattern: row k must have k entries");
}

Complex so_exponent(std::span<const Complex> lam, const SoPattern& p) {
    p.validate();
    const size_t l = p.x.size();
    if (lam.size() != l) throw InvalidArgument("so_exponent: spectral size mismatch");
    Complex F = -I * lam[0] * (p.x[0][0] - 2 * p.z[0][0]);
    for (size_t n = 1; n < l; ++n) {
        double s = 0;
        for (double v : p.x[n]) s += v;
        for (double v : p.z[n]) s -= 2 * v;
        for (double v : p.x[n - 1]) s += v;
        F -= I * lam[n] * s;
    }
    double e = 0;
    for (size_t n = 0; n < l; ++n) e += std::exp(p.z[n][0]);
    // 0-based: rows n >= 1, entries k; x_{n-1,k} exists for k < n
    for (size_t n = 1; n < l; ++n)
        for (size_t k = 0; k < n; ++k) e += std::exp(p.x[n - 1][k] - p.z[n][k]) + std::exp(p.x[n][k] - p.z[n][k]);
    for (size_t n = 1; n < l; ++n)
        for (size_t k = 1; k <= n; ++k)
            e += std::exp(p.z[n][k] - p.x[n - 1][k - 1]) + std::exp(p.z[n][k] - p.x[n][k - 1]);
    for (size_t n = 0; n < l; ++n) e += std::exp(p.x[n][n] - p.z[n][n]);
    return F - e;
}

Complex closed_form_so3(Complex lambda, double x) { return 2.0 * macdonald_k(2.0 * I * lambda, 2.0 * std::exp(0.5 * x)); }

QuadratureResult so_givental_eval(std::span<const Complex> lam, std::span<const double> x, double tol,
                                  const QuadOptions& opt) {
    const size_t l = lam.size();
    if (x.size() != l || l == 0) throw InvalidArgument("so_givental_eval: size mismatch");
    if (l > 2) throw RankError("so_givental_eval: capped at so_5");
    check_finite(x);
    const double L = margin(tol * 1e-3);
    std::vector<Complex> lv(lam.begin(), lam.end());
    if (l == 1) {
        double x11 = x[0];
        std::vector<Interval> box{ordered(x11 - L, L)};
        Integrand f = [lv, x11](std::span<const double> u) {
            return exp_clamped(-I * lv[0] * (x11 - 2 * u[0]) - std::exp(u[0]) - std::exp(x11 - u[0]));
        };
        auto r = integrate_box(f, box, 0.9 * tol, opt);
        r.abs_error += 0.1 * tol;
        r.converged = r.converged && r.abs_error <= tol;
        return r;
    }
    const double x21 = x[0], x22 = x[1];
    // variables x11, z11, z21, z22
    std::vector<Interval> box{ordered(x22 - 2 * L, 2 * L), ordered(x22 - 3 * L, L), ordered(x21 - L, L),
                              ordered(x22 - L, std::min(2 * L, x21 + L))};
    Integrand f = [lv, x21, x22](std::span<const double> u) {
        return exp_clamped(so5_log(lv, x21, x22, u[0], u[1], u[2], u[3]));
    };
    auto r = integrate_box(f, box, 0.9 * tol, opt);
    r.abs_error += 0.1 * tol;
    r.converged = r.converged && r.abs_error <= tol;
    return r;
}

QuadratureResult so_step_kernel(std::span<const double> xt, std::span<const double> xb, Complex lam, double tol,
                                const QuadOptions& opt) {
    const size_t l = xt.size();
    if (l == 0 || l > 2) throw RankError("so_step_kernel: l <= 2");
    if (xb.size() + 1 != l) throw InvalidArgument("so_step_kernel: bottom row must have l - 1 entries");
    check_finite(xt);
    check_finite(xb);
    const double L = margin(tol * 1e-3);
    if (l == 1) {
        double x = xt[0];
        std::vector<Interval> box{ordered(x - L, L)};
        Integrand f = [lam, x](std::span<const double> u) {
            return exp_clamped(I * lam * x - 2.0 * I * lam * u[0] - std::exp(u[0]) - std::exp(x - u[0]));
        };
        auto r = integrate_box(f, box, 0.9 * tol, opt);
        r.abs_error += 0.1 * tol;
        return r;
    }
    const double x21 = xt[0], x22 = xt[1], x11 = xb[0];
    Complex ph = -I * lam * (x21 + x22 + x11);
    std::vector<Interval> box{ordered(std::max(x11, x21) - L, L),
                              ordered(x22 - L, std::min(x11, x21) + L)};
    Integrand f = [=](std::span<const double> u) {
        double z1 = u[0], z2 = u[1];
        Complex F = ph + 2.0 * I * lam * (z1 + z2) - std::exp(z1) - std::exp(x11 - z1) - std::exp(x21 - z1) -
                    std::exp(z2 - x11) - std::exp(z2 - x21) - std::exp(x22 - z2);
        return exp_clamped(F);
    };
    auto r = integrate_box(f, box, 0.9 * tol, opt);
    r.abs_error += 0.1 * tol;
    return r;
}

QuadratureResult so_recursive_eval(std::span<const Complex> lam, std::span<const double> x, double tol,
                                   const QuadOptions& opt) {
    if (lam.size() != 2 || x.size() != 2) throw RankError("so_recursive_eval: l = 2 only");
    check_finite(x);
    const double L = margin(tol * 1e-3);
    const double inner = tol / 20.0;
    std::vector<double> top(x.begin(), x.end());
    Complex l1 = lam[0], l2 = lam[1];
    IntegrandAux f = [=](std::span<const double> u) {
        double xb[1] = {u[0]};
        Complex psi = closed_form_so3(l1, u[0]);
        double ap = std::abs(psi);
        // kernel accuracy scaled so the product error stays near `inner`
        double t = std::min(1e-3, inner / std::max(ap, 1e-300));
        auto k = so_step_kernel(top, xb, l2, t, opt);
        return ValueAux{k.value * psi, k.abs_error * ap};
    };
    std::vector<Interval> box{ordered(x[1] - 2 * L, 2 * L)};
    auto r = integrate_box_aux(f, box, 0.8 * tol, opt);
    r.abs_error += 0.2 * tol;
    r.converged = r.converged && r.abs_error <= tol;
    return r;
}

Complex so_baxter_eigenvalue(Complex gamma, std::span<const Complex> lam) {
    std::vector<Complex> args;
    for (auto l : lam) {
        args.push_back(I * gamma - I * l);
        args.push_back(I * gamma + I * l);
    }
    return gamma_product(args);
}

Complex so_baxter_kernel_closed(double y, double x, Complex g) {
    double B = std::exp(x) + std::exp(y);
    Complex lg = std::log(2.0) + log_gamma(2.0 * I * g) - I * g * std::log(B) + I * g * (x + y);
    return std::exp(lg) * macdonald_k(2.0 * I * g, 2.0 * std::sqrt(B));
}

QuadratureResult so_baxter_apply(Complex g, std::span<const Complex> lam, std::span<const double> y, double tol,
                                 double delta, const QuadOptions& opt) {
    if (lam.size() != 1 || y.size() != 1) throw RankError("so_baxter_apply: l = 1 only");
    check_finite(y);
    double r = 1e300;
    for (double s : {1.0, -1.0}) r = std::min(r, (I * g + s * I * lam[0]).real());
    if (!(r >= delta)) throw ShiftError("so_baxter_apply: convergence shift violated");
    const double yy = y[0];
    const Complex l = lam[0];
    const double eps = tol / 60.0;
    const double L = margin(eps * 1e-2);
    double rx = 0.9 * r, rw = 0.9 * 2.0 * (I * g).real();
    double Tx = tail_length(Exponential{rx}, eps), Tw = tail_length(Exponential{rw}, eps);
    // variables x, z1, w = z2 - x
    std::vector<Interval> box{ordered(yy - Tx, std::max(2 * L, yy + L)), ordered(yy - L, std::max(L, yy + 1.0)),
                              ordered(-Tw, L)};
    Integrand f = [=](std::span<const double> u) {
        double x = u[0], z1 = u[1], w = u[2];
        Complex F = -I * g * (yy - x - 2 * z1 - 2 * w) - std::exp(z1) - std::exp(yy - z1) - std::exp(x - z1) -
                    std::exp(w) - std::exp(x + w - yy);
        Complex k = exp_clamped(F);
        if (k == Complex(0.0)) return Complex(0.0);
        return k * closed_form_so3(l, x);
    };
    auto q = integrate_box(f, box, 0.9 * tol, opt);
    q.abs_error += 0.1 * tol;
    q.converged = q.converged && q.abs_error <= tol;
    return q;
}

Complex so_toda_apply_h2(const Evaluator& psi, std::span<const double> x, double step) {
    if (!(step > 0)) throw InvalidArgument("so_toda_apply_h2: step must be positive");
    const size_t l = x.size();
    if (l == 0) throw InvalidArgument("so_toda_apply_h2: empty point");
    std::vector<double> p(x.begin(), x.end());
    Complex c = psi(p);
    Complex lap = 0.0;
    for (size_t i = 0; i < l; ++i) {
        p[i] = x[i] + step;
        Complex a = psi(p);
        p[i] = x[i] - step;
        Complex b = psi(p);
        p[i] = x[i];
        lap += (a - 2.0 * c + b) / (step * step);
    }
    double pot = 0.5 * std::exp(x[0]);
    for (size_t i = 0; i + 1 < l; ++i) pot += std::exp(x[i + 1] - x[i]);
    return -0.5 * lap + pot * c;
}

}  // namespace tw
