#include "tw/rankin_selberg.hpp"

#include <algorithm>
#include <cmath>

#include "tw/errors.hpp"
#include "tw/numerics.hpp"

namespace tw {

namespace {

const Complex I(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

double margin(double eps) {
    double V = std::max(1.0, std::log(1.0 / eps));
    for (int it = 0; it < 30; ++it) V = std::max(1.0, std::log(1.0 / (eps * V)));
    return std::log(V) + 1.0;
}

void require_givental(const SpectralParams& s, const char* what) {
    if (s.convention != Convention::Givental) throw InvalidArgument(std::string(what) + ": Givental convention only");
}

// min over pairs of Re(i t + i lambda_k - i conj gamma_j)
double pair_rate(std::span<const Complex> g, std::span<const Complex> l, Complex t) {
    double r = 1e300;
    for (auto a : l)
        for (auto b : g) r = std::min(r, (I * t + I * a - I * std::conj(b)).real());
    return r;
}

Complex psi_gl(std::span<const Complex> lam, double x1, double x2) { return closed_form_gl2(lam[0], lam[1], x1, x2); }

}  // namespace

Complex bump_friedberg_rhs(const SpectralParams& g, const SpectralParams& l, Complex t) {
    std::vector<Complex> args;
    for (auto a : l.values)
        for (auto b : g.values) args.push_back(I * t + I * a - I * std::conj(b));
    return gamma_product(args);
}

QuadratureResult bump_friedberg_integral(int ell, const SpectralParams& g, const SpectralParams& l, Complex t,
                                         double tol, double delta, const QuadOptions& opt) {
    if (ell < 0 || ell > 1) throw RankError("bump_friedberg_integral: l <= 1");
    require_givental(g, "bump_friedberg_integral");
    require_givental(l, "bump_friedberg_integral");
    const size_t n = size_t(ell) + 1;
    if (g.size() != n || l.size() != n) throw InvalidArgument("bump_friedberg_integral: need l + 1 parameters each");
    double r = pair_rate(g.values, l.values, t);
    if (!(r >= delta)) throw ShiftError("bump_friedberg_integral: convergence shift violated");
    const double eps = tol / 40.0;
    if (ell == 0) {
        Complex a = I * (l.values[0] + t) - I * std::conj(g.values[0]);
        DecayProfile p{{DimDecay{0.0, Exponential{0.9 * r}, DoubleExponential{1.0, -1.0}}}};
        Integrand f = [a](std::span<const double> x) { return exp_clamped(a * x[0] - std::exp(x[0])); };
        return integrate_decaying(f, p, tol, opt);
    }
    std::vector<Complex> gv = g.values, lv{l.values[0] + t, l.values[1] + t};
    const double L = margin(eps * 1e-2);
    double T = tail_length(Exponential{0.9 * r}, eps);
    // x2 <= L from e^{-e^{x2}}; x1 - x2 <= 2 log V from the Macdonald factor
    std::vector<Interval> box{{-T, 3 * L}, {-T - 2 * L, L}};
    Integrand f = [gv, lv](std::span<const double> x) {
        double e = std::exp(x[1]);
        if (e > 745) return Complex(0.0);
        return std::exp(-e) * std::conj(psi_gl(gv, x[0], x[1])) * psi_gl(lv, x[0], x[1]);
    };
    auto q = integrate_box(f, box, 0.9 * tol, opt);
    q.abs_error += 0.1 * tol;
    q.converged = q.converged && q.abs_error <= tol;
    return q;
}

Complex bump_inner_correlation_predicted(const SpectralParams& g, const SpectralParams& l, Complex t, double x) {
    Complex gb = std::conj(g.values.at(0));
    Complex slope = l.values.at(0) + l.values.at(1) + 2.0 * t - gb;
    std::vector<Complex> args{I * t + I * l.values[0] - I * gb, I * t + I * l.values[1] - I * gb};
    return std::exp(I * slope * x) * gamma_product(args);
}

QuadratureResult bump_inner_correlation(int ell, const SpectralParams& g, const SpectralParams& l, Complex t,
                                        double x_last, double tol, double delta, const QuadOptions& opt) {
    if (ell != 1) throw RankError("bump_inner_correlation: l = 1 only");
    require_givental(g, "bump_inner_correlation");
    require_givental(l, "bump_inner_correlation");
    if (g.size() != 1 || l.size() != 2) throw InvalidArgument("bump_inner_correlation: sizes (1, 2)");
    if (!std::isfinite(x_last)) throw InvalidArgument("bump_inner_correlation: non-finite x_last");
    double r = pair_rate(g.values, l.values, t);
    if (!(r >= delta)) throw ShiftError("bump_inner_correlation: convergence shift violated");
    Complex gb = std::conj(g.values[0]);
    std::vector<Complex> lv{l.values[0] + t, l.values[1] + t};
    // u = x1 - x_last; Macdonald factor kills u > 2 log V
    DecayProfile p{{DimDecay{x_last, Exponential{0.9 * r}, DoubleExponential{0.5, std::log(2.0) - 1.0}}}};
    Integrand f = [gb, lv, x_last](std::span<const double> x) {
        return std::exp(-I * gb * x[0]) * psi_gl(lv, x[0], x_last);
    };
    return integrate_decaying(f, p, tol, opt);
}

Complex stade_kernel(std::span<const double> xt, std::span<const double> xb, const std::pair<Complex, Complex>& lp) {
    if (xt.size() < 2) throw InvalidArgument("stade_kernel: l >= 1");
    const size_t l = xt.size() - 1;
    if (xb.size() + 1 != l) throw InvalidArgument("stade_kernel: bottom row must have l - 1 entries");
    auto [a, b] = lp;
    double s = 0;
    for (double v : xt) s += v;
    for (double v : xb) s -= v;
    // each factor is int_0^inf t^{nu-1} e^{-y(t+1/t)/2} dt = 2 K_nu(y); no further prefactor
    Complex out = std::exp(I * (a + b) / 2.0 * s);
    Complex nu = I * (a - b);
    for (size_t i = 0; i < l; ++i) {
        double left = std::exp(xt[i]) + (i >= 1 ? std::exp(xb[i - 1]) : 0.0);
        double right = std::exp(-xt[i + 1]) + (i < l - 1 ? std::exp(-xb[i]) : 0.0);
        out *= 2.0 * macdonald_k(nu, 2.0 * std::sqrt(left * right));
    }
    return out;
}

QuadratureResult double_step_kernel(std::span<const double> xt, std::span<const double> xb,
                                    const std::pair<Complex, Complex>& lp, double tol, const QuadOptions& opt) {
    if (xt.size() < 2) throw InvalidArgument("double_step_kernel: l >= 1");
    const size_t l = xt.size() - 1;
    if (l > 2) throw RankError("double_step_kernel: l <= 2");
    if (xb.size() + 1 != l) throw InvalidArgument("double_step_kernel: bottom row must have l - 1 entries");
    const double L = margin(tol * 1e-3);
    std::vector<double> top(xt.begin(), xt.end()), bot(xb.begin(), xb.end());
    std::vector<Interval> box(l);
    for (size_t k = 0; k < l; ++k) {
        double lo = std::min(xt[k], xt[k + 1]), hi = std::max(xt[k], xt[k + 1]);
        if (k >= 1) lo = std::min(lo, xb[k - 1]), hi = std::max(hi, xb[k - 1]);
        if (k < l - 1) lo = std::min(lo, xb[k]), hi = std::max(hi, xb[k]);
        box[k] = {lo - L, hi + L};
    }
    Complex up = lp.second, down = lp.first;
    Integrand f = [top, bot, up, down](std::span<const double> mid) {
        return exp_clamped(givental_step_log(top, mid, up) + givental_step_log(mid, bot, down));
    };
    auto q = integrate_box(f, box, 0.9 * tol, opt);
    q.abs_error += 0.1 * tol;
    q.converged = q.converged && q.abs_error <= tol;
    return q;
}

IdentityCheck barnes_gustafson(const std::pair<Complex, Complex>& l2, const std::pair<Complex, Complex>& g2, double tol,
                               std::optional<double> offset, const QuadOptions& opt) {
    Complex l[2] = {l2.first, l2.second}, g[2] = {g2.first, g2.second};
    double gmax = std::max(g[0].imag(), g[1].imag()), lmin = std::min(l[0].imag(), l[1].imag());
    double c = offset ? *offset : 0.5 * (gmax + lmin);
    if (!(gmax < c && c < lmin))
        throw ContourError("barnes_gustafson: the line must pass above every gamma and below every lambda");
    std::vector<Complex> num;
    for (auto gj : g)
        for (auto li : l) num.push_back(I * gj - I * li);
    IdentityCheck out;
    out.rhs = gamma_product(num) / std::exp(log_gamma(I * (g[0] + g[1]) - I * (l[0] + l[1])));
    ContourSpec cs;
    cs.offsets = {{c}};
    cs.centers = {{0.25 * (l[0] + l[1] + g[0] + g[1]).real()}};
    ContourIntegrand f = [l, g](std::span<const Complex> u) {
        Complex e = log_gamma(I * u[0] - I * l[0]) + log_gamma(I * u[0] - I * l[1]) + log_gamma(I * g[0] - I * u[0]) +
                    log_gamma(I * g[1] - I * u[0]);
        return exp_clamped(e) / (2 * kPi);
    };
    auto q = integrate_contour(f, cs, 4, tol, opt);
    out.lhs = q.value;
    out.residual = std::abs(out.lhs - out.rhs);
    out.abs_error = q.abs_error;
    return out;
}

double barnes_gustafson_check(const std::pair<Complex, Complex>& l2, const std::pair<Complex, Complex>& g2, double tol,
                              std::optional<double> offset, const QuadOptions& opt) {
    return barnes_gustafson(l2, g2, tol, offset, opt).residual;
}

}  // namespace tw
