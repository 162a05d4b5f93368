#include "tw/gl_baxter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "tw/numerics.hpp"

namespace tw {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);
const double kLogPi = std::log(kPi);

// scale of the exponents and log of the coupling
struct KernelShape {
    double a;
    double logc;
};

KernelShape shape(const BaxterConvention& c) {
    switch (c.tag) {
        case BaxterTag::Lie: return {1.0, 0.0};
        case BaxterTag::Iwasawa: return {2.0, 0.0};
        default: return {2.0, kLogPi};
    }
}

// plain gl Whittaker function, closed forms where available
Complex gl_psi(std::span<const Complex> lam, std::span<const double> x, double tol) {
    if (lam.size() == 1) return std::exp(I * lam[0] * x[0]);
    if (lam.size() == 2) return closed_form_gl2(lam[0], lam[1], x[0], x[1]);
    return givental_eval(SpectralParams{std::vector<Complex>(lam.begin(), lam.end())}, x, tol).value;
}

constexpr double kSafety = 1.5;

}  // namespace

std::vector<double> rho_vector(size_t n) {
    std::vector<double> r(n);
    double ell = double(n) - 1.0;
    for (size_t j = 0; j < n; ++j) r[j] = ell / 2.0 + 1.0 - double(j + 1);
    return r;
}

BaxterConvention BaxterConvention::iwasawa_pi(size_t n) { return {BaxterTag::IwasawaPi, rho_vector(n)}; }

void BaxterConvention::validate(size_t n) const {
    if (tag == BaxterTag::IwasawaPi) {
        if (rho_shift.size() != n) throw InvalidArgument("IwasawaPi convention needs rho of matching length");
        double s = 0;
        for (double r : rho_shift) s += r;
        if (std::abs(s) > 1e-12) throw InvalidArgument("rho shift must sum to zero");
    } else if (!rho_shift.empty()) {
        throw InvalidArgument("rho shift only allowed for IwasawaPi");
    }
}

Complex baxter_kernel(std::span<const double> x, std::span<const double> y, Complex lam,
                      const BaxterConvention& conv) {
    const size_t n = x.size();
    if (n == 0 || y.size() != n) throw InvalidArgument("baxter_kernel: x and y must have equal positive length");
    conv.validate(n);
    auto [a, lc] = shape(conv);
    Complex e = 0.0;
    for (size_t j = 0; j < n; ++j) {
        Complex coef = I * lam;
        if (conv.tag == BaxterTag::IwasawaPi) coef += conv.rho_shift[j];
        e += coef * (x[j] - y[j]);
    }
    for (size_t i = 0; i + 1 < n; ++i) e -= std::exp(a * (x[i] - y[i]) + lc) + std::exp(a * (y[i] - x[i + 1]) + lc);
    e -= std::exp(a * (x[n - 1] - y[n - 1]) + lc);
    Complex lead = conv.tag == BaxterTag::Lie ? 0.0 : double(n) * std::log(2.0);
    return exp_clamped(e + lead);
}

double baxter_decay_rate(Complex gamma, std::span<const Complex> s, const BaxterConvention& conv) {
    conv.validate(s.size());
    double r = 1e300;
    for (size_t j = 0; j < s.size(); ++j) {
        Complex w = I * gamma - I * s[j];
        if (conv.tag == BaxterTag::IwasawaPi) w += conv.rho_shift[j];
        r = std::min(r, w.real());
    }
    return r;
}

Complex baxter_eigenvalue(Complex gamma, std::span<const Complex> s, const BaxterConvention& conv) {
    conv.validate(s.size());
    std::vector<Complex> args;
    Complex pre = 0.0;
    for (size_t j = 0; j < s.size(); ++j) {
        Complex w = I * gamma - I * s[j];
        switch (conv.tag) {
            case BaxterTag::Lie: args.push_back(w); break;
            case BaxterTag::Iwasawa: args.push_back(w / 2.0); break;
            case BaxterTag::IwasawaPi:
                w += conv.rho_shift[j];
                args.push_back(w / 2.0);
                pre -= w / 2.0 * kLogPi;
                break;
        }
    }
    return std::exp(pre + log_gamma_product(args));
}

Complex baxter_eigenfunction(std::span<const Complex> s, std::span<const double> x, const BaxterConvention& conv,
                             double tol) {
    const size_t n = s.size();
    if (x.size() != n) throw InvalidArgument("baxter_eigenfunction: size mismatch");
    conv.validate(n);
    std::vector<Complex> lam(s.begin(), s.end());
    std::vector<double> X(x.begin(), x.end());
    if (conv.tag == BaxterTag::Lie) return gl_psi(lam, X, tol);
    double pref = 0.0;
    if (conv.tag == BaxterTag::IwasawaPi) {
        for (size_t j = 0; j < n; ++j) {
            lam[j] += I * conv.rho_shift[j];
            pref += conv.rho_shift[j] * x[j];
            X[j] = 2.0 * x[j] + 2.0 * conv.rho_shift[j] * kLogPi;
        }
    } else {
        for (size_t j = 0; j < n; ++j) X[j] = 2.0 * x[j];
    }
    for (auto& l : lam) l *= 0.5;
    return std::exp(pref) * gl_psi(lam, X, tol);
}

QuadratureResult baxter_apply(Complex gamma, const Evaluator& psi, std::span<const Complex> spectral,
                              std::span<const double> y, const BaxterConvention& conv, double tol, double delta,
                              const QuadOptions& opt) {
    const size_t n = y.size();
    if (n == 0 || n > 3) throw RankError("baxter_apply: 1 <= n <= 3");
    if (spectral.size() != n) throw InvalidArgument("baxter_apply: spectral parameters must match y");
    conv.validate(n);
    double r = baxter_decay_rate(gamma, spectral, conv);
    if (!(r >= delta))
        throw ShiftError("baxter_apply: convergence shift violated (rate " + std::to_string(r) + " < " +
                         std::to_string(delta) + ")");
    auto [a, lc] = shape(conv);
    DecayProfile p;
    for (size_t i = 0; i < n; ++i) {
        DimDecay d;
        if (i + 1 < n) {
            d.center = 0.5 * (y[i] + y[i + 1]);
            d.left = DoubleExponential{a, a * (y[i] - d.center) + lc - kSafety};
            d.right = DoubleExponential{a, a * (d.center - y[i + 1]) + lc - kSafety};
        } else {
            d.center = y[i];
            d.left = DoubleExponential{a, lc - kSafety};
            d.right = Exponential{0.9 * r};
        }
        p.dims.push_back(d);
    }
    std::vector<double> yy(y.begin(), y.end());
    Integrand f = [&psi, yy, gamma, &conv](std::span<const double> x) {
        Complex k = baxter_kernel(yy, x, gamma, conv);
        if (k == Complex(0.0)) return Complex(0.0);
        return k * psi(x);
    };
    return integrate_decaying(f, p, tol, opt);
}

QuadratureResult dual_baxter_apply(double z, const SpectralFunction& F, std::span<const Complex> gamma,
                                   const std::optional<ContourSpec>& contour, double tol, const QuadOptions& opt) {
    const size_t n = gamma.size();
    if (n == 0 || n > 2) throw RankError("dual_baxter_apply: n <= 2");
    double mn = 1e300, ctr = 0;
    for (auto g : gamma) {
        mn = std::min(mn, g.imag());
        ctr += g.real() / double(n);
    }
    ContourSpec c;
    if (contour) {
        c = *contour;
    } else {
        c.offsets = {std::vector<double>(n, mn - 0.5)};
    }
    if (c.offsets.size() != 1 || c.offsets[0].size() != n) throw ContourError("dual_baxter_apply: one row of n offsets");
    for (double o : c.offsets[0])
        if (!(o < mn)) throw ContourError("dual_baxter_apply: contour must pass below every gamma");
    if (c.centers.empty()) c.centers = {std::vector<double>(n, ctr)};
    std::vector<Complex> gm(gamma.begin(), gamma.end());
    Complex sg = 0.0;
    for (auto g : gm) sg += g;
    ContourIntegrand f = [&F, gm, sg, z](std::span<const Complex> b) {
        Complex lm;
        if (!log_measure(b, lm)) return Complex(0.0);
        Complex sb = 0.0;
        for (auto v : b) sb += v;
        Complex e = lm - I * z * (sg - sb);
        for (auto v : b)
            for (auto g : gm) e += log_gamma(I * v - I * g);
        Complex k = exp_clamped(e);
        if (k == Complex(0.0)) return Complex(0.0);
        return k * F(b);
    };
    return integrate_contour(f, c, 1, tol, opt);
}

QuadratureResult baxter_compose(Complex a, Complex b, std::span<const double> y, std::span<const double> z,
                                double tol, const QuadOptions& opt) {
    const size_t n = y.size();
    if (n == 0 || n > 3 || z.size() != n) throw InvalidArgument("baxter_compose: bad sizes");
    DecayProfile p;
    for (size_t i = 0; i < n; ++i) {
        DimDecay d;
        d.center = 0.5 * (y[i] + z[i]);
        d.left = DoubleExponential{1.0, y[i] - d.center - kSafety};
        d.right = DoubleExponential{1.0, d.center - z[i] - kSafety};
        p.dims.push_back(d);
    }
    std::vector<double> yy(y.begin(), y.end()), zz(z.begin(), z.end());
    auto lie = BaxterConvention::lie();
    Integrand f = [yy, zz, a, b, lie](std::span<const double> x) {
        return baxter_kernel(yy, x, a, lie) * baxter_kernel(x, zz, b, lie);
    };
    return integrate_decaying(f, p, tol, opt);
}

double commutation_residual(Complex lambda, Complex lambda2, std::span<const double> y, std::span<const double> z,
                            double tol, const QuadOptions& opt) {
    auto a = baxter_compose(lambda, lambda2, y, z, tol, opt);
    auto b = baxter_compose(lambda2, lambda, y, z, tol, opt);
    return std::abs(a.value - b.value);
}

IdentityCheck intertwining_check_gl2(Complex gamma, Complex lambda, std::span<const double> y, double w, double tol,
                                     double delta, const QuadOptions& opt) {
    if (y.size() != 2) throw InvalidArgument("intertwining_check_gl2: y must have length 2");
    double r = (I * gamma - I * lambda).real();
    if (!(r >= delta)) throw ShiftError("intertwining_check_gl2: convergence shift violated");
    std::vector<double> yy(y.begin(), y.end()), ww{w};
    auto lie = BaxterConvention::lie();

    DecayProfile pl;
    double c1 = 0.5 * (yy[0] + w);
    pl.dims.push_back(DimDecay{c1, DoubleExponential{1.0, yy[0] - c1 - kSafety},
                               DoubleExponential{1.0, c1 - std::min(w, yy[1]) - kSafety}});
    pl.dims.push_back(DimDecay{yy[1], DoubleExponential{1.0, -kSafety}, Exponential{0.9 * r}});
    Integrand fl = [yy, ww, gamma, lambda, lie](std::span<const double> x) {
        Complex k = baxter_kernel(yy, x, gamma, lie);
        if (k == Complex(0.0)) return Complex(0.0);
        return k * givental_step_kernel(x, ww, lambda);
    };
    auto L = integrate_decaying(fl, pl, tol, opt);

    DecayProfile pr;
    double c2 = 0.5 * (yy[0] + yy[1]);
    pr.dims.push_back(DimDecay{c2, DoubleExponential{1.0, yy[0] - c2 - kSafety},
                               DoubleExponential{1.0, c2 - yy[1] - kSafety}});
    Integrand fr = [yy, w, gamma, lambda, lie](std::span<const double> u) {
        std::vector<double> uu{u[0]}, wv{w};
        return givental_step_kernel(yy, uu, lambda) * baxter_kernel(uu, wv, gamma, lie);
    };
    Complex g = std::exp(log_gamma(I * gamma - I * lambda));
    auto R = integrate_decaying(fr, pr, tol / std::max(1.0, std::abs(g)), opt);
    IdentityCheck out;
    out.lhs = L.value;
    out.rhs = g * R.value;
    out.residual = std::abs(out.lhs - out.rhs);
    out.abs_error = L.abs_error + std::abs(g) * R.abs_error;
    return out;
}

IdentityCheck difference_equation_check_gl1(Complex lambda, const Evaluator& f, double right_rate, double y,
                                            double step, double tol) {
    if (!(right_rate > 0)) throw InvalidArgument("difference_equation_check_gl1: right_rate must be positive");
    auto lie = BaxterConvention::lie();
    auto apply = [&](Complex lam, double yv, double t) {
        std::vector<double> yy{yv};
        DecayProfile p{{DimDecay{yv, DoubleExponential{1.0, -kSafety}, Exponential{right_rate}}}};
        Integrand g = [&, yy, lam](std::span<const double> x) { return baxter_kernel(yy, x, lam, lie) * f(x); };
        return integrate_decaying(g, p, t);
    };
    IdentityCheck out;
    auto L = apply(lambda - I, y, tol);
    out.lhs = L.value;
    // H1 = -i d/dy by Richardson-extrapolated central differences
    const double inner = tol * step * 1e-2;
    auto qf = [&](double yv) { return apply(lambda, yv, inner).value; };
    auto d = [&](double h) { return (qf(y + h) - qf(y - h)) / (2 * h); };
    Complex deriv = (4.0 * d(step / 2) - d(step)) / 3.0;
    Complex q0 = apply(lambda, y, tol).value;
    out.rhs = I * (lambda * q0 + I * deriv);
    out.residual = std::abs(out.lhs - out.rhs);
    out.abs_error = L.abs_error + tol;
    return out;
}

Complex universal_baxter_phi(const RealMatrix& g, Complex lam) {
    const size_t n = g.size();
    if (n == 0) throw InvalidArgument("universal_baxter_phi: empty matrix");
    Eigen::MatrixXd m(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (g[i].size() != n) throw InvalidArgument("universal_baxter_phi: matrix must be square");
        for (size_t j = 0; j < n; ++j) m(i, j) = g[i][j];
    }
    double det = m.determinant();
    double scale = std::max(1e-300, std::pow(m.norm(), double(n)));
    if (std::abs(det) <= 1e-14 * scale) throw SingularMatrixError("universal_baxter_phi: singular matrix");
    double tr = (m.transpose() * m).trace();
    Complex e = double(n) * std::log(2.0) + (I * lam + (double(n) - 1.0) / 2.0) * std::log(std::abs(det)) - kPi * tr;
    return exp_clamped(e);
}

std::vector<double> iwasawa_projection(const RealMatrix& g) {
    const size_t n = g.size();
    Eigen::MatrixXd m(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (g[i].size() != n) throw InvalidArgument("iwasawa_projection: matrix must be square");
        for (size_t j = 0; j < n; ++j) m(n - 1 - i, n - 1 - j) = g[i][j];
    }
    // P g P = Q R  =>  g = (P Q P)(P R P) with P R P lower triangular
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    std::vector<double> h(n);
    for (size_t i = 0; i < n; ++i) {
        double d = std::abs(R(n - 1 - i, n - 1 - i));
        if (d == 0) throw SingularMatrixError("iwasawa_projection: singular matrix");
        h[i] = std::log(d);
    }
    return h;
}

QuadratureResult spherical_function_rank2(Complex g1, Complex g2, double x1, double x2, double tol) {
    // k = rotation by theta, tan theta = e^w, dk = dw / (pi cosh w) over the half-period
    const double e1 = std::exp(x1), e2 = std::exp(x2);
    Integrand f = [=](std::span<const double> w) {
        double t = std::exp(w[0]);
        double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        RealMatrix ak{{e1 * c, -e1 * s}, {e2 * s, e2 * c}};
        auto h = iwasawa_projection(ak);
        return std::exp(I * (h[0] * g1 + h[1] * g2)) / (kPi * std::cosh(w[0]));
    };
    // the integrand tends to M e^{-|w|} 2/pi at either end
    double m = std::max(std::exp(-(x1 * g1 + x2 * g2).imag()), std::exp(-(x2 * g1 + x1 * g2).imag()));
    double R = std::max(1.0, std::log(4.0 * m / (kPi * 0.05 * tol)));
    std::vector<Interval> box{{-R, R}};
    auto q = integrate_box(f, box, 0.9 * tol);
    q.abs_error += 0.1 * tol;
    return q;
}

IdentityCheck spherical_transform_rank2(Complex g1, Complex g2, Complex lam, double tol, const QuadOptions& opt) {
    auto rho = rho_vector(2);
    Complex w1 = I * lam - I * g1 + rho[0], w2 = I * lam - I * g2 + rho[1];
    if (!(w1.real() > 0 && w2.real() > 0)) throw ShiftError("spherical_transform_rank2: divergent parameters");
    // Cartan coordinates x1 and d = x2 - x1 > 0, Haar constant 2 pi
    double r1 = (2.0 * I * lam + 1.0 - I * g1 - I * g2).real();
    double rd = w2.real() - std::abs((g2 - g1).imag());
    if (!(r1 > 0 && rd > 0)) throw ShiftError("spherical_transform_rank2: divergent parameters");
    const double inner_tol = tol / 50.0;
    IntegrandAux f = [=](std::span<const double> u) {
        double x1 = u[0], d = u[1], x2 = x1 + d;
        Complex lp = std::log(4.0) - (I * lam + 0.5) * (x1 + x2) - kPi * (std::exp(-2 * x1) + std::exp(-2 * x2));
        Complex phi = exp_clamped(lp);
        if (phi == Complex(0.0)) return ValueAux{0.0, 0.0};
        double jac = 2 * kPi * std::sinh(d);
        double t_in = std::min(1e-3, inner_tol / (std::abs(phi) * jac + 1e-300));
        auto sf = spherical_function_rank2(g1, g2, x1, x2, t_in);
        return ValueAux{jac * phi * sf.value, jac * std::abs(phi) * sf.abs_error};
    };
    DimDecay dx{0.0, DoubleExponential{2.0, kLogPi - kSafety}, Exponential{0.9 * r1}};
    double eps = tol / 40.0;
    double D = tail_length(Exponential{0.9 * rd}, eps);
    auto box1 = truncation_box(DecayProfile{{dx}}, tol);
    std::vector<Interval> box{box1[0], {0.0, std::max(D, 1.0)}};
    auto q = integrate_box_aux(f, box, 0.8 * tol, opt);
    IdentityCheck out;
    out.lhs = q.value;
    out.rhs = std::exp(-(w1 + w2) / 2.0 * kLogPi + log_gamma(w1 / 2.0) + log_gamma(w2 / 2.0));
    out.residual = std::abs(out.lhs - out.rhs);
    out.abs_error = q.abs_error + 0.2 * tol;
    return out;
}

double spherical_transform_check_rank2(Complex g1, Complex g2, Complex lam, double tol, const QuadOptions& opt) {
    return spherical_transform_rank2(g1, g2, lam, tol, opt).residual;
}

IdentityCheck spherical_gaussian_check(Complex lam, double tol) {
    // 2 pi int_{x1<x2} phi(a^{-1}) sinh(x2-x1) dx versus the Iwasawa evaluation at gamma = 0
    Complex w1 = I * lam + 0.5, w2 = I * lam - 0.5;
    if (!(w2.real() > 0)) throw ShiftError("spherical_gaussian_check: needs Re(i lam) > 1/2");
    Integrand f = [=](std::span<const double> u) {
        double x1 = u[0], d = u[1], x2 = x1 + d;
        Complex lp = std::log(4.0) - (I * lam + 0.5) * (x1 + x2) - kPi * (std::exp(-2 * x1) + std::exp(-2 * x2));
        return 2 * kPi * std::sinh(d) * exp_clamped(lp);
    };
    double r1 = (2.0 * I * lam + 1.0).real();
    DimDecay dx{0.0, DoubleExponential{2.0, kLogPi - kSafety}, Exponential{0.9 * r1}};
    auto box1 = truncation_box(DecayProfile{{dx}}, tol);
    double D = tail_length(Exponential{0.9 * w2.real()}, tol / 40.0);
    std::vector<Interval> box{box1[0], {0.0, D}};
    auto q = integrate_box(f, box, 0.8 * tol);
    // int e^{nu x} e^{-a e^{-2x}} dx = a^{nu/2} Gamma(-nu/2) / 2, with a = pi, nu = -w
    auto gint = [](Complex w) { return 0.5 * std::exp(-w / 2.0 * kLogPi + log_gamma(w / 2.0)); };
    IdentityCheck out;
    out.lhs = q.value;
    out.rhs = 4.0 * gint(w1) * gint(w2);
    out.residual = std::abs(out.lhs - out.rhs);
    out.abs_error = q.abs_error + 0.2 * tol;
    return out;
}

}  // namespace tw
