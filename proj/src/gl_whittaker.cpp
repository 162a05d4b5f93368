#include "tw/gl_whittaker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tw/numerics.hpp"

namespace tw {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);

struct Frame {
    std::vector<Complex> lambda;
    std::vector<double> x;
};

Frame givental_frame(const SpectralParams& sp, std::span<const double> x) {
    if (sp.size() == 0) throw InvalidArgument("spectral parameters must be non-empty");
    if (sp.size() != x.size()) throw InvalidArgument("spectral parameters and point differ in length");
    Frame f{sp.values, std::vector<double>(x.begin(), x.end())};
    if (sp.convention == Convention::Iwasawa) {
        for (auto& l : f.lambda) l *= 0.5;
        for (auto& v : f.x) v *= 2.0;
    }
    return f;
}

// half-width beyond which e^{-e^u} tails are negligible against eps
double margin(double eps) {
    double V = std::max(1.0, std::log(1.0 / eps));
    for (int it = 0; it < 30; ++it) V = std::max(1.0, std::log(1.0 / (eps * V)));
    return std::log(V) + 1.0;
}

// box for the row directly below `top`
std::vector<Interval> row_box(std::span<const double> top, double L) {
    std::vector<Interval> b(top.size() - 1);
    for (size_t i = 0; i + 1 < top.size(); ++i)
        b[i] = {std::min(top[i], top[i + 1]) - L, std::max(top[i], top[i + 1]) + L};
    return b;
}

std::vector<Interval> row_box(std::span<const Interval> top, double L) {
    std::vector<Interval> b(top.size() - 1);
    for (size_t i = 0; i + 1 < top.size(); ++i)
        b[i] = {std::min(top[i].lo, top[i + 1].lo) - L, std::max(top[i].hi, top[i + 1].hi) + L};
    return b;
}

Complex sum(std::span<const Complex> v) { return std::accumulate(v.begin(), v.end(), Complex(0.0)); }

double mean_re(std::span<const Complex> v) {
    double s = 0;
    for (auto z : v) s += z.real();
    return s / double(v.size());
}

void check_finite(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidArgument("non-finite coordinate");
}

}  // namespace

void TriangularPattern::validate() const {
    for (size_t k = 0; k < rows.size(); ++k)
        if (rows[k].size() != k + 1) throw InvalidArgument("pattern row " + std::to_string(k + 1) + " has wrong length");
}

Complex givental_exponent(std::span<const Complex> lambda, const TriangularPattern& p) {
    p.validate();
    const size_t n = p.rows.size();
    if (lambda.size() != n) throw InvalidArgument("givental_exponent: size mismatch");
    Complex F = 0.0;
    double prev = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double s = std::accumulate(p.rows[k].begin(), p.rows[k].end(), 0.0);
        F += I * lambda[k] * (s - prev);
        prev = s;
    }
    for (size_t k = 0; k + 1 < n; ++k)
        for (size_t i = 0; i <= k; ++i)
            F -= std::exp(p.rows[k + 1][i] - p.rows[k][i]) + std::exp(p.rows[k][i] - p.rows[k + 1][i + 1]);
    return F;
}

Complex givental_step_log(std::span<const double> x_top, std::span<const double> x_bot, Complex lambda_new) {
    if (x_top.size() != x_bot.size() + 1) throw InvalidArgument("step kernel: lengths must differ by one");
    double st = 0, sb = 0, damp = 0;
    for (double v : x_top) st += v;
    for (size_t i = 0; i < x_bot.size(); ++i) {
        sb += x_bot[i];
        damp += std::exp(x_top[i] - x_bot[i]) + std::exp(x_bot[i] - x_top[i + 1]);
    }
    return I * lambda_new * (st - sb) - damp;
}

Complex givental_step_kernel(std::span<const double> x_top, std::span<const double> x_bot, Complex lambda_new) {
    return exp_clamped(givental_step_log(x_top, x_bot, lambda_new));
}

QuadratureResult givental_eval(const SpectralParams& sp, std::span<const double> x0, double tol,
                               const QuadOptions& opt) {
    Frame f = givental_frame(sp, x0);
    check_finite(f.x);
    const size_t n = f.lambda.size();
    if (n > 3) throw RankError("givental_eval: direct evaluation is capped at gl_3");
    if (n == 1) {
        QuadratureResult r;
        r.value = std::exp(I * f.lambda[0] * f.x[0]);
        r.converged = true;
        r.evaluations = 1;
        return r;
    }
    const double L = margin(tol * 1e-3);
    // rows l, l-1, ..., 1 flattened in that order
    std::vector<Interval> box;
    std::vector<std::vector<Interval>> rows(n);
    rows[n - 1].resize(n);
    for (size_t i = 0; i < n; ++i) rows[n - 1][i] = {f.x[i], f.x[i]};
    for (size_t k = n - 1; k >= 1; --k) {
        rows[k - 1] = row_box(std::span<const Interval>(rows[k]), L);
        box.insert(box.end(), rows[k - 1].begin(), rows[k - 1].end());
    }
    std::vector<Complex> lam = f.lambda;
    std::vector<double> top = f.x;
    Integrand g = [n, lam, top](std::span<const double> u) {
        // u: row n-1 (n-1 vars), then row n-2, ...
        double r2[2], r1[1];
        Complex F = 0.0;
        double stop = 0;
        for (double v : top) stop += v;
        if (n == 2) {
            r1[0] = u[0];
            F = I * lam[1] * (stop - r1[0]) + I * lam[0] * r1[0] - std::exp(top[0] - r1[0]) -
                std::exp(r1[0] - top[1]);
        } else {
            r2[0] = u[0];
            r2[1] = u[1];
            r1[0] = u[2];
            double s2 = r2[0] + r2[1];
            F = I * lam[2] * (stop - s2) + I * lam[1] * (s2 - r1[0]) + I * lam[0] * r1[0];
            for (int i = 0; i < 2; ++i) F -= std::exp(top[i] - r2[i]) + std::exp(r2[i] - top[i + 1]);
            F -= std::exp(r2[0] - r1[0]) + std::exp(r1[0] - r2[1]);
        }
        return exp_clamped(F);
    };
    QuadratureResult r = integrate_box(g, box, 0.9 * tol, opt);
    r.abs_error += 0.1 * tol;
    r.converged = r.converged && r.abs_error <= tol;
    return r;
}

QuadratureResult givental_recursive_eval(const SpectralParams& sp, std::span<const double> x, double tol,
                                         const QuadOptions& opt) {
    if (sp.size() > 3) throw RankError("givental_recursive_eval: capped at gl_3");
    std::vector<Step> word(sp.size() - 1, Step::L);
    return mixed_eval(word, sp, x, std::nullopt, tol, opt);
}

ContourSpec default_contour(const SpectralParams& sp) {
    const size_t n = sp.size();
    std::vector<Complex> lam = sp.values;
    if (sp.convention == Convention::Iwasawa)
        for (auto& l : lam) l *= 0.5;
    double mn = 1e300;
    for (auto l : lam) mn = std::min(mn, -l.imag());
    ContourSpec c;
    for (size_t k = 1; k < n; ++k) c.offsets.push_back(std::vector<double>(k, mn - double(n - k) * 0.5));
    return c;
}

Complex mb_step_kernel(std::span<const Complex> gamma_top, std::span<const Complex> gamma_bot, double x_new) {
    if (gamma_top.size() != gamma_bot.size() + 1) throw InvalidArgument("mb_step_kernel: lengths must differ by one");
    std::vector<Complex> args;
    for (auto b : gamma_bot)
        for (auto t : gamma_top) args.push_back(I * b - I * t);
    Complex lg = args.empty() ? Complex(0.0) : log_gamma_product(args);
    return std::exp(-I * (sum(gamma_top) - sum(gamma_bot)) * x_new + lg);
}

bool log_measure(std::span<const Complex> g, Complex& out) {
    const size_t n = g.size();
    double fact = 1;
    for (size_t k = 2; k <= n; ++k) fact *= double(k);
    out = -double(n) * std::log(2 * kPi) - std::log(fact);
    for (size_t s = 0; s < n; ++s)
        for (size_t p = s + 1; p < n; ++p) {
            Complex w;
            if (!log_rgamma_pair(I * g[s] - I * g[p], w)) return false;
            out += w;
        }
    return true;
}

Complex plancherel_measure(const SpectralParams& sp) {
    std::vector<Complex> lam = sp.values;
    if (lam.empty()) throw InvalidArgument("plancherel_measure: empty parameters");
    if (sp.convention == Convention::Iwasawa)
        for (auto& l : lam) l *= 0.5;
    for (size_t j = 0; j < lam.size(); ++j)
        for (size_t k = j + 1; k < lam.size(); ++k)
            if (std::abs(lam[j] - lam[k]) < 1e-12)
                throw PoleError("plancherel_measure: coinciding parameters give Gamma(0)", long(k));
    Complex lm;
    if (!log_measure(lam, lm)) return 0.0;
    return std::exp(lm);
}

namespace {

// log integrand of the direct Mellin-Barnes formula, gamma rows 1..l followed by the top row
bool mb_log_integrand(const std::vector<std::vector<Complex>>& rows, std::span<const double> x, Complex& out) {
    const size_t n = rows.size();  // l+1
    Complex acc = 0.0;
    for (size_t r = 0; r + 1 < n; ++r) {
        Complex lm;
        if (!log_measure(rows[r], lm)) return false;
        acc += lm;
        for (auto b : rows[r])
            for (auto t : rows[r + 1]) acc += log_gamma(I * b - I * t);
    }
    Complex prev = 0.0;
    for (size_t r = 0; r < n; ++r) {
        Complex s = sum(rows[r]);
        acc += -I * (s - prev) * x[r];
        prev = s;
    }
    out = acc;
    return true;
}

void check_below(std::span<const double> offs, std::span<const Complex> above, const char* what) {
    double mx = *std::max_element(offs.begin(), offs.end());
    for (auto a : above)
        if (!(mx < a.imag())) throw ContourError(std::string(what) + ": contour offsets must lie below the row above");
}

struct MixedCtx {
    std::vector<Step> word;
    ContourSpec contour;
    size_t ell;
    QuadOptions opt;
};

// MB-convention function of level m: gamma has m entries, x has m entries
ValueAux phi(const MixedCtx& c, size_t m, std::span<const Complex> gamma, std::span<const double> x, double tol,
             bool outer, long& evals) {
    if (m == 1) return {std::exp(-I * gamma[0] * x[0]), 0.0};
    Step s = c.word[c.ell + 1 - m];
    QuadOptions o = c.opt;
    if (!outer) o.workers = 1;
    const double inner_tol = tol / 20.0;
    QuadratureResult r;
    if (s == Step::L) {
        const double L = margin(tol * 1e-3);
        auto box = row_box(x, L);
        std::vector<double> top(x.begin(), x.end());
        std::vector<Complex> g(gamma.begin(), gamma.end());
        Complex lam_new = -g[m - 1];
        IntegrandAux f = [&, top, g, lam_new](std::span<const double> y) {
            Complex k = givental_step_kernel(top, y, lam_new);
            if (k == Complex(0.0)) return ValueAux{0.0, 0.0};
            long e = 0;
            ValueAux in = phi(c, m - 1, std::span<const Complex>(g.data(), m - 1), y, inner_tol, false, e);
            return ValueAux{k * in.value, std::abs(k) * in.aux};
        };
        r = integrate_box_aux(f, box, tol, o);
    } else {
        const auto& offs = c.contour.offsets[m - 2];
        if (offs.size() != m - 1) throw ContourError("contour row " + std::to_string(m - 1) + " has wrong length");
        check_below(offs, gamma, "mixed_eval");
        ContourSpec cs;
        cs.offsets = {offs};
        cs.centers = {std::vector<double>(m - 1, mean_re(gamma))};
        std::vector<Complex> top(gamma.begin(), gamma.end());
        std::vector<double> xs(x.begin(), x.end());
        double xlast = x[m - 1];
        ContourIntegrandAux f = [&, top, xs, xlast](std::span<const Complex> gb) {
            Complex lm;
            if (!log_measure(gb, lm)) return ValueAux{0.0, 0.0};
            Complex lk = -I * (sum(top) - sum(gb)) * xlast + lm;
            for (auto b : gb)
                for (auto t : top) lk += log_gamma(I * b - I * t);
            Complex k = exp_clamped(lk);
            if (k == Complex(0.0)) return ValueAux{0.0, 0.0};
            long e = 0;
            ValueAux in = phi(c, m - 1, gb, std::span<const double>(xs.data(), m - 1), inner_tol, false, e);
            return ValueAux{k * in.value, std::abs(k) * in.aux};
        };
        r = integrate_contour_aux(f, cs, 2, tol, o);
    }
    evals += r.evaluations;
    return {r.value, r.abs_error};
}

}  // namespace

QuadratureResult mellin_barnes_eval(const SpectralParams& sp, std::span<const double> x0,
                                    const std::optional<ContourSpec>& contour, double tol, const QuadOptions& opt) {
    Frame f = givental_frame(sp, x0);
    check_finite(f.x);
    const size_t n = f.lambda.size();
    if (n > 3) throw RankError("mellin_barnes_eval: capped at gl_3");
    if (n == 1) {
        QuadratureResult r;
        r.value = std::exp(I * f.lambda[0] * f.x[0]);
        r.converged = true;
        r.evaluations = 1;
        return r;
    }
    ContourSpec c = contour ? *contour : default_contour(SpectralParams{f.lambda, Convention::Givental});
    if (c.offsets.size() != n - 1) throw ContourError("mellin_barnes_eval: contour must have l rows");
    for (size_t k = 0; k < n - 1; ++k)
        if (c.offsets[k].size() != k + 1) throw ContourError("mellin_barnes_eval: contour row length mismatch");
    c.check_interlacing();
    std::vector<Complex> top(n);
    for (size_t j = 0; j < n; ++j) top[j] = -f.lambda[j];
    check_below(c.offsets[n - 2], top, "mellin_barnes_eval");
    if (c.centers.empty()) {
        double ctr = mean_re(top);
        for (size_t k = 0; k < n - 1; ++k) c.centers.push_back(std::vector<double>(k + 1, ctr));
    }
    std::vector<double> xs = f.x;
    ContourIntegrand g = [n, top, xs](std::span<const Complex> z) {
        std::vector<std::vector<Complex>> rows(n);
        size_t p = 0;
        for (size_t k = 0; k + 1 < n; ++k)
            for (size_t j = 0; j <= k; ++j) rows[k].push_back(z[p++]);
        rows[n - 1] = top;
        Complex lg;
        if (!mb_log_integrand(rows, xs, lg)) return Complex(0.0);
        return exp_clamped(lg);
    };
    return integrate_contour(g, c, 2, tol, opt);
}

QuadratureResult mixed_eval(std::span<const Step> word, const SpectralParams& sp, std::span<const double> x0,
                            const std::optional<ContourSpec>& contour, double tol, const QuadOptions& opt) {
    Frame f = givental_frame(sp, x0);
    check_finite(f.x);
    const size_t n = f.lambda.size();
    if (n > 3) throw RankError("mixed_eval: capped at gl_3");
    if (word.size() != n - 1) throw InvalidArgument("mixed_eval: word length must equal l");
    MixedCtx c{std::vector<Step>(word.begin(), word.end()), {}, n - 1, opt};
    bool any_r = std::find(word.begin(), word.end(), Step::R) != word.end();
    if (any_r) {
        c.contour = contour ? *contour : default_contour(SpectralParams{f.lambda, Convention::Givental});
        if (c.contour.offsets.size() != n - 1) throw ContourError("mixed_eval: contour must have l rows");
        c.contour.check_interlacing();
    }
    std::vector<Complex> gamma(n);
    for (size_t j = 0; j < n; ++j) gamma[j] = -f.lambda[j];
    QuadratureResult r;
    if (n == 1) {
        r.value = std::exp(I * f.lambda[0] * f.x[0]);
        r.converged = true;
        r.evaluations = 1;
        return r;
    }
    long evals = 0;
    ValueAux v = phi(c, n, gamma, f.x, tol, true, evals);
    r.value = v.value;
    r.abs_error = v.aux;
    r.evaluations = evals;
    r.converged = v.aux <= tol;
    return r;
}

Complex closed_form_gl2(Complex l1, Complex l2, double x1, double x2) {
    Complex nu = I * (l1 - l2);
    return 2.0 * std::exp(I * (l1 + l2) * (x1 + x2) / 2.0) * macdonald_k(nu, 2.0 * std::exp((x1 - x2) / 2.0));
}

Complex toda_apply(Hamiltonian h, const Evaluator& psi, std::span<const double> x, double step) {
    if (!(step > 0)) throw InvalidArgument("toda_apply: step must be positive");
    const size_t n = x.size();
    std::vector<double> p(x.begin(), x.end());
    if (h == Hamiltonian::H1) {
        Complex acc = 0.0;
        for (size_t j = 0; j < n; ++j) {
            p[j] = x[j] + step;
            Complex a = psi(p);
            p[j] = x[j] - step;
            Complex b = psi(p);
            p[j] = x[j];
            acc += (a - b) / (2 * step);
        }
        return -I * acc;
    }
    Complex c = psi(p);
    Complex lap = 0.0;
    for (size_t j = 0; j < n; ++j) {
        p[j] = x[j] + step;
        Complex a = psi(p);
        p[j] = x[j] - step;
        Complex b = psi(p);
        p[j] = x[j];
        lap += (a - 2.0 * c + b) / (step * step);
    }
    double pot = 0;
    for (size_t i = 0; i + 1 < n; ++i) pot += std::exp(x[i] - x[i + 1]);
    return -0.5 * lap + pot * c;
}

Complex toda_generating_apply(Complex mu, const Evaluator& psi, std::span<const double> x, double step) {
    const size_t n = x.size();
    Complex c = psi(x);
    if (n == 1) return mu * c - toda_apply(Hamiltonian::H1, psi, x, step);
    if (n != 2) throw RankError("toda_generating_apply: only n <= 2");
    // H_2 = (H_1^2 - 2 H~_2)/2, with H_1^2 = -(d1 + d2)^2
    std::vector<double> p(x.begin(), x.end()), q(x.begin(), x.end());
    p[0] += step;
    p[1] += step;
    q[0] -= step;
    q[1] -= step;
    Complex dd = (psi(p) - 2.0 * c + psi(q)) / (step * step);
    Complex h2 = 0.5 * (-dd - 2.0 * toda_apply(Hamiltonian::H2tilde, psi, x, step));
    return mu * mu * c - mu * toda_apply(Hamiltonian::H1, psi, x, step) + h2;
}

Complex toda_generating_eigenvalue(Complex mu, std::span<const Complex> lambda) {
    Complex p = 1.0;
    for (auto l : lambda) p *= (mu - l);
    return p;
}

Complex richardson(const std::function<Complex(double)>& a, double step) {
    return (4.0 * a(step / 2) - a(step)) / 3.0;
}

}  // namespace tw
