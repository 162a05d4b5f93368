// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tw/gl_baxter.hpp"
#include "tw/gl_whittaker.hpp"
#include "tw/local_lfactors.hpp"
#include "tw/numerics.hpp"
#include "tw/rankin_selberg.hpp"
#include "tw/so_toda.hpp"

using namespace tw;

namespace {

const Complex I(0, 1);

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

// stricter of absolute and relative error
double err(Complex a, Complex b) { return std::abs(a - b) / std::min(1.0, std::abs(b)); }
double relerr(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

SpectralParams sp(std::vector<Complex> v) { return SpectralParams{v, Convention::Givental}; }

Outcome c1() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        double l1 = 2 * u(rng), l2 = 2 * u(rng), x1 = u(rng), x2 = u(rng);
        Complex want = closed_form_gl2(l1, l2, x1, x2);
        std::vector<double> x{x1, x2};
        auto r = givental_eval(sp({l1, l2}), x, 1e-12 * std::abs(want));
        worst = std::max(worst, relerr(r.value, want));
    }
    return {worst < 1e-8, "max relative error " + fmt("%.2e", worst) + " over 20 draws (bound 1e-8)"};
}

Outcome c2() {
    const double tol = 1e-6;
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    int cases = 0;
    for (size_t n : {2u, 3u}) {
        std::vector<std::vector<Step>> words;
        if (n == 2)
            words = {{Step::L}, {Step::R}};
        else
            words = {{Step::L, Step::L}, {Step::L, Step::R}, {Step::R, Step::L}, {Step::R, Step::R}};
        for (int k = 0; k < 5; ++k) {
            std::vector<Complex> lam;
            std::vector<double> x;
            for (size_t i = 0; i < n; ++i) {
                lam.emplace_back(u(rng));
                x.push_back(0.8 * u(rng));
            }
            auto s = sp(lam);
            std::vector<Complex> vals{givental_eval(s, x, tol).value, mellin_barnes_eval(s, x, std::nullopt, tol).value};
            for (auto& w : words) vals.push_back(mixed_eval(w, s, x, std::nullopt, tol).value);
            for (auto a : vals)
                for (auto b : vals) worst = std::max(worst, std::abs(a - b));
            ++cases;
        }
    }
    return {worst < 5 * tol, "max pairwise spread " + fmt("%.2e", worst) + " over " + std::to_string(cases) +
                                 " points, Givental/MB/all words (bound 5e-6)"};
}

Outcome c3() {
    Outcome o;
    double spread_max = 0, rel_max = 0;
    auto run = [&](Complex g, std::vector<Complex> lam, const BaxterConvention& conv, const Evaluator& psi,
                   double tol) {
        std::vector<std::vector<double>> ys;
        const size_t n = lam.size();
        std::vector<double> base{0.0, 0.4, -0.5, 0.9, -0.2};
        for (int k = 0; k < 5; ++k) {
            std::vector<double> y(n);
            for (size_t i = 0; i < n; ++i) y[i] = base[(k + 2 * i) % 5] - 0.3 * double(i);
            ys.push_back(y);
        }
        // oracle per convention; IwasawaPi is the Archimedean L-factor
        std::vector<Complex> args, al;
        auto rho = rho_vector(n);
        for (size_t j = 0; j < n; ++j) {
            args.push_back(conv.tag == BaxterTag::Lie ? I * g - I * lam[j] : (I * g - I * lam[j]) / 2.0);
            al.push_back(I * lam[j] - rho[j]);
        }
        Complex e = conv.tag == BaxterTag::IwasawaPi ? archimedean_lfactor(al, I * g) : gamma_product(args);
        std::vector<Complex> rat;
        // psi can be exponentially small, so the quadrature tolerance follows |e psi(y)|
        for (auto& y : ys) {
            Complex p = psi(y);
            rat.push_back(baxter_apply(g, psi, lam, y, conv, tol * std::abs(e * p)).value / p);
        }
        for (auto a : rat) {
            rel_max = std::max(rel_max, relerr(a, e));
            for (auto b : rat) spread_max = std::max(spread_max, std::abs(a - b));
        }
    };
    Complex l = 0.3;
    run(l - 0.7 * I, {l}, BaxterConvention::lie(), [l](std::span<const double> x) { return std::exp(I * l * x[0]); },
        1e-8);
    std::vector<Complex> l2{1.0, -1.0};
    run(-0.5 * I, l2, BaxterConvention::lie(),
        [l2](std::span<const double> x) { return closed_form_gl2(l2[0], l2[1], x[0], x[1]); }, 1e-8);
    for (auto conv : {BaxterConvention::iwasawa(), BaxterConvention::iwasawa_pi(1)}) {
        std::vector<Complex> s{0.4};
        run(Complex(0.1, -1.4), s, conv, [s, conv](std::span<const double> x) { return baxter_eigenfunction(s, x, conv); },
            1e-8);
    }
    for (auto conv : {BaxterConvention::iwasawa(), BaxterConvention::iwasawa_pi(2)}) {
        std::vector<Complex> s{0.6, Complex(-0.3, 0.05)};
        run(Complex(0.1, -1.6), s, conv, [s, conv](std::span<const double> x) { return baxter_eigenfunction(s, x, conv); },
            1e-8);
    }
    o.pass = spread_max < 1e-5 && rel_max < 1e-5;
    o.detail = "y-spread " + fmt("%.2e", spread_max) + ", relative eigenvalue error " + fmt("%.2e", rel_max) +
               " (Lie gl1/gl2, Iwasawa, IwasawaPi L-factor; bounds 1e-5)";
    return o;
}

Outcome c4() {
    double worst = 0;
    std::vector<double> y1{0}, z1{0.3}, y2{0, 0}, z2{0.2, -0.2};
    worst = std::max(worst, commutation_residual(-0.5 * I, -1.2 * I, y1, z1, 1e-8));
    worst = std::max(worst, commutation_residual(-0.6 * I, -1.1 * I, y2, z2, 1e-8));
    worst = std::max(worst, commutation_residual(Complex(0.3, -0.7), Complex(-0.2, -1.0), y2, z2, 1e-8));
    std::vector<double> y{0.1, -0.3};
    auto c = intertwining_check_gl2(Complex(0.2, -0.8), 0.4, y, 0.05, 1e-9);
    std::vector<double> yb{-0.4, 0.2};
    auto d = intertwining_check_gl2(Complex(-0.1, -1.1), -0.3, yb, 0.3, 1e-9);
    double iw = std::max(c.residual, d.residual);
    return {worst < 1e-5 && iw < 1e-5,
            "commutation residual " + fmt("%.2e", worst) + ", intertwining residual " + fmt("%.2e", iw) + " (bound 1e-5)"};
}

Outcome c5() {
    std::vector<Complex> g{0.2};
    double x = 0.3, z = 0.5;
    auto F = [x](std::span<const Complex> b) { return std::exp(-I * b[0] * x); };
    auto r = dual_baxter_apply(z, F, g, std::nullopt, 1e-11);
    double e1 = relerr(r.value, std::exp(-std::exp(x - z)) * std::exp(-I * g[0] * x));
    std::vector<double> x2{0.2, -0.1};
    auto F2 = [&](std::span<const Complex> b) { return closed_form_gl2(-b[0], -b[1], x2[0], x2[1]); };
    std::vector<Complex> g2{0.5, -0.3};
    double zz = 0.3;
    auto r2 = dual_baxter_apply(zz, F2, g2, std::nullopt, 1e-7);
    double e2 = relerr(r2.value, std::exp(-std::exp(x2[1] - zz)) * closed_form_gl2(-g2[0], -g2[1], x2[0], x2[1]));
    return {e1 < 1e-8 && e2 < 1e-4,
            "gl1 relative " + fmt("%.2e", e1) + " (bound 1e-8), gl2 relative " + fmt("%.2e", e2) + " (bound 1e-4)"};
}

Outcome c6() {
    double e0 = 0;
    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> u(-1, 1);
    e0 = std::max(e0, err(bump_friedberg_integral(0, sp({0.0}), sp({0.0}), -0.7 * I, 1e-11).value, std::tgamma(0.7)));
    for (int k = 0; k < 5; ++k) {
        auto g = sp({u(rng)}), l = sp({u(rng)});
        Complex t(0.3 * u(rng), -0.8);
        e0 = std::max(e0, err(bump_friedberg_integral(0, g, l, t, 1e-11).value, bump_friedberg_rhs(g, l, t)));
    }
    double e1 = 0;
    {
        auto g = sp({0.4, -0.4}), l = sp({0.2, -0.2});
        e1 = err(bump_friedberg_integral(1, g, l, -0.8 * I, 1e-7).value, bump_friedberg_rhs(g, l, -0.8 * I));
        auto g2 = sp({0.1, 0.5}), l2 = sp({-0.3, 0.2});
        e1 = std::max(e1, err(bump_friedberg_integral(1, g2, l2, Complex(0.1, -0.9), 1e-7).value,
                              bump_friedberg_rhs(g2, l2, Complex(0.1, -0.9))));
    }
    // reduced correlation: value, modulus constancy and phase slope
    double ec = 0;
    auto gb = sp({Complex(0.2, -0.6)}), lt = sp({0.5, -0.3});
    Complex t(0.1, 0.3);
    std::vector<Complex> v;
    std::vector<double> xs{-0.5, 0.0, 0.7};
    for (double x : xs) {
        v.push_back(bump_inner_correlation(1, gb, lt, t, x, 1e-9).value);
        ec = std::max(ec, err(v.back(), bump_inner_correlation_predicted(gb, lt, t, x)));
    }
    for (auto a : v) ec = std::max(ec, std::abs(std::abs(a) - std::abs(v[1])));
    double slope = std::arg(v[2] / v[0]) / 1.2;
    ec = std::max(ec, std::abs(slope - 0.2));
    return {e0 < 1e-8 && e1 < 1e-4 && ec < 1e-4,
            "l=0 error " + fmt("%.2e", e0) + " (bound 1e-8), l=1 error " + fmt("%.2e", e1) +
                " (bound 1e-4), reduced correlation modulus/phase " + fmt("%.2e", ec) + " (bound 1e-4)"};
}

Outcome c7() {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    std::vector<double> none;
    for (int k = 0; k < 5; ++k) {
        std::pair<Complex, Complex> lp{u(rng), u(rng)};
        std::vector<double> t1{u(rng), u(rng)};
        worst = std::max(worst, err(double_step_kernel(t1, none, lp, 1e-9).value, stade_kernel(t1, none, lp)));
        std::vector<double> t2{u(rng), u(rng), u(rng)}, b2{u(rng)};
        worst = std::max(worst, err(double_step_kernel(t2, b2, lp, 1e-9).value, stade_kernel(t2, b2, lp)));
    }
    return {worst < 1e-5, "max error " + fmt("%.2e", worst) +
                              " at l=1,2 over 5 draws (bound 1e-5); kernel normalized as a product of 2K factors"};
}

Outcome c8() {
    std::mt19937_64 rng(108);
    std::uniform_real_distribution<double> u(-1, 1), h(0.2, 1.0);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
        std::pair<Complex, Complex> l{Complex(u(rng), h(rng)), Complex(u(rng), h(rng))};
        std::pair<Complex, Complex> g{Complex(u(rng), -h(rng)), Complex(u(rng), -h(rng))};
        worst = std::max(worst, barnes_gustafson_check(l, g, 1e-10));
    }
    return {worst < 1e-8, "max residual " + fmt("%.2e", worst) + " over 10 draws (bound 1e-8)"};
}

Outcome c9() {
    // closed form against the Givental integral
    double ec = 0;
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 5; ++k) {
        Complex l = u(rng);
        std::vector<double> x{u(rng)};
        std::vector<Complex> lv{l};
        ec = std::max(ec, err(so_givental_eval(lv, x, 1e-11).value, closed_form_so3(l, x[0])));
    }
    Complex g = -0.8 * I, l = 0.5;
    std::vector<Complex> lv{l};
    std::vector<double> y{0.2};
    Complex ratio = so_baxter_apply(g, lv, y, 1e-7).value / closed_form_so3(l, y[0]);
    std::vector<Complex> stated{I * l - I * g, -I * l - I * g};
    Complex want = gamma_product(stated);
    double e = relerr(ratio, want);
    Complex with_g2 = so_baxter_eigenvalue(g, lv) * std::exp(log_gamma(2.0 * I * g));
    return {ec < 1e-8 && e < 1e-4,
            "closed form error " + fmt("%.2e", ec) + " (bound 1e-8); ratio " + fmt("%.10f", ratio.real()) +
                " vs Gamma(i l - i g)Gamma(-i l - i g) = " + fmt("%.10f", want.real()) + ", relative " +
                fmt("%.2e", e) + " (bound 1e-4); the kernel as defined gives Gamma(2ig)Gamma(ig-il)Gamma(ig+il) = " +
                fmt("%.10f", with_g2.real())};
}

Outcome c10() {
    double worst = 0, order_lo = 1e300, order_hi = 0;
    auto check = [&](const std::function<Complex(double)>& a, Complex want) {
        worst = std::max(worst, std::abs(richardson(a, 1e-2) - want));
        double e1 = std::abs(a(2e-2) - want), e2 = std::abs(a(1e-2) - want);
        double q = e1 / e2;
        order_lo = std::min(order_lo, q);
        order_hi = std::max(order_hi, q);
    };
    Complex l = 0.6;
    Evaluator e1 = [l](std::span<const double> x) { return std::exp(I * l * x[0]); };
    std::vector<double> x1{0.4};
    check([&](double h) { return toda_apply(Hamiltonian::H1, e1, x1, h); }, l * e1(x1));
    check([&](double h) { return toda_apply(Hamiltonian::H2tilde, e1, x1, h); }, 0.5 * l * l * e1(x1));
    Complex a = 0.7, b = -0.2;
    Evaluator e2 = [a, b](std::span<const double> x) { return closed_form_gl2(a, b, x[0], x[1]); };
    std::vector<double> x2{0.2, -0.3};
    check([&](double h) { return toda_apply(Hamiltonian::H1, e2, x2, h); }, (a + b) * e2(x2));
    check([&](double h) { return toda_apply(Hamiltonian::H2tilde, e2, x2, h); }, 0.5 * (a * a + b * b) * e2(x2));
    Complex ls = 0.5;
    Evaluator e3 = [ls](std::span<const double> x) { return closed_form_so3(ls, x[0]); };
    std::vector<double> x3{0.0};
    check([&](double h) { return so_toda_apply_h2(e3, x3, h); }, 0.5 * ls * ls * e3(x3));
    bool second_order = order_lo > 3.5 && order_hi < 4.5;
    return {worst < 1e-7 && second_order, "Richardson residual " + fmt("%.2e", worst) +
                                              " (bound 1e-7); step-halving error ratios in [" + fmt("%.3f", order_lo) +
                                              ", " + fmt("%.3f", order_hi) + "]"};
}

Outcome c11() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(111);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    int ok = 0, series_ok = 0;
    for (int k = 0; k < 50; ++k) {
        size_t n = 1 + k % 5;
        SatakeClass s;
        s.p = 3;
        while (s.params.size() < n) {
            long a = num(rng);
            if (a != 0) s.params.emplace_back(Rational(a, den(rng)));
        }
        size_t N = 2 * n + 4;
        ok += verify_tq_identity(s, N);
        // 1 - T Q_N = -(degree > N part of T Q_N), and L T = 1, so (L - Q_N) T equals that tail exactly
        Rational t = Rational(1, 27);  // p^{-s} at s = 3
        auto q = hecke_q_series(s, N);
        auto T = hecke_t_series(s, N);
        std::vector<Rational> prod(N + n + 1);
        for (size_t i = 0; i <= n; ++i)
            for (size_t j = 0; j <= N; ++j) prod[i + j] += T.coeffs[i] * q.coeffs[j];
        Rational tail = 0, tp = 1;
        for (size_t i = 0; i < prod.size(); ++i) {
            if (i > N) tail += prod[i] * tp;
            tp *= t;
        }
        Rational rem = (local_lfactor_p(s, 3) - q.eval(t)) * T.eval(t);
        series_ok += (rem == -tail);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {ok == 50 && series_ok == 50 && secs < 5.0,
            std::to_string(ok) + "/50 exact T*Q = 1, " + std::to_string(series_ok) +
                "/50 exact L-factor tails, " + fmt("%.2f", secs) + " s (bound 5 s)"};
}

Outcome c12() {
    double worst = 0;
    struct Draw {
        Complex g1, g2, lam;
    };
    for (auto d : {Draw{0.8, -0.8, -1.5 * I}, Draw{0.3, 0.5, Complex(0.2, -1.8)}, Draw{-0.4, 0.1, Complex(-0.3, -1.6)}})
        worst = std::max(worst, spherical_transform_check_rank2(d.g1, d.g2, d.lam, 1e-6));
    return {worst < 1e-4, "max residual " + fmt("%.2e", worst) +
                              " at 3 draws (bound 1e-4); universal-Baxter reduction covered by criterion 3 IwasawaPi"};
}

}  // namespace

int main() {
    std::vector<std::pair<const char*, std::function<Outcome()>>> crit{
        {"gl2 closed form", c1},
        {"representation duality", c2},
        {"Baxter eigenvalue", c3},
        {"Q commutativity and intertwining", c4},
        {"dual Baxter eigenvalue", c5},
        {"Bump-Friedberg", c6},
        {"Stade vs double Givental", c7},
        {"Barnes/Gustafson", c8},
        {"so3 Baxter eigenvalue", c9},
        {"Toda eigenfunctions", c10},
        {"p-adic T Q = 1", c11},
        {"rank-2 spherical transform", c12},
    };
    int failed = 0;
    for (size_t i = 0; i < crit.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = crit[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, crit[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d/%zu criteria passed\n", int(crit.size()) - failed, crit.size());
    return failed ? 1 : 0;
}
