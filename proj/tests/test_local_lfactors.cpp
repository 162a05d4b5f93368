#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tw/gl_baxter.hpp"
#include "tw/local_lfactors.hpp"

using namespace tw;

namespace {

SatakeClass sat(std::vector<long> v, long p = 5) {
    SatakeClass s;
    for (long a : v) s.params.emplace_back(a);
    s.p = p;
    return s;
}

SatakeClass random_class(std::mt19937_64& rng, size_t n) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    SatakeClass s;
    s.p = 7;
    while (s.params.size() < n) {
        long a = num(rng);
        if (a != 0) s.params.emplace_back(Rational(a, den(rng)));
    }
    return s;
}

// brute-force oracles
Rational e_brute(const SatakeClass& s, size_t j) {
    const size_t n = s.size();
    Rational r = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (size_t(__builtin_popcount(mask)) != j) continue;
        Rational t = 1;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) t *= s.params[i];
        r += t;
    }
    return r;
}

Rational h_brute(const SatakeClass& s, size_t start, long m) {
    if (m == 0) return 1;
    if (start == s.size()) return 0;
    Rational r = 0, pw = 1;
    for (long k = 0; k <= m; ++k) {
        r += pw * h_brute(s, start + 1, m - k);
        pw *= s.params[start];
    }
    return r;
}

std::vector<Rational> full_t_poly(const SatakeClass& s) {
    std::vector<Rational> c{1};
    for (const auto& a : s.params) {
        std::vector<Rational> d(c.size() + 1);
        for (size_t i = 0; i < c.size(); ++i) {
            d[i] += c[i];
            d[i + 1] -= a * c[i];
        }
        c = d;
    }
    return c;
}

}  // namespace

TEST_CASE("symmetric functions") {
    auto s = sat({2, 3});
    CHECK(elementary_symm(s, 1) == 5);
    CHECK(elementary_symm(s, 2) == 6);
    CHECK(elementary_symm(s, 0) == 1);
    CHECK_THROWS_AS(elementary_symm(s, 3), IndexError);
    CHECK_THROWS_AS(elementary_symm(s, -1), IndexError);
    CHECK(complete_symm(s, 2) == 19);
    CHECK(complete_symm(s, 3) == 65);
    CHECK(complete_symm(s, 0) == 1);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        auto c = random_class(rng, 1 + t % 5);
        for (size_t j = 0; j <= c.size(); ++j) CHECK(elementary_symm(c, long(j)) == e_brute(c, j));
        for (long m = 0; m <= 5; ++m) CHECK(complete_symm(c, m) == h_brute(c, 0, m));
        // two-variable closed form
        if (c.size() == 2 && c.params[0] != c.params[1]) {
            const auto& a = c.params[0];
            const auto& b = c.params[1];
            Rational want = 0;
            Rational bp = 1, ap = 1;
            for (int k = 0; k < 5; ++k) bp *= b, ap *= a;
            CHECK(complete_symm(c, 4) == (bp - ap) / (b - a));
        }
    }
}

TEST_CASE("Hecke series") {
    auto t = hecke_t_series(sat({2, 3}), 4);
    CHECK(t.coeffs == std::vector<Rational>{1, -5, 6, 0, 0});
    auto t1 = hecke_t_series(sat({1}), 2);
    CHECK(t1.coeffs == std::vector<Rational>{1, -1, 0});
    CHECK_THROWS_AS(hecke_t_series(sat({2, 3}), 1), InvalidArgument);
    auto q = hecke_q_series(sat({2, 3}), 2);
    CHECK(q.coeffs == std::vector<Rational>{1, 5, 19});
    CHECK(hecke_q_series(sat({1}), 3).coeffs == std::vector<Rational>{1, 1, 1, 1});
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        auto c = random_class(rng, 1 + k % 5);
        auto tt = hecke_t_series(c, 6);
        auto full = full_t_poly(c);
        for (size_t i = 0; i < full.size(); ++i) CHECK(tt.coeffs[i] == full[i]);
        CHECK(tt.coeffs[0] == 1);
        CHECK(hecke_q_series(c, 3).coeffs[1] == elementary_symm(c, 1));
    }
    SatakeClass zero = sat({0});
    CHECK_THROWS_AS(hecke_q_series(zero, 2), InvalidArgument);
    CHECK_THROWS_AS(hecke_q_series(sat({2}, 4), 2), InvalidArgument);
}

TEST_CASE("T Q = 1 exactly") {
    CHECK(verify_tq_identity(sat({2, 3}), 10));
    CHECK(verify_tq_identity(sat({1, 1, 1}), 8));
    CHECK(verify_tq_identity(sat({5}), 1));
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        size_t n = 1 + k % 5;
        auto c = random_class(rng, n);
        size_t N = 2 * n + 4;
        CHECK(verify_tq_identity(c, N));
        auto a = hecke_t_series(c, N), b = hecke_q_series(c, N);
        CHECK(a * b == b * a);
        // one wrong coefficient breaks it
        auto bad = c;
        bad.params[0] += 1;
        if (bad.params[0] != 0) {
            auto p1 = hecke_t_series(bad, N) * hecke_q_series(c, N);
            CHECK_FALSE(p1.coeffs[1] == 0);
        }
    }
}

TEST_CASE("Newton identities") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        auto c = random_class(rng, 2 + k % 4);
        Rational e1 = elementary_symm(c, 1), e2 = elementary_symm(c, 2), h1 = complete_symm(c, 1),
                 h2 = complete_symm(c, 2);
        CHECK(e1 == h1);
        CHECK(e1 * h1 - 2 * e2 == power_sum(c, 2));
        CHECK(h1 * h1 - 2 * e2 == power_sum(c, 2));
        CHECK(2 * h2 == h1 * h1 + power_sum(c, 2));
    }
}

TEST_CASE("non-Archimedean L-factor") {
    CHECK(local_lfactor_p(sat({1}, 2), 1) == 2);
    CHECK(local_lfactor_p(sat({2, 3}, 5), 2) == Rational(625, 506));
    CHECK_THROWS_AS(local_lfactor_p(sat({1}, 2), 0), PoleError);
    try {
        local_lfactor_p(sat({2, 4}, 2), 2);
        CHECK(false);
    } catch (const PoleError& e) {
        CHECK(e.index == 1);
    }
    // exact remainder: L - Q_N(t) = -L t^{N+1} P(t) where T Q_N = 1 + t^{N+1} P
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        auto c = random_class(rng, 1 + k % 4);
        long s = 2 + k % 3;
        Rational t = 1;
        for (long i = 0; i < s; ++i) t /= c.p;
        size_t N = 6;
        auto q = hecke_q_series(c, N);
        auto full = full_t_poly(c);
        std::vector<Rational> prod(full.size() + N + 1);
        for (size_t i = 0; i < full.size(); ++i)
            for (size_t j = 0; j <= N; ++j) prod[i + j] += full[i] * q.coeffs[j];
        Rational P = 0, tp = 1;
        for (size_t i = N + 1; i < prod.size(); ++i) {
            P += prod[i] * tp;
            tp *= t;
        }
        Rational tn = 1;
        for (size_t i = 0; i <= N; ++i) tn *= t;
        Rational L = local_lfactor_p(c, s);
        CHECK(L - q.eval(t) == -L * tn * P);
        // numeric mode agrees with the exact value
        SatakeClassC cc;
        cc.p = c.p;
        for (const auto& a : c.params) cc.params.push_back(a.convert_to<double>());
        double Ld = L.convert_to<double>();
        CHECK(std::abs(local_lfactor_p(cc, Complex(double(s), 0)) - Ld) < 1e-13 * std::abs(Ld));
    }
    SatakeClassC one{{1.0}, 2};
    CHECK_THROWS_AS(local_lfactor_p(one, 0.0), PoleError);
    CHECK(std::abs(local_lfactor_p(one, Complex(1, 0)) - 2.0) < 1e-15);
}

TEST_CASE("Archimedean L-factor") {
    using std::numbers::pi;
    std::vector<Complex> a0{0.0}, a00{0.0, 0.0};
    CHECK(std::abs(archimedean_lfactor(a0, 1.0) - 1.0) < 1e-15);
    CHECK(std::abs(archimedean_lfactor(a0, 2.0) - 1.0 / pi) < 1e-15);
    CHECK(std::abs(archimedean_lfactor(a00, 1.0) - 1.0) < 1e-14);
    CHECK_THROWS_AS(archimedean_lfactor(a0, 0.0), PoleError);
    // against the IwasawaPi Baxter eigenvalue
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    const Complex I(0, 1);
    for (int k = 0; k < 10; ++k) {
        size_t n = 1 + k % 3;
        auto rho = rho_vector(n);
        std::vector<Complex> g, al;
        for (size_t j = 0; j < n; ++j) {
            g.emplace_back(u(rng), 0.3 * u(rng));
            al.push_back(I * g.back() - rho[j]);
        }
        Complex lam(u(rng), -2.0);
        Complex a = archimedean_lfactor(al, I * lam);
        Complex b = baxter_eigenvalue(lam, g, BaxterConvention::iwasawa_pi(n));
        CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-2") == -2);
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(to_string(Rational(-6, 4)) == "-3/2");
    CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
    CHECK_THROWS_AS(parse_rational("x"), InvalidArgument);
}
