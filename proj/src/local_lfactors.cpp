#include "tw/local_lfactors.hpp"

#include <cmath>

#include "tw/numerics.hpp"

namespace tw {

namespace {

const double kLogPi = std::log(3.14159265358979323846);

// cpp_int treats a leading 0 as octal
boost::multiprecision::cpp_int decimal_int(std::string t) {
    bool neg = false;
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidArgument("parse_rational: bad integer");
    size_t nz = t.find_first_not_of('0');
    t = nz == std::string::npos ? "0" : t.substr(nz);
    boost::multiprecision::cpp_int v(t);
    return neg ? -v : v;
}

Rational rational_pow(const Rational& a, long k) {
    Rational r = 1;
    Rational b = k >= 0 ? a : Rational(1) / a;
    for (long e = std::labs(k); e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

}  // namespace

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void SatakeClass::validate() const {
    if (params.empty()) throw InvalidArgument("SatakeClass: need at least one parameter");
    if (!is_prime(p)) throw InvalidArgument("SatakeClass: p must be prime");
    for (const auto& a : params)
        if (a == 0) throw InvalidArgument("SatakeClass: zero parameter");
}

void SatakeClassC::validate() const {
    if (params.empty()) throw InvalidArgument("SatakeClass: need at least one parameter");
    if (!is_prime(p)) throw InvalidArgument("SatakeClass: p must be prime");
    for (auto a : params)
        if (a == Complex(0.0)) throw InvalidArgument("SatakeClass: zero parameter");
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    size_t N = std::min(order(), o.order());
    TruncatedSeries r(N);
    for (size_t i = 0; i <= N; ++i)
        for (size_t j = 0; i + j <= N; ++j) r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
    return r;
}

Rational TruncatedSeries::eval(const Rational& t) const {
    Rational r = 0;
    for (size_t i = coeffs.size(); i-- > 0;) r = r * t + coeffs[i];
    return r;
}

Complex TruncatedSeries::eval(Complex t) const {
    Complex r = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) r = r * t + coeffs[i].convert_to<double>();
    return r;
}

Rational elementary_symm(const SatakeClass& s, long j) {
    const long n = long(s.size());
    if (j < 0 || j > n) throw IndexError("elementary_symm: need 0 <= j <= n");
    std::vector<Rational> e(n + 1);
    e[0] = 1;
    for (long k = 0; k < n; ++k)
        for (long i = k + 1; i >= 1; --i) e[i] += s.params[k] * e[i - 1];
    return e[j];
}

Rational complete_symm(const SatakeClass& s, long m) {
    if (m < 0) throw IndexError("complete_symm: need m >= 0");
    // h_m over the first k variables, one variable at a time
    std::vector<Rational> h(m + 1);
    h[0] = 1;
    for (const auto& a : s.params)
        for (long i = 1; i <= m; ++i) h[i] += a * h[i - 1];
    return h[m];
}

Rational power_sum(const SatakeClass& s, long k) {
    Rational r = 0;
    for (const auto& a : s.params) r += rational_pow(a, k);
    return r;
}

TruncatedSeries hecke_t_series(const SatakeClass& s, size_t N) {
    s.validate();
    if (N < s.size()) throw InvalidArgument("hecke_t_series: need N >= n");
    TruncatedSeries r(N);
    for (size_t j = 0; j <= s.size(); ++j) r.coeffs[j] = (j % 2 ? -1 : 1) * elementary_symm(s, long(j));
    return r;
}

TruncatedSeries hecke_q_series(const SatakeClass& s, size_t N) {
    s.validate();
    TruncatedSeries r(N);
    r.coeffs[0] = 1;
    for (const auto& a : s.params)
        for (size_t i = 1; i <= N; ++i) r.coeffs[i] += a * r.coeffs[i - 1];
    return r;
}

bool verify_tq_identity(const SatakeClass& s, size_t N) {
    auto prod = hecke_t_series(s, N) * hecke_q_series(s, N);
    if (prod.coeffs[0] != 1) return false;
    for (size_t i = 1; i <= N; ++i)
        if (prod.coeffs[i] != 0) return false;
    return true;
}

Rational local_lfactor_p(const SatakeClass& s, long sv) {
    s.validate();
    Rational t = rational_pow(Rational(s.p), -sv);
    Rational r = 1;
    for (size_t j = 0; j < s.size(); ++j) {
        Rational f = 1 - s.params[j] * t;
        if (f == 0) throw PoleError("local_lfactor_p: 1 - alpha p^{-s} vanishes", long(j));
        r /= f;
    }
    return r;
}

Complex local_lfactor_p(const SatakeClassC& s, Complex sv) {
    s.validate();
    Complex t = std::exp(-sv * std::log(double(s.p)));
    Complex r = 1.0;
    for (size_t j = 0; j < s.params.size(); ++j) {
        Complex f = 1.0 - s.params[j] * t;
        if (std::abs(f) <= 1e-14 * (1.0 + std::abs(s.params[j] * t)))
            throw PoleError("local_lfactor_p: 1 - alpha p^{-s} vanishes", long(j));
        r /= f;
    }
    return r;
}

Complex archimedean_lfactor(std::span<const Complex> alpha, Complex s) {
    if (alpha.empty()) throw InvalidArgument("archimedean_lfactor: empty parameter list");
    std::vector<Complex> w;
    Complex lp = 0.0;
    for (auto a : alpha) {
        w.push_back((s - a) / 2.0);
        lp -= (s - a) / 2.0 * kLogPi;
    }
    return gamma_product(w) * std::exp(lp);
}

Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            auto dot = text.find('.');
            if (dot == std::string::npos) return Rational(decimal_int(text));
            // finite decimal
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            size_t frac = text.size() - dot - 1;
            boost::multiprecision::cpp_int den = 1;
            for (size_t i = 0; i < frac; ++i) den *= 10;
            return Rational(decimal_int(digits), den);
        }
        auto num = decimal_int(text.substr(0, slash)), den = decimal_int(text.substr(slash + 1));
        if (den == 0) throw InvalidArgument("parse_rational: zero denominator");
        return Rational(num, den);
    } catch (const InvalidArgument&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidArgument("parse_rational: cannot parse '" + text + "'");
    }
}

std::string to_string(const Rational& r) { return r.str(); }

}  // namespace tw
