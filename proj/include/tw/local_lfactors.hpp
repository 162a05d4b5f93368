#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <string>
#include <vector>

#include "tw/errors.hpp"

namespace tw {

using Rational = boost::multiprecision::cpp_rational;

struct SatakeClass {
    std::vector<Rational> params;
    long p = 2;

    size_t size() const { return params.size(); }
    void validate() const;
};

// numeric-mode Satake parameters
struct SatakeClassC {
    std::vector<Complex> params;
    long p = 2;

    void validate() const;
};

// coefficients of t^0..t^N, t = p^{-s}
struct TruncatedSeries {
    std::vector<Rational> coeffs;

    explicit TruncatedSeries(size_t order = 0) : coeffs(order + 1) {}
    size_t order() const { return coeffs.size() - 1; }
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    bool operator==(const TruncatedSeries& o) const { return coeffs == o.coeffs; }
    Rational eval(const Rational& t) const;
    Complex eval(Complex t) const;
};

bool is_prime(long p);

Rational elementary_symm(const SatakeClass& sigma, long j);
Rational complete_symm(const SatakeClass& sigma, long m);
// power sum p_k, used for the Newton identities
Rational power_sum(const SatakeClass& sigma, long k);

TruncatedSeries hecke_t_series(const SatakeClass& sigma, size_t N);
TruncatedSeries hecke_q_series(const SatakeClass& sigma, size_t N);
bool verify_tq_identity(const SatakeClass& sigma, size_t N);

// exact for integer s
Rational local_lfactor_p(const SatakeClass& sigma, long s);
Complex local_lfactor_p(const SatakeClassC& sigma, Complex s);

Complex archimedean_lfactor(std::span<const Complex> alpha, Complex s);

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

}  // namespace tw
