#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "tw/errors.hpp"

namespace tw {

struct QuadratureResult {
    Complex value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct BudgetExceeded : Error {
    QuadratureResult best;
    long max_evaluations;
    BudgetExceeded(const QuadratureResult& r, long maxev)
        : Error("quadrature budget exceeded (" + std::to_string(maxev) + " evaluations)"),
          best(r),
          max_evaluations(maxev) {}
};

struct Interval {
    double lo, hi;
};

struct QuadOptions {
    long max_evaluations = 40'000'000;
    int workers = 1;
    int initial_splits = 0;  // per dimension, 0 = pick by dimension
};

using Integrand = std::function<Complex(std::span<const double>)>;

// integrand value plus an auxiliary non-negative density that is integrated
// alongside (used to carry inner quadrature errors of nested integrals)
struct ValueAux {
    Complex value;
    double aux;
};
using IntegrandAux = std::function<ValueAux(std::span<const double>)>;

QuadratureResult integrate_box(const Integrand& f, std::span<const Interval> box, double tol,
                               const QuadOptions& opt = {});

// returned abs_error already includes the integrated aux density
QuadratureResult integrate_box_aux(const IntegrandAux& f, std::span<const Interval> box, double tol,
                                   const QuadOptions& opt = {});

struct DoubleExponential {
    double slope;
    double shift;
};
struct Exponential {
    double rate;
};
using Tail = std::variant<DoubleExponential, Exponential>;

struct DimDecay {
    double center = 0.0;
    Tail left;
    Tail right;
};

struct DecayProfile {
    std::vector<DimDecay> dims;
};

// tail length beyond which the bound's integral is <= eps
double tail_length(const Tail& t, double eps);

std::vector<Interval> truncation_box(const DecayProfile& profile, double tol);

QuadratureResult integrate_decaying(const Integrand& f, const DecayProfile& profile, double tol,
                                    const QuadOptions& opt = {});
QuadratureResult integrate_decaying_aux(const IntegrandAux& f, const DecayProfile& profile, double tol,
                                        const QuadOptions& opt = {});

struct ContourSpec {
    // imaginary offsets grouped by Gelfand-Zetlin row
    std::vector<std::vector<double>> offsets;
    // optional real centers of the truncation window, same shape
    std::vector<std::vector<double>> centers;

    size_t size() const;
    void check_interlacing() const;
};

using ContourIntegrand = std::function<Complex(std::span<const Complex>)>;
using ContourIntegrandAux = std::function<ValueAux(std::span<const Complex>)>;

double contour_radius(int gamma_decay_count, double eps);

QuadratureResult integrate_contour(const ContourIntegrand& f, const ContourSpec& contour,
                                   int gamma_decay_count, double tol, const QuadOptions& opt = {});
QuadratureResult integrate_contour_aux(const ContourIntegrandAux& f, const ContourSpec& contour,
                                       int gamma_decay_count, double tol, const QuadOptions& opt = {});

}  // namespace tw
