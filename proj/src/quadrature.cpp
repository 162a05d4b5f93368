#include "tw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <thread>

namespace tw {

namespace {

// Gauss-Kronrod 7/15 on [-1,1]
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kN = 15;

struct Rule {
    double t[kN], wk[kN], wg[kN];
    Rule() {
        for (int i = 0; i < 7; ++i) {
            t[i] = -kXgk[i];
            t[kN - 1 - i] = kXgk[i];
            wk[i] = wk[kN - 1 - i] = kWgk[i];
            double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
            wg[i] = wg[kN - 1 - i] = g;
        }
        t[7] = 0.0;
        wk[7] = kWgk[7];
        wg[7] = kWg[3];
    }
};
const Rule kRule;

constexpr int kChunks = 8;

struct Region {
    std::vector<double> lo, hi;
    Complex val = 0.0;
    double aux = 0.0;
    double err = 0.0;
    int split = 0;
    long id = 0;
};

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct Partial {
    Complex k = 0.0, g = 0.0;
    double aux = 0.0;
    std::vector<Complex> gj;
};

void eval_range(const IntegrandAux& f, const Region& r, int d, long begin, long end, Partial& out) {
    std::vector<double> c(d), hw(d), x(d);
    std::vector<int> idx(d);
    for (int j = 0; j < d; ++j) {
        c[j] = 0.5 * (r.lo[j] + r.hi[j]);
        hw[j] = 0.5 * (r.hi[j] - r.lo[j]);
    }
    out.gj.assign(d, 0.0);
    long rem = begin;
    for (int j = 0; j < d; ++j) {
        idx[j] = int(rem % kN);
        rem /= kN;
    }
    for (long p = begin; p < end; ++p) {
        double wk = 1.0, wg = 1.0;
        for (int j = 0; j < d; ++j) {
            x[j] = c[j] + hw[j] * kRule.t[idx[j]];
            wk *= kRule.wk[idx[j]];
            wg *= kRule.wg[idx[j]];
        }
        ValueAux v = f(std::span<const double>(x));
        out.k += wk * v.value;
        out.g += wg * v.value;
        out.aux += wk * v.aux;
        for (int j = 0; j < d; ++j) out.gj[j] += (wk / kRule.wk[idx[j]] * kRule.wg[idx[j]]) * v.value;
        for (int j = 0; j < d; ++j) {
            if (++idx[j] < kN) break;
            idx[j] = 0;
        }
    }
}

void eval_region(const IntegrandAux& f, Region& r, int d, int workers) {
    const long npts = ipow(kN, d);
    std::vector<Partial> parts(kChunks);
    auto chunk = [&](int ci) {
        long b = npts * ci / kChunks, e = npts * (ci + 1) / kChunks;
        eval_range(f, r, d, b, e, parts[ci]);
    };
    if (workers <= 1) {
        for (int ci = 0; ci < kChunks; ++ci) chunk(ci);
    } else {
        std::vector<std::thread> th;
        int nt = std::min(workers, kChunks);
        for (int t = 0; t < nt; ++t)
            th.emplace_back([&, t] {
                for (int ci = t; ci < kChunks; ci += nt) chunk(ci);
            });
        for (auto& t : th) t.join();
    }
    Partial tot;
    tot.gj.assign(d, 0.0);
    for (auto& p : parts) {
        tot.k += p.k;
        tot.g += p.g;
        tot.aux += p.aux;
        for (int j = 0; j < d; ++j) tot.gj[j] += p.gj[j];
    }
    double vol = 1.0;
    for (int j = 0; j < d; ++j) vol *= 0.5 * (r.hi[j] - r.lo[j]);
    r.val = vol * tot.k;
    r.aux = vol * tot.aux;
    r.err = vol * std::abs(tot.k - tot.g);
    if (!std::isfinite(r.val.real()) || !std::isfinite(r.val.imag()) || !std::isfinite(r.err))
        throw InvalidArgument("integrand produced a non-finite value");
    double best = -1.0;
    r.split = 0;
    for (int j = 0; j < d; ++j) {
        double e = std::abs(tot.k - tot.gj[j]);
        if (e > best) {
            best = e;
            r.split = j;
        }
    }
    if (best <= 0.0) {
        double w = -1.0;
        for (int j = 0; j < d; ++j)
            if (r.hi[j] - r.lo[j] > w) {
                w = r.hi[j] - r.lo[j];
                r.split = j;
            }
    }
}

template <class T>
T pairwise(const std::vector<T>& v, size_t b, size_t e) {
    if (e - b <= 8) {
        T s{};
        for (size_t i = b; i < e; ++i) s += v[i];
        return s;
    }
    size_t m = b + (e - b) / 2;
    return pairwise(v, b, m) + pairwise(v, m, e);
}

QuadratureResult summarize(const std::vector<Region>& regs, long evals) {
    std::vector<Complex> vals(regs.size());
    std::vector<double> errs(regs.size()), auxs(regs.size());
    for (size_t i = 0; i < regs.size(); ++i) {
        vals[i] = regs[i].val;
        errs[i] = regs[i].err;
        auxs[i] = regs[i].aux;
    }
    QuadratureResult q;
    q.value = regs.empty() ? Complex(0.0) : pairwise(vals, 0, vals.size());
    q.abs_error = regs.empty() ? 0.0 : pairwise(errs, 0, errs.size()) + pairwise(auxs, 0, auxs.size());
    q.evaluations = evals;
    return q;
}

int default_splits(int d) {
    switch (d) {
        case 1: return 4;
        case 2: return 3;
        case 3: return 2;
        default: return 1;
    }
}

}  // namespace

QuadratureResult integrate_box_aux(const IntegrandAux& f, std::span<const Interval> box, double tol,
                                   const QuadOptions& opt) {
    const int d = int(box.size());
    if (d < 1 || d > 6) throw InvalidArgument("integrate_box: dimension must be 1..6");
    if (!(tol > 0)) throw InvalidArgument("integrate_box: tol must be positive");
    for (auto& iv : box)
        if (!(iv.hi > iv.lo) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
            throw InvalidArgument("integrate_box: bad interval");

    const long per_region = ipow(kN, d);
    const int s = opt.initial_splits > 0 ? opt.initial_splits : default_splits(d);
    const long ninit = ipow(s, d);

    std::vector<Region> regs;
    regs.reserve(size_t(ninit) * 4);
    long next_id = 0;
    for (long m = 0; m < ninit; ++m) {
        Region r;
        r.lo.resize(d);
        r.hi.resize(d);
        long rem = m;
        for (int j = 0; j < d; ++j) {
            int k = int(rem % s);
            rem /= s;
            double w = (box[j].hi - box[j].lo) / s;
            r.lo[j] = box[j].lo + k * w;
            r.hi[j] = (k == s - 1) ? box[j].hi : box[j].lo + (k + 1) * w;
        }
        r.id = next_id++;
        regs.push_back(std::move(r));
    }
    long evals = 0;
    if (per_region * ninit > opt.max_evaluations) {
        QuadratureResult q;
        throw BudgetExceeded(q, opt.max_evaluations);
    }
    for (auto& r : regs) {
        eval_region(f, r, d, opt.workers);
        evals += per_region;
    }

    using Key = std::pair<double, long>;  // (err, -id) ; larger first
    auto cmp = [](const std::pair<Key, size_t>& a, const std::pair<Key, size_t>& b) { return a.first < b.first; };
    std::priority_queue<std::pair<Key, size_t>, std::vector<std::pair<Key, size_t>>, decltype(cmp)> heap(cmp);
    double err_sum = 0.0, aux_sum = 0.0;
    for (size_t i = 0; i < regs.size(); ++i) {
        heap.push({{regs[i].err, -regs[i].id}, i});
        err_sum += regs[i].err;
        aux_sum += regs[i].aux;
    }

    long iter = 0;
    while (true) {
        double target = std::max(tol - aux_sum, 0.25 * tol);
        if (err_sum <= target || (++iter % 512) == 0) {
            QuadratureResult q = summarize(regs, evals);
            double es = q.abs_error;
            double as = 0.0;
            for (auto& r : regs) as += r.aux;
            err_sum = es - as;
            aux_sum = as;
            target = std::max(tol - aux_sum, 0.25 * tol);
            if (err_sum <= target) {
                q.converged = q.abs_error <= tol;
                return q;
            }
        }
        if (evals + 2 * per_region > opt.max_evaluations) {
            QuadratureResult q = summarize(regs, evals);
            q.converged = false;
            throw BudgetExceeded(q, opt.max_evaluations);
        }
        auto top = heap.top();
        heap.pop();
        size_t i = top.second;
        Region parent = regs[i];
        int j = parent.split;
        double mid = 0.5 * (parent.lo[j] + parent.hi[j]);
        Region a = parent, b = parent;
        a.hi[j] = mid;
        b.lo[j] = mid;
        a.id = next_id++;
        b.id = next_id++;
        eval_region(f, a, d, opt.workers);
        eval_region(f, b, d, opt.workers);
        evals += 2 * per_region;
        err_sum += a.err + b.err - parent.err;
        aux_sum += a.aux + b.aux - parent.aux;
        regs[i] = std::move(a);
        regs.push_back(std::move(b));
        heap.push({{regs[i].err, -regs[i].id}, i});
        heap.push({{regs.back().err, -regs.back().id}, regs.size() - 1});
    }
}

QuadratureResult integrate_box(const Integrand& f, std::span<const Interval> box, double tol,
                               const QuadOptions& opt) {
    IntegrandAux g = [&f](std::span<const double> x) { return ValueAux{f(x), 0.0}; };
    return integrate_box_aux(g, box, tol, opt);
}

double tail_length(const Tail& t, double eps) {
    if (const auto* de = std::get_if<DoubleExponential>(&t)) {
        double s = de->slope;
        if (!(s > 0)) throw InvalidArgument("DoubleExponential slope must be positive");
        double V0 = std::exp(de->shift);
        auto mass = [&](double V) { return std::exp(-V) / (s * V); };
        if (V0 > 1e-300 && mass(V0) <= eps) return 0.0;
        double V = std::max(1.0, std::log(1.0 / (eps * s)));
        for (int it = 0; it < 50; ++it) V = std::max(1.0, std::log(1.0 / (eps * s * V)));
        while (mass(V) > eps) V *= 1.05;
        return std::max(0.0, (std::log(V) - de->shift) / s);
    }
    const auto& ex = std::get<Exponential>(t);
    if (!(ex.rate > 0)) throw InvalidArgument("Exponential rate must be positive");
    return std::max(0.0, std::log(1.0 / (eps * ex.rate)) / ex.rate);
}

std::vector<Interval> truncation_box(const DecayProfile& profile, double tol) {
    const size_t d = profile.dims.size();
    if (d == 0) throw InvalidArgument("empty decay profile");
    const double eps0 = tol / (20.0 * double(d));
    std::vector<Interval> box(d);
    auto build = [&](const std::vector<double>& scale) {
        for (size_t j = 0; j < d; ++j) {
            const auto& dd = profile.dims[j];
            double e = eps0 / scale[j];
            box[j] = {dd.center - tail_length(dd.left, e), dd.center + tail_length(dd.right, e)};
            if (box[j].hi - box[j].lo < 1e-6) {
                box[j].lo -= 0.5;
                box[j].hi += 0.5;
            }
        }
    };
    std::vector<double> scale(d, 1.0);
    build(scale);
    // widths of the other dimensions multiply each slab's mass
    for (size_t j = 0; j < d; ++j) {
        double w = 1.0;
        for (size_t k = 0; k < d; ++k)
            if (k != j) w *= std::max(1.0, box[k].hi - box[k].lo);
        scale[j] = w;
    }
    build(scale);
    return box;
}

QuadratureResult integrate_decaying_aux(const IntegrandAux& f, const DecayProfile& profile, double tol,
                                        const QuadOptions& opt) {
    auto box = truncation_box(profile, tol);
    QuadratureResult q = integrate_box_aux(f, box, 0.9 * tol, opt);
    q.abs_error += 0.1 * tol;
    q.converged = q.converged && q.abs_error <= tol;
    return q;
}

QuadratureResult integrate_decaying(const Integrand& f, const DecayProfile& profile, double tol,
                                    const QuadOptions& opt) {
    IntegrandAux g = [&f](std::span<const double> x) { return ValueAux{f(x), 0.0}; };
    return integrate_decaying_aux(g, profile, tol, opt);
}

size_t ContourSpec::size() const {
    size_t n = 0;
    for (auto& r : offsets) n += r.size();
    return n;
}

void ContourSpec::check_interlacing() const {
    for (size_t k = 0; k + 1 < offsets.size(); ++k) {
        if (offsets[k].empty() || offsets[k + 1].empty()) continue;
        double mx = *std::max_element(offsets[k].begin(), offsets[k].end());
        double mn = *std::min_element(offsets[k + 1].begin(), offsets[k + 1].end());
        if (!(mx < mn))
            throw ContourError("contour rows " + std::to_string(k + 1) + " and " + std::to_string(k + 2) +
                               " violate interlacing");
    }
    if (!centers.empty()) {
        if (centers.size() != offsets.size()) throw ContourError("contour centers shape mismatch");
        for (size_t k = 0; k < offsets.size(); ++k)
            if (centers[k].size() != offsets[k].size()) throw ContourError("contour centers shape mismatch");
    }
}

double contour_radius(int gamma_decay_count, double eps) {
    if (gamma_decay_count < 1) throw InvalidArgument("gamma_decay_count must be >= 1");
    double a = std::numbers::pi * gamma_decay_count / 2.0;
    double L = std::log(1.0 / (eps * a));
    double R = 1.0;
    for (int it = 0; it < 60; ++it) R = (L + 4.0 * std::log1p(R)) / a;
    return std::max(R, 1.0);
}

QuadratureResult integrate_contour_aux(const ContourIntegrandAux& f, const ContourSpec& contour,
                                       int gamma_decay_count, double tol, const QuadOptions& opt) {
    contour.check_interlacing();
    const size_t d = contour.size();
    if (d == 0) throw InvalidArgument("integrate_contour: empty contour");
    std::vector<double> off, cen;
    for (size_t k = 0; k < contour.offsets.size(); ++k)
        for (size_t j = 0; j < contour.offsets[k].size(); ++j) {
            off.push_back(contour.offsets[k][j]);
            cen.push_back(contour.centers.empty() ? 0.0 : contour.centers[k][j]);
        }
    double R = contour_radius(gamma_decay_count, tol / (20.0 * double(d)));
    std::vector<Interval> box(d);
    for (size_t j = 0; j < d; ++j) box[j] = {cen[j] - R, cen[j] + R};
    IntegrandAux g = [&](std::span<const double> u) {
        Complex z[6];
        for (size_t j = 0; j < d; ++j) z[j] = Complex(u[j], off[j]);
        return f(std::span<const Complex>(z, d));
    };
    QuadratureResult q = integrate_box_aux(g, box, 0.9 * tol, opt);
    q.abs_error += 0.1 * tol;
    q.converged = q.converged && q.abs_error <= tol;
    return q;
}

QuadratureResult integrate_contour(const ContourIntegrand& f, const ContourSpec& contour, int gamma_decay_count,
                                   double tol, const QuadOptions& opt) {
    ContourIntegrandAux g = [&f](std::span<const Complex> z) { return ValueAux{f(z), 0.0}; };
    return integrate_contour_aux(g, contour, gamma_decay_count, tol, opt);
}

}  // namespace tw
