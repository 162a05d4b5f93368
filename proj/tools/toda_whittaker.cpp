#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "report.hpp"
#include "tw/gl_baxter.hpp"
#include "tw/gl_whittaker.hpp"
#include "tw/local_lfactors.hpp"
#include "tw/numerics.hpp"
#include "tw/rankin_selberg.hpp"
#include "tw/so_toda.hpp"

using namespace tw;
using report::Record;

namespace {

const Complex I(0, 1);

// a usage problem tied to one flag; exit 1
struct FlagError : std::runtime_error {
    FlagError(const std::string& flag, const std::string& msg) : std::runtime_error(flag + ": " + msg) {}
};

struct Common {
    std::optional<double> tol;
    long budget = QuadOptions{}.max_evaluations;
    std::string format = "text";
    int workers = 1;

    double tol_or(double d) const { return tol ? *tol : d; }
    QuadOptions quad(int w) const {
        QuadOptions o;
        o.max_evaluations = budget;
        o.workers = w;
        return o;
    }
};

Complex parse_complex(std::string s, const std::string& flag) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    auto bad = [&] { return FlagError(flag, "cannot parse '" + s + "' as a complex number"); };
    if (s.empty()) throw bad();
    auto num = [&](const std::string& t) {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            throw bad();
        }
        if (pos != t.size()) throw bad();
        return v;
    };
    if (s.back() != 'i') return num(s);
    std::string body = s.substr(0, s.size() - 1);
    size_t split = std::string::npos;
    for (size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return num(t);
    };
    if (split == std::string::npos) return Complex(0, imag(body));
    return Complex(num(body.substr(0, split)), imag(body.substr(split)));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Complex> complex_list(const std::string& s, const std::string& flag) {
    std::vector<Complex> v;
    for (auto& t : split_list(s)) v.push_back(parse_complex(t, flag));
    return v;
}

std::vector<double> real_list(const std::string& s, const std::string& flag) {
    std::vector<double> v;
    for (auto z : complex_list(s, flag)) {
        if (z.imag() != 0) throw FlagError(flag, "expected real values");
        v.push_back(z.real());
    }
    return v;
}

struct Algebra {
    char family;  // 'g' or 's'
    size_t rank;  // n for gl_n, l for so_{2l+1}
};

Algebra parse_algebra(const std::string& s) {
    auto digits = [&](size_t from) {
        if (from >= s.size() || s.find_first_not_of("0123456789", from) != std::string::npos)
            throw FlagError("--algebra", "unknown algebra '" + s + "' (expected glN or soN)");
        return size_t(std::stoul(s.substr(from)));
    };
    if (s.rfind("gl", 0) == 0) {
        size_t n = digits(2);
        if (n == 0) throw FlagError("--algebra", "gl0 is empty");
        return {'g', n};
    }
    if (s.rfind("so", 0) == 0) {
        size_t m = digits(2);
        if (m < 3 || m % 2 == 0) throw FlagError("--algebra", "only odd orthogonal so_{2l+1}, l >= 1");
        return {'s', (m - 1) / 2};
    }
    throw FlagError("--algebra", "unknown algebra '" + s + "' (expected glN or soN)");
}

BaxterConvention parse_convention(const std::string& s, size_t n) {
    if (s == "lie") return BaxterConvention::lie();
    if (s == "iwasawa") return BaxterConvention::iwasawa();
    if (s == "iwasawa-pi") return BaxterConvention::iwasawa_pi(n);
    throw FlagError("--convention", "expected lie, iwasawa or iwasawa-pi");
}

double err(Complex a, Complex b) { return std::abs(a - b) / std::min(1.0, std::abs(b)); }
double relerr(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

Record result_record(const std::string& name, const QuadratureResult& r) {
    return Record{{"case", name},
                  {"value", report::complex_json(r.value)},
                  {"error", r.abs_error},
                  {"evaluations", r.evaluations}};
}

Record check_record(const std::string& name, Complex lhs, Complex rhs, double residual, double tol) {
    return Record{{"case", name},
                  {"lhs", report::complex_json(lhs)},
                  {"rhs", report::complex_json(rhs)},
                  {"residual", residual},
                  {"tol", tol},
                  {"pass", residual < tol}};
}

std::string complex_text(Complex z) {
    return report::fmt17(z.real()) + (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") +
           report::fmt17(std::abs(z.imag())) + "i";
}

std::string text_value(const Record& v) {
    if (v.is_object() && v.contains("re")) return complex_text(Complex(v["re"].get<double>(), v["im"].get<double>()));
    if (v.is_object() && v.contains("num")) {
        auto d = v["den"].get<std::string>();
        return d == "1" ? v["num"].get<std::string>() : v["num"].get<std::string>() + "/" + d;
    }
    if (v.is_string()) return v.get<std::string>();
    return report::dump(v);
}

void emit(const std::vector<Record>& rows, const std::string& format) {
    if (format == "json") {
        for (auto& r : rows) std::cout << report::dump(r) << '\n';
    } else if (format == "csv") {
        std::cout << report::csv(rows);
    } else {
        for (auto& r : rows) {
            if (r.contains("lhs")) {
                std::cout << (r["pass"].get<bool>() ? "PASS " : "FAIL ") << r["case"].get<std::string>()
                          << "  lhs=" << text_value(r["lhs"]) << "  rhs=" << text_value(r["rhs"])
                          << "  residual=" << report::fmt17(r["residual"].get<double>())
                          << "  tol=" << report::fmt17(r["tol"].get<double>()) << '\n';
            } else if (r["case"].get<std::string>().rfind("eval/", 0) == 0) {
                std::cout << text_value(r["value"]) << " +- " << report::fmt17(r["error"].get<double>()) << '\n';
            } else {
                bool first = true;
                for (auto it = r.begin(); it != r.end(); ++it) {
                    if (it.key() == "case") continue;
                    std::cout << (first ? "" : "  ") << it.key() << "=" << text_value(it.value());
                    first = false;
                }
                std::cout << '\n';
            }
        }
    }
    std::cout.flush();
}

// cases run on a pool; output order is the case order
std::vector<Record> run_cases(const std::vector<std::function<Record()>>& cases, int workers) {
    std::vector<Record> out(cases.size());
    std::vector<std::exception_ptr> errs(cases.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t k; (k = next++) < cases.size();) {
            try {
                out[k] = cases[k]();
            } catch (...) {
                errs[k] = std::current_exception();
            }
        }
    };
    size_t nt = std::max<size_t>(1, std::min<size_t>(size_t(workers), cases.size()));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string algebra, lambda, x, method = "givental", word;
};

Record cmd_eval(const EvalArgs& a, const Common& c) {
    Algebra alg = parse_algebra(a.algebra);
    auto lam = complex_list(a.lambda, "--lambda");
    auto x = real_list(a.x, "--x");
    double tol = c.tol_or(1e-8);
    auto opt = c.quad(c.workers);
    const std::string name = "eval/" + a.algebra + "/" + a.method;
    if (alg.family == 'g') {
        if (alg.rank > 3) throw RankError("gl" + std::to_string(alg.rank) + " is above the gl_3 evaluation cap");
        if (lam.size() != alg.rank) throw FlagError("--lambda", "expected " + std::to_string(alg.rank) + " values");
        if (x.size() != alg.rank) throw FlagError("--x", "expected " + std::to_string(alg.rank) + " values");
        SpectralParams sp{lam, Convention::Givental};
        if (alg.rank == 1 || a.method == "closed") {
            if (alg.rank > 2) throw FlagError("--method", "closed form only for gl1, gl2");
            QuadratureResult r;
            r.value = alg.rank == 1 ? std::exp(I * lam[0] * x[0]) : closed_form_gl2(lam[0], lam[1], x[0], x[1]);
            r.converged = true;
            return result_record("eval/" + a.algebra + "/closed", r);
        }
        if (a.method == "givental") return result_record(name, givental_eval(sp, x, tol, opt));
        if (a.method == "recursive") return result_record(name, givental_recursive_eval(sp, x, tol, opt));
        if (a.method == "mb") return result_record(name, mellin_barnes_eval(sp, x, std::nullopt, tol, opt));
        if (a.method == "mixed") {
            std::vector<Step> w;
            for (char ch : a.word) {
                if (ch == 'L' || ch == 'l')
                    w.push_back(Step::L);
                else if (ch == 'R' || ch == 'r')
                    w.push_back(Step::R);
                else
                    throw FlagError("--word", "letters must be L or R");
            }
            if (w.size() != alg.rank - 1)
                throw FlagError("--word", "expected " + std::to_string(alg.rank - 1) + " letters");
            return result_record(name + "/" + a.word, mixed_eval(w, sp, x, std::nullopt, tol, opt));
        }
        throw FlagError("--method", "expected givental, recursive, mb, mixed or closed");
    }
    if (alg.rank > 2) throw RankError("so" + std::to_string(2 * alg.rank + 1) + " is above the so_5 cap");
    if (lam.size() != alg.rank) throw FlagError("--lambda", "expected " + std::to_string(alg.rank) + " values");
    if (x.size() != alg.rank) throw FlagError("--x", "expected " + std::to_string(alg.rank) + " values");
    if (a.method == "closed") {
        if (alg.rank != 1) throw FlagError("--method", "closed form only for so3");
        QuadratureResult r;
        r.value = closed_form_so3(lam[0], x[0]);
        r.converged = true;
        return result_record(name, r);
    }
    if (a.method == "givental") return result_record(name, so_givental_eval(lam, x, tol, opt));
    if (a.method == "recursive") {
        if (alg.rank != 2) throw FlagError("--method", "recursive only for so5");
        return result_record(name, so_recursive_eval(lam, x, tol, opt));
    }
    throw FlagError("--method", "expected givental, recursive or closed for so algebras");
}

// ---------------------------------------------------------------- baxter-apply

struct BaxterArgs {
    std::string algebra, gamma, lambda, y, convention = "lie";
    double delta = 0.25;
};

Record cmd_baxter(const BaxterArgs& a, const Common& c) {
    Algebra alg = parse_algebra(a.algebra);
    Complex g = parse_complex(a.gamma, "--gamma");
    auto lam = complex_list(a.lambda, "--lambda");
    auto y = real_list(a.y, "--y");
    double tol = c.tol_or(1e-8);
    auto opt = c.quad(c.workers);
    if (lam.size() != alg.rank) throw FlagError("--lambda", "expected " + std::to_string(alg.rank) + " values");
    if (y.size() != alg.rank) throw FlagError("--y", "expected " + std::to_string(alg.rank) + " values");
    Record r{{"case", "baxter-apply/" + a.algebra}};
    if (alg.family == 's') {
        if (alg.rank != 1) throw RankError("so Baxter operator only at so3");
        auto v = so_baxter_apply(g, lam, y, tol, a.delta, opt);
        Complex psi = closed_form_so3(lam[0], y[0]);
        r["value"] = report::complex_json(v.value);
        r["error"] = v.abs_error;
        r["psi"] = report::complex_json(psi);
        r["ratio"] = report::complex_json(v.value / psi);
        r["eigenvalue"] = report::complex_json(so_baxter_eigenvalue(g, lam));
        r["kernel_factor"] = report::complex_json(std::exp(log_gamma(2.0 * I * g)));
        return r;
    }
    if (alg.rank > 3) throw RankError("gl" + std::to_string(alg.rank) + " is above the gl_3 Baxter cap");
    auto conv = parse_convention(a.convention, alg.rank);
    Evaluator psi = [&](std::span<const double> x) { return baxter_eigenfunction(lam, x, conv, tol); };
    Complex p = psi(y);
    Complex e = baxter_eigenvalue(g, lam, conv);
    auto v = baxter_apply(g, psi, lam, y, conv, tol, a.delta, opt);
    r["value"] = report::complex_json(v.value);
    r["error"] = v.abs_error;
    r["psi"] = report::complex_json(p);
    r["ratio"] = report::complex_json(v.value / p);
    r["eigenvalue"] = report::complex_json(e);
    return r;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
    std::string kind, gamma, lambda, x, y, scan, convention = "lie";
};

std::vector<Record> cmd_kernel(const KernelArgs& a, const Common& c) {
    auto x = real_list(a.x, "--x");
    auto y = a.y.empty() ? std::vector<double>{} : real_list(a.y, "--y");
    double tol = c.tol_or(1e-8);
    auto opt = c.quad(1);
    // --scan index:lo:hi:count varies one coordinate of --x
    std::vector<std::vector<double>> pts{x};
    if (!a.scan.empty()) {
        std::vector<std::string> f;
        std::stringstream ss(a.scan);
        for (std::string t; std::getline(ss, t, ':');) f.push_back(t);
        if (f.size() != 4) throw FlagError("--scan", "expected index:lo:hi:count");
        size_t idx;
        double lo, hi;
        long cnt;
        try {
            idx = std::stoul(f[0]);
            lo = std::stod(f[1]);
            hi = std::stod(f[2]);
            cnt = std::stol(f[3]);
        } catch (const std::exception&) {
            throw FlagError("--scan", "cannot parse '" + a.scan + "'");
        }
        if (idx >= x.size() || cnt < 2) throw FlagError("--scan", "index out of range or count < 2");
        pts.clear();
        for (long k = 0; k < cnt; ++k) {
            auto p = x;
            p[idx] = lo + (hi - lo) * double(k) / double(cnt - 1);
            pts.push_back(p);
        }
    }
    std::function<Complex(const std::vector<double>&)> f;
    if (a.kind == "baxter") {
        Complex g = parse_complex(a.gamma, "--gamma");
        if (y.size() != x.size()) throw FlagError("--y", "must have as many entries as --x");
        auto conv = parse_convention(a.convention, x.size());
        f = [=](const std::vector<double>& p) { return baxter_kernel(p, y, g, conv); };
    } else if (a.kind == "givental-step") {
        auto l = complex_list(a.lambda, "--lambda");
        if (l.size() != 1) throw FlagError("--lambda", "one value");
        if (y.size() + 1 != x.size()) throw FlagError("--y", "must have one entry fewer than --x");
        f = [=](const std::vector<double>& p) { return givental_step_kernel(p, y, l[0]); };
    } else if (a.kind == "stade" || a.kind == "double-step") {
        auto l = complex_list(a.lambda, "--lambda");
        if (l.size() != 2) throw FlagError("--lambda", "two values (lambda_l, lambda_{l+1})");
        if (y.size() + 2 != x.size()) throw FlagError("--y", "must have two entries fewer than --x");
        std::pair<Complex, Complex> pr{l[0], l[1]};
        if (a.kind == "stade")
            f = [=](const std::vector<double>& p) { return stade_kernel(p, y, pr); };
        else
            f = [=](const std::vector<double>& p) { return double_step_kernel(p, y, pr, tol, opt).value; };
    } else if (a.kind == "so-baxter") {
        Complex g = parse_complex(a.gamma, "--gamma");
        if (x.size() != 1 || y.size() != 1) throw FlagError("--x", "so-baxter takes scalar --x and --y");
        f = [=](const std::vector<double>& p) { return so_baxter_kernel_closed(y[0], p[0], g); };
    } else {
        throw FlagError("--kind", "expected baxter, givental-step, stade, double-step or so-baxter");
    }
    std::vector<std::function<Record()>> cases;
    for (auto& p : pts)
        cases.push_back([=] { return Record{{"case", "kernel/" + a.kind}, {"x", p}, {"value", report::complex_json(f(p))}}; });
    return run_cases(cases, c.workers);
}

// ---------------------------------------------------------------- lfactor

struct LfactorArgs {
    std::string place, alpha, satake, s;
};

Record cmd_lfactor(const LfactorArgs& a, const Common&) {
    Record r{{"case", "lfactor/" + a.place}};
    if (a.place == "inf") {
        auto al = complex_list(a.alpha, "--alpha");
        Complex s = parse_complex(a.s, "--s");
        try {
            r["value"] = report::complex_json(archimedean_lfactor(al, s));
        } catch (const PoleError& e) {
            throw FlagError("--s", e.what());
        }
        return r;
    }
    long p;
    try {
        size_t pos;
        p = std::stol(a.place, &pos);
        if (pos != a.place.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw FlagError("--place", "expected inf or a prime");
    }
    if (!is_prime(p)) throw FlagError("--place", std::to_string(p) + " is not prime");
    std::optional<long> s_int;
    try {
        size_t pos;
        long v = std::stol(a.s, &pos);
        if (pos == a.s.size()) s_int = v;
    } catch (const std::exception&) {
    }
    try {
        if (s_int) {
            SatakeClass sc;
            sc.p = p;
            for (auto& t : split_list(a.satake)) {
                try {
                    sc.params.push_back(parse_rational(t));
                } catch (const InvalidArgument&) {
                    throw FlagError("--satake", "cannot parse '" + t + "' as a rational");
                }
            }
            r["value"] = report::rational_json(local_lfactor_p(sc, *s_int));
        } else {
            SatakeClassC sc;
            sc.p = p;
            sc.params = complex_list(a.satake, "--satake");
            r["value"] = report::complex_json(local_lfactor_p(sc, parse_complex(a.s, "--s")));
        }
    } catch (const PoleError& e) {
        throw FlagError("--s", e.what());
    }
    return r;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string suite;
    int rank = 0;  // 0 = suite default
    int n = 4;
    int trials = 0;
    unsigned long seed = 1;
};

using Cases = std::vector<std::function<Record()>>;

Rational rational_sample(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
    long a = 0;
    while (a == 0) a = num(rng);
    return Rational(a, den(rng));
}

Cases suite_baxter_eigen(const VerifyArgs& v, const Common& c) {
    int rank = v.rank ? v.rank : 2;
    if (rank < 1 || rank > 2) throw FlagError("--rank", "baxter-eigen supports rank 1 or 2");
    double tol = c.tol_or(1e-6);
    auto opt = c.quad(1);
    struct Setup {
        std::string tag;
        BaxterConvention conv;
        Complex g;
        std::vector<Complex> lam;
    };
    std::vector<Setup> setups;
    size_t n = size_t(rank);
    if (n == 1) {
        setups = {{"lie", BaxterConvention::lie(), Complex(0.3, -0.7), {0.3}},
                  {"iwasawa", BaxterConvention::iwasawa(), Complex(0.1, -1.4), {0.4}},
                  {"iwasawa-pi", BaxterConvention::iwasawa_pi(1), Complex(0.1, -1.4), {0.4}}};
    } else {
        setups = {{"lie", BaxterConvention::lie(), Complex(0, -0.5), {1.0, -1.0}},
                  {"iwasawa", BaxterConvention::iwasawa(), Complex(0.1, -1.6), {0.6, Complex(-0.3, 0.05)}},
                  {"iwasawa-pi", BaxterConvention::iwasawa_pi(2), Complex(0.1, -1.6), {0.6, Complex(-0.3, 0.05)}}};
    }
    std::vector<std::vector<double>> ys = n == 1 ? std::vector<std::vector<double>>{{0.0}, {0.5}, {-0.7}}
                                                 : std::vector<std::vector<double>>{{0, -0.5}, {0.4, 0.6}, {-0.2, 0.3}};
    Cases cs;
    for (auto& s : setups)
        for (size_t k = 0; k < ys.size(); ++k)
            cs.push_back([=] {
                Evaluator psi = [&](std::span<const double> x) { return baxter_eigenfunction(s.lam, x, s.conv); };
                auto rho = rho_vector(n);
                std::vector<Complex> args, al;
                for (size_t j = 0; j < n; ++j) {
                    Complex d = I * s.g - I * s.lam[j];
                    args.push_back(s.conv.tag == BaxterTag::Lie ? d : d / 2.0);
                    al.push_back(I * s.lam[j] - rho[j]);
                }
                Complex e = s.conv.tag == BaxterTag::IwasawaPi ? archimedean_lfactor(al, I * s.g) : gamma_product(args);
                Complex p = psi(ys[k]);
                Complex q = baxter_apply(s.g, psi, s.lam, ys[k], s.conv, 0.1 * tol * std::abs(e * p), 0.25, opt).value;
                return check_record("baxter-eigen/" + s.tag + "/gl" + std::to_string(n) + "/y" + std::to_string(k),
                                    q / p, e, relerr(q / p, e), 10 * tol);
            });
    return cs;
}

Cases suite_mb(const VerifyArgs& v, const Common& c) {
    int rank = v.rank ? v.rank : 2;
    if (rank < 2 || rank > 3) throw FlagError("--rank", "mb-vs-givental supports rank 2 or 3");
    double tol = c.tol_or(1e-6);
    auto opt = c.quad(1);
    int trials = v.trials ? v.trials : 3;
    std::mt19937_64 rng(v.seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Cases cs;
    for (int t = 0; t < trials; ++t) {
        std::vector<Complex> lam;
        std::vector<double> x;
        for (int i = 0; i < rank; ++i) {
            lam.emplace_back(u(rng));
            x.push_back(0.8 * u(rng));
        }
        std::string tag = "mb-vs-givental/gl" + std::to_string(rank) + "/" + std::to_string(t);
        cs.push_back([=] {
            SpectralParams sp{lam, Convention::Givental};
            Complex a = mellin_barnes_eval(sp, x, std::nullopt, tol, opt).value;
            Complex b = givental_eval(sp, x, tol, opt).value;
            return check_record(tag, a, b, std::abs(a - b), 5 * tol);
        });
    }
    return cs;
}

Cases suite_stade(const VerifyArgs& v, const Common& c) {
    double tol = c.tol_or(1e-8);
    auto opt = c.quad(1);
    int trials = v.trials ? v.trials : 5;
    std::vector<int> ells = v.rank ? std::vector<int>{v.rank} : std::vector<int>{1, 2};
    for (int l : ells)
        if (l < 1 || l > 2) throw FlagError("--rank", "stade supports l = 1 or 2");
    std::mt19937_64 rng(v.seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Cases cs;
    for (int t = 0; t < trials; ++t)
        for (int l : ells) {
            std::pair<Complex, Complex> lp{u(rng), u(rng)};
            std::vector<double> top, bot;
            for (int i = 0; i <= l; ++i) top.push_back(u(rng));
            for (int i = 0; i + 1 < l; ++i) bot.push_back(u(rng));
            cs.push_back([=] {
                Complex a = stade_kernel(top, bot, lp);
                Complex b = double_step_kernel(top, bot, lp, tol, opt).value;
                return check_record("stade/l" + std::to_string(l) + "/" + std::to_string(t), a, b, err(a, b), 10 * tol);
            });
        }
    return cs;
}

Cases suite_bump(const VerifyArgs& v, const Common& c) {
    double tol = c.tol_or(1e-8);
    auto opt = c.quad(1);
    int trials = v.trials ? v.trials : 3;
    std::mt19937_64 rng(v.seed);
    std::uniform_real_distribution<double> u(-1, 1);
    Cases cs;
    auto sp = [](std::vector<Complex> z) { return SpectralParams{z, Convention::Givental}; };
    for (int t = 0; t < trials; ++t) {
        auto g = sp({u(rng)}), l = sp({u(rng)});
        Complex s(0.3 * u(rng), -0.8);
        cs.push_back([=] {
            Complex a = bump_friedberg_integral(0, g, l, s, tol, 0.25, opt).value;
            Complex b = bump_friedberg_rhs(g, l, s);
            return check_record("bump-friedberg/l0/" + std::to_string(t), a, b, err(a, b), 10 * tol);
        });
    }
    for (int t = 0; t < trials; ++t) {
        auto g = sp({0.5 * u(rng), 0.5 * u(rng)}), l = sp({0.5 * u(rng), 0.5 * u(rng)});
        Complex s(0.2 * u(rng), -0.9);
        cs.push_back([=] {
            Complex a = bump_friedberg_integral(1, g, l, s, tol, 0.25, opt).value;
            Complex b = bump_friedberg_rhs(g, l, s);
            return check_record("bump-friedberg/l1/" + std::to_string(t), a, b, err(a, b), 1e3 * tol);
        });
    }
    return cs;
}

Cases suite_barnes(const VerifyArgs& v, const Common& c) {
    double tol = c.tol_or(1e-10);
    auto opt = c.quad(1);
    int trials = v.trials ? v.trials : 10;
    std::mt19937_64 rng(v.seed);
    std::uniform_real_distribution<double> u(-1, 1), h(0.2, 1.0);
    Cases cs;
    for (int t = 0; t < trials; ++t) {
        std::pair<Complex, Complex> l{Complex(u(rng), h(rng)), Complex(u(rng), h(rng))};
        std::pair<Complex, Complex> g{Complex(u(rng), -h(rng)), Complex(u(rng), -h(rng))};
        cs.push_back([=] {
            auto r = barnes_gustafson(l, g, tol, std::nullopt, opt);
            return check_record("barnes/" + std::to_string(t), r.lhs, r.rhs, r.residual, std::max(100 * tol, 1e-12));
        });
    }
    return cs;
}

Cases suite_tq(const VerifyArgs& v, const Common&) {
    if (v.n < 1) throw FlagError("--n", "must be >= 1");
    int trials = v.trials ? v.trials : 20;
    const long primes[] = {2, 3, 5, 7, 11};
    std::mt19937_64 rng(v.seed);
    Cases cs;
    for (int t = 0; t < trials; ++t) {
        SatakeClass s;
        s.p = primes[t % 5];
        for (int i = 0; i < v.n; ++i) s.params.push_back(rational_sample(rng));
        cs.push_back([=] {
            size_t N = size_t(2 * v.n + 4);
            auto T = hecke_t_series(s, N), Q = hecke_q_series(s, N);
            auto P = T * Q;  // truncated at t^N
            Rational tt = Rational(1, s.p), lhs = P.eval(tt);
            bool ok = verify_tq_identity(s, N) && lhs == 1;
            Record r{{"case", "tq-padic/n" + std::to_string(v.n) + "/" + std::to_string(t)},
                     {"lhs", report::rational_json(lhs)},
                     {"rhs", report::rational_json(Rational(1))},
                     {"residual", ok ? 0.0 : 1.0},
                     {"tol", 0.0},
                     {"pass", ok}};
            return r;
        });
    }
    return cs;
}

Cases suite_toda(const VerifyArgs&, const Common& c) {
    double tol = c.tol_or(1e-7);
    const double h = 1e-2;
    Cases cs;
    auto add = [&](std::string name, std::function<Complex(double)> a, Complex want) {
        cs.push_back([=] {
            Complex r = richardson(a, h);
            return check_record("toda/" + name, r, want, std::abs(r - want), tol);
        });
    };
    Complex l = 0.6;
    Evaluator e1 = [l](std::span<const double> x) { return std::exp(I * l * x[0]); };
    std::vector<double> x1{0.4};
    add("gl1/H1", [=](double s) { return toda_apply(Hamiltonian::H1, e1, x1, s); }, l * e1(x1));
    add("gl1/H2", [=](double s) { return toda_apply(Hamiltonian::H2tilde, e1, x1, s); }, 0.5 * l * l * e1(x1));
    Complex a = 0.7, b = -0.2;
    Evaluator e2 = [a, b](std::span<const double> x) { return closed_form_gl2(a, b, x[0], x[1]); };
    std::vector<double> x2{0.2, -0.3};
    add("gl2/H1", [=](double s) { return toda_apply(Hamiltonian::H1, e2, x2, s); }, (a + b) * e2(x2));
    add("gl2/H2", [=](double s) { return toda_apply(Hamiltonian::H2tilde, e2, x2, s); },
        0.5 * (a * a + b * b) * e2(x2));
    Complex mu = 0.3;
    std::vector<Complex> ab{a, b};
    add("gl2/t(mu)", [=](double s) { return toda_generating_apply(mu, e2, x2, s); },
        toda_generating_eigenvalue(mu, ab) * e2(x2));
    Complex ls = 0.5;
    Evaluator e3 = [ls](std::span<const double> x) { return closed_form_so3(ls, x[0]); };
    std::vector<double> x3{0.0};
    add("so3/H2", [=](double s) { return so_toda_apply_h2(e3, x3, s); }, 0.5 * ls * ls * e3(x3));
    return cs;
}

Cases suite_dual(const VerifyArgs&, const Common& c) {
    double tol = c.tol_or(1e-7);
    auto opt = c.quad(1);
    Cases cs;
    for (double z : {0.0, 1.0, 2.0}) {
        cs.push_back([=] {
            std::vector<Complex> g{0.2};
            double x = 0.3;
            auto F = [x](std::span<const Complex> b) { return std::exp(-I * b[0] * x); };
            Complex a = dual_baxter_apply(z, F, g, std::nullopt, 0.01 * tol, opt).value;
            Complex want = std::exp(-std::exp(x - z)) * std::exp(-I * g[0] * x);
            return check_record("dual-baxter/gl1/z" + report::fmt17(z), a, want, relerr(a, want), 10 * tol);
        });
    }
    cs.push_back([=] {
        std::vector<double> x{0.2, -0.1};
        auto F = [x](std::span<const Complex> b) { return closed_form_gl2(-b[0], -b[1], x[0], x[1]); };
        std::vector<Complex> g{0.5, -0.3};
        double z = 0.3;
        Complex a = dual_baxter_apply(z, F, g, std::nullopt, tol, opt).value;
        Complex want = std::exp(-std::exp(x[1] - z)) * closed_form_gl2(-g[0], -g[1], x[0], x[1]);
        return check_record("dual-baxter/gl2/z0.3", a, want, relerr(a, want), 1e3 * tol);
    });
    return cs;
}

Cases suite_spherical(const VerifyArgs&, const Common& c) {
    double tol = c.tol_or(1e-6);
    auto opt = c.quad(1);
    struct Draw {
        Complex g1, g2, lam;
    };
    std::vector<Draw> draws{{0.8, -0.8, Complex(0, -1.5)}, {0.3, 0.5, Complex(0.2, -1.8)}, {-0.4, 0.1, Complex(-0.3, -1.6)}};
    Cases cs;
    for (size_t k = 0; k < draws.size(); ++k)
        cs.push_back([=] {
            auto d = draws[k];
            auto r = spherical_transform_rank2(d.g1, d.g2, d.lam, tol, opt);
            return check_record("spherical-rank2/" + std::to_string(k), r.lhs, r.rhs, r.residual, 100 * tol);
        });
    return cs;
}

Cases suite_commute(const VerifyArgs&, const Common& c) {
    double tol = c.tol_or(1e-7);
    auto opt = c.quad(1);
    Cases cs;
    struct P {
        Complex a, b;
        std::vector<double> y, z;
    };
    std::vector<P> ps{{Complex(0, -0.5), Complex(0, -1.2), {0}, {0.3}},
                      {Complex(0, -0.6), Complex(0, -1.1), {0, 0}, {0.2, -0.2}},
                      {Complex(0.3, -0.7), Complex(-0.2, -1.0), {0, 0}, {0.2, -0.2}}};
    for (size_t k = 0; k < ps.size(); ++k)
        cs.push_back([=] {
            auto p = ps[k];
            Complex ab = baxter_compose(p.a, p.b, p.y, p.z, 0.1 * tol, opt).value;
            Complex ba = baxter_compose(p.b, p.a, p.y, p.z, 0.1 * tol, opt).value;
            return check_record("commute/gl" + std::to_string(p.y.size()) + "/" + std::to_string(k), ab, ba,
                                err(ab, ba), 10 * tol);
        });
    cs.push_back([=] {
        std::vector<double> y{0.1, -0.3};
        auto r = intertwining_check_gl2(Complex(0.2, -0.8), 0.4, y, 0.05, 0.1 * tol, 0.25, opt);
        return check_record("commute/intertwining", r.lhs, r.rhs, r.residual, 10 * tol);
    });
    return cs;
}

std::vector<Record> cmd_verify(const VerifyArgs& v, const Common& c) {
    static const std::map<std::string, Cases (*)(const VerifyArgs&, const Common&)> suites{
        {"baxter-eigen", suite_baxter_eigen}, {"mb-vs-givental", suite_mb},   {"stade", suite_stade},
        {"bump-friedberg", suite_bump},       {"barnes", suite_barnes},       {"tq-padic", suite_tq},
        {"toda", suite_toda},                 {"dual-baxter", suite_dual},    {"spherical-rank2", suite_spherical},
        {"commute", suite_commute}};
    auto it = suites.find(v.suite);
    if (it == suites.end()) throw FlagError("--suite", "unknown suite '" + v.suite + "'");
    return run_cases(it->second(v, c), c.workers);
}

int default_workers() {
    if (const char* e = std::getenv("TODA_WHITTAKER_WORKERS")) {
        try {
            int w = std::stoi(e);
            if (w >= 1) return w;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring TODA_WHITTAKER_WORKERS=" << e << '\n';
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whittaker functions, Baxter operators and local L-factors"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags override it");

    Common com;
    com.workers = default_workers();
    app.add_option("--tol", com.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--budget", com.budget, "quadrature evaluation budget")->check(CLI::PositiveNumber);
    app.add_option("--format", com.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--workers", com.workers, "worker threads (default $TODA_WHITTAKER_WORKERS or 1)")
        ->check(CLI::PositiveNumber);

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "evaluate a Whittaker function");
    ev->add_option("--algebra", ea.algebra, "gl1, gl2, gl3, so3, so5")->required();
    ev->add_option("--lambda", ea.lambda, "spectral parameters, comma separated (a, bi, a+bi)")->required();
    ev->add_option("--x", ea.x, "point, comma separated")->required();
    ev->add_option("--method", ea.method, "givental, recursive, mb, mixed, closed");
    ev->add_option("--word", ea.word, "mixed word, e.g. LR (outermost step first)");

    BaxterArgs ba;
    auto* bx = app.add_subcommand("baxter-apply", "apply a Baxter operator to an eigenfunction");
    bx->add_option("--algebra", ba.algebra, "gl1, gl2, gl3, so3")->required();
    bx->add_option("--gamma", ba.gamma, "Baxter parameter")->required();
    bx->add_option("--lambda", ba.lambda, "spectral parameters of the eigenfunction")->required();
    bx->add_option("--y", ba.y, "point")->required();
    bx->add_option("--convention", ba.convention, "lie, iwasawa, iwasawa-pi");
    bx->add_option("--delta", ba.delta, "required convergence margin")->check(CLI::PositiveNumber);

    VerifyArgs va;
    auto* vf = app.add_subcommand("verify", "run an identity suite");
    vf->add_option("--suite", va.suite, "baxter-eigen, mb-vs-givental, stade, bump-friedberg, barnes, tq-padic, "
                                        "toda, dual-baxter, spherical-rank2, commute")
        ->required();
    vf->add_option("--rank", va.rank, "rank (suite dependent)");
    vf->add_option("--n", va.n, "Satake class size for tq-padic");
    vf->add_option("--trials", va.trials, "number of random draws");
    vf->add_option("--seed", va.seed, "random seed");

    LfactorArgs la;
    auto* lf = app.add_subcommand("lfactor", "local L-factor");
    lf->add_option("--place", la.place, "inf or a prime p")->required();
    lf->add_option("--alpha", la.alpha, "Archimedean parameters");
    lf->add_option("--satake", la.satake, "Satake parameters (rationals for exact output)");
    lf->add_option("--s", la.s, "argument")->required();

    KernelArgs ka;
    auto* kn = app.add_subcommand("kernel", "kernel values for plotting");
    kn->add_option("--kind", ka.kind, "baxter, givental-step, stade, double-step, so-baxter")->required();
    kn->add_option("--gamma", ka.gamma, "Baxter parameter");
    kn->add_option("--lambda", ka.lambda, "spectral parameters");
    kn->add_option("--x", ka.x, "first argument")->required();
    kn->add_option("--y", ka.y, "second argument");
    kn->add_option("--scan", ka.scan, "index:lo:hi:count over --x");
    kn->add_option("--convention", ka.convention, "lie, iwasawa, iwasawa-pi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        std::vector<Record> rows;
        bool verify = false;
        if (*ev) rows.push_back(cmd_eval(ea, com));
        if (*bx) rows.push_back(cmd_baxter(ba, com));
        if (*lf) {
            if (la.place == "inf" && la.alpha.empty()) throw FlagError("--alpha", "required for --place inf");
            if (la.place != "inf" && la.satake.empty()) throw FlagError("--satake", "required for a finite place");
            rows.push_back(cmd_lfactor(la, com));
        }
        if (*kn) rows = cmd_kernel(ka, com);
        if (*vf) {
            rows = cmd_verify(va, com);
            verify = true;
        }
        emit(rows, com.format);
        if (verify)
            for (auto& r : rows)
                if (!r["pass"].get<bool>()) return 3;
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise --budget)\n";
        return 2;
    } catch (const FlagError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const RankError& e) {
        std::cerr << "error: --algebra: RankError: " << e.what() << '\n';
        return 1;
    } catch (const ShiftError& e) {
        std::cerr << "error: --gamma: ShiftError: " << e.what() << '\n';
        return 1;
    } catch (const PoleError& e) {
        std::cerr << "error: PoleError: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
