#include <doctest.h>

#include <random>

#include "report.hpp"

using namespace tw;
using report::Record;

TEST_CASE("floats at 17 digits round-trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 200; ++k) {
        double v = u(rng) * std::pow(10.0, double(k % 40) - 20);
        Record r{{"case", "x"}, {"v", report::complex_json(Complex(v, -v / 3))}, {"pass", true}};
        std::string s = report::dump(r);
        auto back = Record::parse(s);
        CHECK(back["v"]["re"].get<double>() == v);
        CHECK(report::dump(back) == s);
    }
    CHECK(report::fmt17(0.1) == "0.10000000000000001");
}

TEST_CASE("rationals serialize as strings") {
    Rational big = Rational(boost::multiprecision::cpp_int("123456789012345678901234567891"), 2);
    auto j = report::rational_json(big);
    CHECK(report::dump(j) == "{\"num\":\"123456789012345678901234567891\",\"den\":\"2\"}");
    CHECK(report::dump(Record::parse(report::dump(j))) == report::dump(j));
}

TEST_CASE("csv flattening") {
    std::vector<Record> rows{Record{{"case", "a,b"}, {"z", report::complex_json(Complex(1, 2))}, {"x", {0.5, 1.0}}},
                             Record{{"case", "c"}, {"z", report::complex_json(Complex(3, 4))}, {"x", {2.0}}}};
    CHECK(report::csv(rows) == "case,z.re,z.im,x\n\"a,b\",1,2,0.5 1\nc,3,4,2\n");
}
