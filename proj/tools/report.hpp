#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "tw/errors.hpp"
#include "tw/local_lfactors.hpp"

namespace tw::report {

using Record = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Record complex_json(Complex z) { return Record{{"re", z.real()}, {"im", z.imag()}}; }

inline Record rational_json(const Rational& r) {
    return Record{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

// compact, fixed key order, floats at 17 significant digits
inline void dump(const Record& j, std::string& out) {
    switch (j.type()) {
        case Record::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Record(it.key()).dump();
                out += ':';
                dump(it.value(), out);
            }
            out += '}';
            break;
        }
        case Record::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump(j[i], out);
            }
            out += ']';
            break;
        }
        case Record::value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

inline std::string dump(const Record& j) {
    std::string s;
    dump(j, s);
    return s;
}

// nested objects become dotted columns
inline void flatten(const Record& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        std::string cell;
        for (size_t i = 0; i < j.size(); ++i) {
            if (i) cell += ' ';
            cell += j[i].is_string() ? j[i].get<std::string>() : dump(j[i]);
        }
        out.emplace_back(prefix, cell);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, dump(j));
    }
}

inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline std::string csv(const std::vector<Record>& rows) {
    std::string out;
    std::vector<std::string> header;
    for (size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::pair<std::string, std::string>> cells;
        flatten(rows[r], "", cells);
        if (r == 0) {
            for (size_t i = 0; i < cells.size(); ++i) {
                header.push_back(cells[i].first);
                out += (i ? "," : "") + csv_cell(cells[i].first);
            }
            out += '\n';
        }
        for (size_t i = 0; i < header.size(); ++i) {
            std::string v;
            for (auto& c : cells)
                if (c.first == header[i]) v = c.second;
            out += (i ? "," : "") + csv_cell(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace tw::report
