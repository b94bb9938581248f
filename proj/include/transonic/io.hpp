#pragma once

// File formats: CSV readers/writers for fields, eigenvalue branches, decay
// profiles and growth reports, plus the JSON coefficient dump for series.
// All floating-point output uses 17 significant digits so files round-trip
// exactly and repeated runs are byte-identical.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "transonic/eigen2.hpp"
#include "transonic/error.hpp"
#include "transonic/fbi.hpp"
#include "transonic/gas.hpp"
#include "transonic/growth.hpp"
#include "transonic/series.hpp"

namespace transonic {

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        std::size_t a = s.find_first_not_of(" \t");
        std::size_t b = s.find_last_not_of(" \t");
        s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    }
    return out;
}

inline double parse_double_field(const std::string& s, std::size_t row, const char* col) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error("cli", "row " + std::to_string(row) + ": cannot parse column '" + col +
                               "' from '" + s + "'");
    }
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
    if (!out) throw Error("cli", "cannot open '" + path + "' for writing");
    return out;
}

}  // namespace detail

/// One record of the field CSV `x,T,u1,u2`.
struct FieldRecord {
    double x, T, u1, u2;
};

/// Read the field CSV (header `x,T,u1,u2` required).  Malformed rows raise
/// errors carrying 1-based row numbers (header is row 1).
inline std::vector<FieldRecord> read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cli", "cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw Error("cli", "empty field file '" + path + "'");
    auto hdr = detail::split_csv_line(line);
    if (hdr != std::vector<std::string>{"x", "T", "u1", "u2"})
        throw Error("cli", "row 1: expected header 'x,T,u1,u2'");
    std::vector<FieldRecord> rows;
    std::size_t rowno = 1;
    while (std::getline(in, line)) {
        ++rowno;
        if (line.empty() || line == "\r") continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 4)
            throw Error("cli", "row " + std::to_string(rowno) + ": expected 4 columns, got " +
                                   std::to_string(f.size()));
        rows.push_back({detail::parse_double_field(f[0], rowno, "x"),
                        detail::parse_double_field(f[1], rowno, "T"),
                        detail::parse_double_field(f[2], rowno, "u1"),
                        detail::parse_double_field(f[3], rowno, "u2")});
    }
    return rows;
}

/// Assemble flat records into the rectangular grid; records may arrive in any
/// order but must tile a full (x, T) product grid.
inline VelocityField field_from_records(const std::vector<FieldRecord>& records) {
    require(!records.empty(), "cli", "field file contains no data rows");
    std::vector<double> xs, ts;
    for (const auto& r : records) {
        xs.push_back(r.x);
        ts.push_back(r.T);
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(xs);
    uniq(ts);
    require(xs.size() * ts.size() == records.size(), "cli",
            "field rows do not tile a full x-by-T grid");
    VelocityField f;
    f.xs = xs;
    f.ts = ts;
    f.states.assign(ts.size(), std::vector<FlowState>(xs.size()));
    std::vector<std::vector<bool>> seen(ts.size(), std::vector<bool>(xs.size(), false));
    for (const auto& r : records) {
        std::size_t ix = std::lower_bound(xs.begin(), xs.end(), r.x) - xs.begin();
        std::size_t it = std::lower_bound(ts.begin(), ts.end(), r.T) - ts.begin();
        require(!seen[it][ix], "cli", "duplicate grid node in field file");
        seen[it][ix] = true;
        f.states[it][ix] = FlowState{r.u1, r.u2};
    }
    f.validate();
    return f;
}

/// Classification map CSV: `x,T,regime` with regime letter E/H/S.
inline void write_classification_csv(const std::string& path, const GasModel& m,
                                     const VelocityField& f, double tol = -1.0) {
    auto out = detail::open_out(path);
    out << "x,T,regime\n";
    for (std::size_t it = 0; it < f.ts.size(); ++it)
        for (std::size_t ix = 0; ix < f.xs.size(); ++ix)
            out << g17(f.xs[ix]) << ',' << g17(f.ts[it]) << ','
                << regime_letter(classify(m, f.states[it][ix], tol)) << '\n';
}

/// Sonic-line CSV: midpoints of straddling edges, `x,T`.
inline void write_sonic_csv(const std::string& path, const VelocityField& f,
                            const std::vector<SonicEdge>& edges) {
    auto out = detail::open_out(path);
    out << "x,T\n";
    for (const auto& e : edges) {
        double x = 0.5 * (f.xs[e.ix_a] + f.xs[e.ix_b]);
        double t = 0.5 * (f.ts[e.it_a] + f.ts[e.it_b]);
        out << g17(x) << ',' << g17(t) << '\n';
    }
}

/// Eigenvalue branch CSV: `t,re_lambda1,im_lambda1,re_lambda2,im_lambda2`.
inline void write_branch_csv(const std::string& path, const BranchPath& b) {
    auto out = detail::open_out(path);
    out << "t,re_lambda1,im_lambda1,re_lambda2,im_lambda2\n";
    for (std::size_t i = 0; i < b.ts.size(); ++i)
        out << g17(b.ts[i]) << ',' << g17(b.lambdas[0][i].real()) << ','
            << g17(b.lambdas[0][i].imag()) << ',' << g17(b.lambdas[1][i].real()) << ','
            << g17(b.lambdas[1][i].imag()) << '\n';
}

/// Decay profile CSV: `mu,weighted_log_abs`.
inline void write_profile_csv(const std::string& path, const std::vector<double>& mus,
                              const std::vector<double>& weighted_log_abs) {
    require(mus.size() == weighted_log_abs.size(), "cli", "profile column length mismatch");
    auto out = detail::open_out(path);
    out << "mu,weighted_log_abs\n";
    for (std::size_t i = 0; i < mus.size(); ++i)
        out << g17(mus[i]) << ',' << g17(weighted_log_abs[i]) << '\n';
}

/// Growth report CSV: `k,numerator,denominator,ratio`.
inline void write_growth_csv(const std::string& path, const GrowthReport& r) {
    auto out = detail::open_out(path);
    out << "k,numerator,denominator,ratio\n";
    for (const auto& row : r.rows)
        out << row.k << ',' << g17(row.numerator) << ',' << g17(row.denominator) << ','
            << g17(row.ratio) << '\n';
}

/// Series coefficient dump: {"T0": ..., "x0": ..., "N": ..., "coeffs":
/// [[m, n, re, im], ...]} with rows in graded order, zero rows omitted.
inline nlohmann::ordered_json series_to_json(const BivariateSeries& s) {
    nlohmann::ordered_json j;
    j["T0"] = s.t0();
    j["x0"] = s.x0();
    j["N"] = s.degree();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int d = 0; d <= s.degree(); ++d)
        for (int m = 0; m <= d; ++m) {
            int n = d - m;
            cd c = s.coeff(m, n);
            if (c == cd(0.0, 0.0)) continue;
            rows.push_back({m, n, c.real(), c.imag()});
        }
    j["coeffs"] = rows;
    return j;
}

inline BivariateSeries series_from_json(const nlohmann::json& j) {
    for (const auto& [key, _] : j.items())
        require(key == "T0" || key == "x0" || key == "N" || key == "coeffs", "series",
                "unknown key '" + key + "' in series JSON");
    require(j.contains("T0") && j.contains("x0") && j.contains("N") && j.contains("coeffs"),
            "series", "series JSON needs keys T0, x0, N, coeffs");
    BivariateSeries s(j.at("T0").get<double>(), j.at("x0").get<double>(), j.at("N").get<int>());
    for (const auto& row : j.at("coeffs")) {
        require(row.is_array() && row.size() == 4, "series",
                "series JSON coefficient rows must be [m, n, re, im]");
        int m = row[0].get<int>();
        int n = row[1].get<int>();
        require(m >= 0 && n >= 0 && m + n <= s.degree(), "series",
                "series JSON coefficient index outside the degree triangle");
        s.at(m, n) = cd(row[2].get<double>(), row[3].get<double>());
    }
    return s;
}

}  // namespace transonic
