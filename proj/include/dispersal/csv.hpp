#pragma once
// CSV interchange for sweep tables and node profiles. Output is
// deterministic: 17 significant digits, '.' decimal point, '\n' endings,
// metadata lines prefixed with '#', one plain column-header row, then
// comma-separated data rows. Files are written atomically (temp + rename).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dispersal/analysis.hpp"
#include "dispersal/grid.hpp"
#include "dispersal/scenario.hpp"
#include "dispersal/solver.hpp"

namespace dispersal {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// %.17g: enough digits to reproduce any double exactly, locale-independent
// (the process never installs a locale).
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw CsvError("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f) throw CsvError("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CsvError("cannot open " + path);
    std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return out;
}

// Node profile of one solved steady state: x, u, K, P, r, residual per row.
inline std::string solve_csv(const std::string& scenario_name, const Problem& p,
                             const SolveResult& res) {
    ScalarField F = residual(res.u, p);
    const GridSpec& g = p.grid();
    std::string out;
    out += "# scenario = " + scenario_name + "\n";
    out += "# d = " + g17(p.d) + "\n";
    out += "# M = " + g17(integrate(res.u)) + "\n";
    out += "# intK = " + g17(integrate(p.K)) + "\n";
    out += "# iterations = " + std::to_string(res.iterations) + "\n";
    out += "# residual_norm = " + g17(res.residual_norm) + "\n";
    out += std::string("# method = ") + to_string(res.method) + "\n";
    out += "x,u,K,P,r,residual\n";
    for (int i = 0; i < g.n_nodes(); ++i) {
        out += g17(g.node(i)) + ',' + g17(res.u[i]) + ',' + g17(p.K[i]) + ',' + g17(p.P[i]) +
               ',' + g17(p.r[i]) + ',' + g17(F[i]) + '\n';
    }
    return out;
}

// Total-population curve: one row per d, headed by the scalar summary.
inline std::string sweep_csv(const SweepTable& t, const std::string& profile_shape) {
    std::string out;
    out += "# scenario = " + t.scenario_name + "\n";
    out += "# intK = " + g17(t.intK) + "\n";
    out += "# beta = " + g17(t.beta) + "\n";
    out += "# m_infinity = " + g17(t.m_inf) + "\n";
    out += "# profile_shape = " + profile_shape + "\n";
    out += "d,M,M_minus_intK,iterations,residual,method\n";
    for (const auto& row : t.rows) {
        out += g17(row.d) + ',' + g17(row.M) + ',' + g17(row.M_minus_intK) + ',' +
               std::to_string(row.iterations) + ',' + g17(row.residual) + ',' +
               to_string(row.method) + '\n';
    }
    return out;
}

// One row per exponent of a power-family panel.
inline std::string lambda_summary_csv(const std::string& scenario_name, double alpha,
                                      const std::vector<LambdaEntry>& entries,
                                      const std::vector<std::string>& shapes) {
    if (entries.size() != shapes.size())
        throw std::invalid_argument("lambda_summary_csv: one shape per entry required");
    std::string out;
    out += "# scenario = " + scenario_name + "\n";
    out += "# alpha = " + g17(alpha) + "\n";
    out += "lambda,m_infinity,max_M,argmax_d,profile_shape\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& t = entries[i].table;
        double max_M = t.rows.front().M;
        double argmax_d = t.rows.front().d;
        for (const auto& row : t.rows) {
            if (row.M > max_M) {
                max_M = row.M;
                argmax_d = row.d;
            }
        }
        out += g17(entries[i].lambda) + ',' + g17(t.m_inf) + ',' + g17(max_M) + ',' +
               g17(argmax_d) + ',' + shapes[i] + '\n';
    }
    return out;
}

struct ParsedCsv {
    std::map<std::string, std::string> meta;   // '#' lines, "key = value"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw CsvError("missing column '" + name + "'");
    }
};

namespace detail {

inline std::vector<std::string> split_csv_row(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(trim(line.substr(start)));
            break;
        }
        cells.emplace_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

}  // namespace detail

// Reads the format emitted above; tolerant of what it does not need,
// strict about structure (a column row plus at least one data row).
inline ParsedCsv parse_csv(std::string_view text) {
    using detail::trim;
    ParsedCsv out;
    std::size_t pos = 0;
    bool have_columns = false;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        std::string_view stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '#') {
            std::string_view body = trim(stripped.substr(1));
            std::size_t eq = body.find('=');
            if (eq != std::string_view::npos)
                out.meta[std::string(trim(body.substr(0, eq)))] =
                    std::string(trim(body.substr(eq + 1)));
            continue;
        }
        auto cells = detail::split_csv_row(stripped);
        if (!have_columns) {
            out.columns = std::move(cells);
            have_columns = true;
            continue;
        }
        if (cells.size() != out.columns.size())
            throw CsvError("row with " + std::to_string(cells.size()) + " cells under " +
                           std::to_string(out.columns.size()) + " columns");
        out.rows.push_back(std::move(cells));
    }
    if (!have_columns) throw CsvError("no column header row");
    if (out.rows.empty()) throw CsvError("no data rows");
    return out;
}

inline double csv_number(const std::string& cell) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (cell.empty() || end != begin + cell.size())
        throw CsvError("expected a number, got '" + cell + "'");
    return v;
}

}  // namespace dispersal
