#pragma once
// Scenario definitions: closed-form K(x), P(x) plus either a closed-form
// growth rate r(x) or the power family r = alpha * (K/P)^lambda, together
// with the grid, the d-grid for sweeps, and solver tolerances.
//
// Scenarios come from key = value config files or from the built-in table.
// All fields are validated strictly positive at load time by sampling on a
// 4x refined grid, so downstream code can assume assumption-compatible data.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dispersal/expr.hpp"
#include "dispersal/grid.hpp"
#include "dispersal/solver.hpp"

namespace dispersal {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownExample : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// r = alpha * (K/P)^lambda, sampled nodewise from the K and P fields.
struct PowerGrowth {
    double lambda = 1.0;
    double alpha = 1.0;
};

// Raw key = value content of a scenario file; unset optionals fall back to
// the documented defaults. Exactly one of r / r_lambda must be given.
struct ScenarioConfig {
    std::string name = "custom";
    std::string K;
    std::string P;
    std::optional<std::string> r;
    std::optional<double> r_lambda;
    std::optional<double> r_alpha;
    double x0 = 0.0;
    double x1 = 1.0;
    int n_cells = 512;
    double d_min = 1e-4;
    double d_max = 1e4;
    int d_points = 81;
    double newton_tol = 1e-10;
    double pt_tol = 1e-8;
};

// Nodewise r = alpha * (K/P)^lambda. lambda = 0 and 1 bypass pow so the
// constant and quotient cases are exact.
inline ScalarField power_family_rate(const ScalarField& K, const ScalarField& P,
                                     const PowerGrowth& pw) {
    return zip(K, P, [&](double k, double p) {
        double q = k / p;
        double s = pw.lambda == 0.0 ? 1.0 : pw.lambda == 1.0 ? q : std::pow(q, pw.lambda);
        return pw.alpha * s;
    });
}

namespace detail {

inline std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace detail

class Scenario {
  public:
    const std::string& name() const { return cfg_.name; }
    GridSpec grid() const { return GridSpec(cfg_.x0, cfg_.x1, cfg_.n_cells); }
    const SolverOptions& options() const { return opts_; }

    const Expression& K() const { return K_expr_; }
    const Expression& P() const { return P_expr_; }

    bool has_power_growth() const { return power_.has_value(); }
    const PowerGrowth& power_growth() const {
        if (!power_) throw std::logic_error("Scenario: growth rate is an expression, not a power law");
        return *power_;
    }
    const Expression& r() const {
        if (!r_expr_) throw std::logic_error("Scenario: growth rate is a power law, not an expression");
        return *r_expr_;
    }

    ScalarField sample_K(const GridSpec& g) const { return sample(K_expr_, g); }
    ScalarField sample_P(const GridSpec& g) const { return sample(P_expr_, g); }
    ScalarField sample_r(const GridSpec& g) const {
        if (r_expr_) return sample(*r_expr_, g);
        return power_family_rate(sample_K(g), sample_P(g), *power_);
    }
    ScalarField sample_K() const { return sample_K(grid()); }
    ScalarField sample_P() const { return sample_P(grid()); }
    ScalarField sample_r() const { return sample_r(grid()); }

    std::vector<double> d_grid() const {
        return log_spaced(cfg_.d_min, cfg_.d_max, cfg_.d_points);
    }

    const ScenarioConfig& config() const { return cfg_; }

    // Derived scenario with the power-law exponent replaced; the growth rate
    // must already be a power law.
    Scenario with_lambda(double lambda) const {
        if (!power_)
            throw ConfigError("with_lambda: scenario '" + cfg_.name +
                              "' does not use the power-law growth rate");
        ScenarioConfig c = cfg_;
        c.r_lambda = lambda;
        return Scenario(c);
    }

    Scenario with_resolution(int n_cells) const {
        ScenarioConfig c = cfg_;
        c.n_cells = n_cells;
        return Scenario(c);
    }

    Scenario with_d_grid(double d_min, double d_max, int points) const {
        ScenarioConfig c = cfg_;
        c.d_min = d_min;
        c.d_max = d_max;
        c.d_points = points;
        return Scenario(c);
    }

    // Config-file text that load_scenario() maps back to this scenario.
    // Expression sources are kept verbatim and numbers use the shortest
    // round-trip form, so sampled fields survive the round trip bit-exactly.
    std::string serialize() const {
        using detail::format_number;
        std::string out;
        out += "name = " + cfg_.name + "\n";
        out += "K = \"" + K_expr_.source() + "\"\n";
        out += "P = \"" + P_expr_.source() + "\"\n";
        if (r_expr_) {
            out += "r = \"" + r_expr_->source() + "\"\n";
        } else {
            out += "r_lambda = " + format_number(power_->lambda) + "\n";
            out += "r_alpha = " + format_number(power_->alpha) + "\n";
        }
        out += "x0 = " + format_number(cfg_.x0) + "\n";
        out += "x1 = " + format_number(cfg_.x1) + "\n";
        out += "n_cells = " + std::to_string(cfg_.n_cells) + "\n";
        out += "d_min = " + format_number(cfg_.d_min) + "\n";
        out += "d_max = " + format_number(cfg_.d_max) + "\n";
        out += "d_points = " + std::to_string(cfg_.d_points) + "\n";
        out += "newton_tol = " + format_number(cfg_.newton_tol) + "\n";
        out += "pt_tol = " + format_number(cfg_.pt_tol) + "\n";
        return out;
    }

    explicit Scenario(const ScenarioConfig& cfg)
        : cfg_(cfg), K_expr_(parse_field(cfg.K, "K")), P_expr_(parse_field(cfg.P, "P")) {
        if (cfg.r && (cfg.r_lambda || cfg.r_alpha))
            throw ConfigError("r and r_lambda/r_alpha are mutually exclusive");
        if (cfg.r) {
            r_expr_ = parse_field(*cfg.r, "r");
        } else if (cfg.r_lambda) {
            PowerGrowth pw;
            pw.lambda = *cfg.r_lambda;
            pw.alpha = cfg.r_alpha.value_or(1.0);
            if (!std::isfinite(pw.lambda))
                throw ConfigError("r_lambda must be finite");
            if (!(pw.alpha > 0.0) || !std::isfinite(pw.alpha))
                throw ConfigError("r_alpha must be positive and finite");
            power_ = pw;
            cfg_.r_alpha = pw.alpha;
        } else if (cfg.r_alpha) {
            throw ConfigError("r_alpha given without r_lambda");
        } else {
            throw ConfigError("missing key r (or r_lambda for the power family)");
        }

        try {
            GridSpec g(cfg.x0, cfg.x1, cfg.n_cells);  // validates the domain itself
            (void)g;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!(cfg.d_min > 0.0) || !std::isfinite(cfg.d_min))
            throw ConfigError("d_min must be positive and finite");
        if (!(cfg.d_max > cfg.d_min) || !std::isfinite(cfg.d_max))
            throw ConfigError("d_max must exceed d_min and be finite");
        if (cfg.d_points < 2) throw ConfigError("d_points must be at least 2");
        if (!(cfg.newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
        if (!(cfg.pt_tol > 0.0)) throw ConfigError("pt_tol must be positive");
        opts_.newton_tol = cfg.newton_tol;
        opts_.pt_tol = cfg.pt_tol;

        // Positivity guard on a 4x refined grid: catches sign dips between
        // the working grid's nodes.
        GridSpec fine(cfg.x0, cfg.x1, 4 * cfg.n_cells);
        require_positive(sample_checked(K_expr_, fine, "K"), fine, "K");
        require_positive(sample_checked(P_expr_, fine, "P"), fine, "P");
        if (r_expr_) {
            require_positive(sample_checked(*r_expr_, fine, "r"), fine, "r");
        } else {
            try {
                require_positive(power_family_rate(sample_K(fine), sample_P(fine), *power_),
                                 fine, "r");
            } catch (const std::invalid_argument& e) {
                // (K/P)^lambda overflowed or lost finiteness
                throw ConfigError(std::string("r fails to evaluate: ") + e.what());
            }
        }
    }

  private:
    static Expression parse_field(const std::string& src, const char* key) {
        if (src.empty()) throw ConfigError(std::string("missing key ") + key);
        try {
            return parse(src);
        } catch (const SyntaxError& e) {
            throw ConfigError(std::string("in ") + key + ": " + e.what());
        }
    }

    static ScalarField sample_checked(const Expression& e, const GridSpec& g, const char* key) {
        try {
            return sample(e, g);
        } catch (const DomainError& err) {
            throw ConfigError(std::string(key) + " fails to evaluate: " + err.what());
        }
    }

    static void require_positive(const ScalarField& f, const GridSpec& g, const char* key) {
        for (int i = 0; i <= g.n_cells; ++i) {
            if (!(f[static_cast<std::size_t>(i)] > 0.0))
                throw ConfigError(std::string(key) + " must be strictly positive; value " +
                                  detail::format_number(f[static_cast<std::size_t>(i)]) +
                                  " at x = " + detail::format_number(g.node(i)));
        }
    }

    ScenarioConfig cfg_;
    Expression K_expr_;
    Expression P_expr_;
    std::optional<Expression> r_expr_;
    std::optional<PowerGrowth> power_;
    SolverOptions opts_;
};

inline Scenario make_scenario(const ScenarioConfig& cfg) { return Scenario(cfg); }

namespace detail {

inline double parse_double(std::string_view value, int line_no, std::string_view key) {
    std::string s(value);
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || s.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) +
                          "' expects a number, got '" + s + "'");
    return v;
}

inline int parse_int(std::string_view value, int line_no, std::string_view key) {
    std::string s(value);
    const char* begin = s.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end != begin + s.size() || s.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) +
                          "' expects an integer, got '" + s + "'");
    return static_cast<int>(v);
}

inline std::string parse_quoted(std::string_view value, int line_no, std::string_view key) {
    if (value.size() < 2 || value.front() != '"' || value.back() != '"')
        throw ConfigError("line " + std::to_string(line_no) + ": key '" + std::string(key) +
                          "' expects a double-quoted expression");
    return std::string(value.substr(1, value.size() - 2));
}

}  // namespace detail

// Parses the key = value scenario format: one assignment per line, full-line
// '#' comments, double-quoted expression values. Unknown and repeated keys
// are errors; K, P, and a growth rate are required.
inline Scenario load_scenario(std::string_view text) {
    using detail::trim;
    ScenarioConfig cfg;
    std::vector<std::string> seen;
    auto mark = [&](std::string_view key, int line_no) {
        for (const auto& s : seen)
            if (s == key)
                throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                                  std::string(key) + "'");
        seen.emplace_back(key);
    };

    int line_no = 0;
    std::size_t pos = 0;
    bool saw_K = false, saw_P = false;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos
                                                                              : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string_view key = trim(stripped.substr(0, eq));
        std::string_view value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        mark(key, line_no);

        if (key == "name") cfg.name = std::string(value);
        else if (key == "K") { cfg.K = detail::parse_quoted(value, line_no, key); saw_K = true; }
        else if (key == "P") { cfg.P = detail::parse_quoted(value, line_no, key); saw_P = true; }
        else if (key == "r") cfg.r = detail::parse_quoted(value, line_no, key);
        else if (key == "r_lambda") cfg.r_lambda = detail::parse_double(value, line_no, key);
        else if (key == "r_alpha") cfg.r_alpha = detail::parse_double(value, line_no, key);
        else if (key == "x0") cfg.x0 = detail::parse_double(value, line_no, key);
        else if (key == "x1") cfg.x1 = detail::parse_double(value, line_no, key);
        else if (key == "n_cells") cfg.n_cells = detail::parse_int(value, line_no, key);
        else if (key == "d_min") cfg.d_min = detail::parse_double(value, line_no, key);
        else if (key == "d_max") cfg.d_max = detail::parse_double(value, line_no, key);
        else if (key == "d_points") cfg.d_points = detail::parse_int(value, line_no, key);
        else if (key == "newton_tol") cfg.newton_tol = detail::parse_double(value, line_no, key);
        else if (key == "pt_tol") cfg.pt_tol = detail::parse_double(value, line_no, key);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
    }
    if (!saw_K) throw ConfigError("missing key K");
    if (!saw_P) throw ConfigError("missing key P");
    return Scenario(cfg);
}

inline const std::vector<std::string>& builtin_example_ids() {
    static const std::vector<std::string> ids = {
        "ex4.1a", "ex4.1b", "ex4.2a", "ex4.2b",
        "ex4.3",  "ex4.4",  "pk_manufactured", "a1_demo",
    };
    return ids;
}

// The built-in scenario table. ex4.4 defaults to lambda = 1; use
// with_lambda() for other exponents of its power-law growth rate.
inline Scenario builtin_example(const std::string& id) {
    ScenarioConfig cfg;
    cfg.name = id;
    if (id == "ex4.1a") {
        cfg.K = "(cos(2*pi*x)+2)^2";
        cfg.P = "cos(2*pi*x)+2";  // equals sqrt(K) on the positive branch
        cfg.r = "cos(pi*x)+2";
    } else if (id == "ex4.1b") {
        cfg.K = "(2*x^3-3*x^2+3)*exp(2*x^3-3*x^2)";
        cfg.P = "exp(2*x^3-3*x^2)";
        cfg.r = "cos(2*pi*x)+3";
    } else if (id == "ex4.2a") {
        cfg.K = "2+cos(pi*x)";
        cfg.P = "1+cos(pi*x)/5";
        cfg.r = "5/4+cos(pi*x)/4";
    } else if (id == "ex4.2b") {
        cfg.K = "2+cos(pi*x)";
        cfg.P = "1+cos(pi*x)/5";
        cfg.r = "exp(4*cos(pi*x))";
    } else if (id == "ex4.3") {
        cfg.K = "0.1+cos(pi*x)+5*cos(pi*x)^2-2*cos(pi*x)^3";
        cfg.P = "1.5-3*cos(pi*x)+cos(pi*x)^2+3*cos(pi*x)^6";
        cfg.r_lambda = 1.0;  // r = K/P nodewise
        cfg.r_alpha = 1.0;
    } else if (id == "ex4.4") {
        cfg.K = "2+cos(pi*x)";
        cfg.P = "2-cos(2*pi*x)";
        cfg.r_lambda = 1.0;
        cfg.r_alpha = 1.0;
    } else if (id == "pk_manufactured") {
        cfg.K = "2+cos(pi*x)";
        cfg.P = "2+cos(pi*x)";  // P = K makes u = K an exact steady state
        cfg.r = "2+cos(pi*x)";
    } else if (id == "a1_demo") {
        cfg.K = "2+cos(pi*x)";
        cfg.P = "2-cos(pi*x)";  // K and P anti-correlated, r = K
        cfg.r = "2+cos(pi*x)";
    } else {
        throw UnknownExample("unknown example '" + id + "'");
    }
    return Scenario(cfg);
}

}  // namespace dispersal
