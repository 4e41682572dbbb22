#pragma once
// Steady states of  d * Lap(u/P) + r * u * (1 - u/K) = 0  with the no-flux
// condition d/dn (u/P) = 0 discretised by mirror ghosts (see grid.hpp).
//
// Two independent paths to the root: a damped Newton iteration on the full
// nonlinear system, and a diffusion-implicit / reaction-explicit time
// marcher. Continuation in d uses Newton warm-started from the previous
// solution and falls back to the marcher.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dispersal/grid.hpp"

namespace dispersal {

struct SingularJacobian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepFailure : std::runtime_error {
    double d;
    double lambda;  // NaN unless raised inside a lambda sweep
    SweepFailure(double d_, const std::string& msg)
        : std::runtime_error(msg),
          d(d_),
          lambda(std::numeric_limits<double>::quiet_NaN()) {}
    SweepFailure(double d_, double lambda_, const std::string& msg)
        : std::runtime_error(msg), d(d_), lambda(lambda_) {}
};

struct SolverOptions {
    double newton_tol = 1e-10;
    int max_newton_iters = 50;
    double min_damping = 9.5367431640625e-07;  // 2^-20
    double pt_tol = 1e-8;
    int pt_max_steps = 200000;
};

enum class SolveMethod { newton, pseudo_transient };

inline const char* to_string(SolveMethod m) {
    return m == SolveMethod::newton ? "newton" : "pseudo_transient";
}

struct SolveResult {
    ScalarField u;
    int iterations;
    double residual_norm;
    double residual_tolerance;  // tolerance actually enforced (see residual_floor)
    bool converged;
    SolveMethod method;
};

struct Problem {
    double d;
    ScalarField K, P, r;

    Problem(double d_, ScalarField K_, ScalarField P_, ScalarField r_)
        : d(d_), K(std::move(K_)), P(std::move(P_)), r(std::move(r_)) {
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("Problem: d must be positive and finite");
        require_same_grid(K, P);
        require_same_grid(K, r);
        if (min_value(K) <= 0.0 || min_value(P) <= 0.0 || min_value(r) <= 0.0)
            throw std::invalid_argument("Problem: K, P, r must be strictly positive");
    }

    const GridSpec& grid() const { return K.grid(); }
};

// F(u) = d * Lap(u/P) + r * u * (1 - u/K), evaluated nodewise. At u = K
// with P proportional to K both terms vanish exactly in floating point.
inline ScalarField residual(const ScalarField& u, const Problem& p) {
    require_same_grid(u, p.K);
    ScalarField lap = neumann_laplacian(u / p.P);
    std::vector<double> out(u.size());
    for (int i = 0; i < u.size(); ++i)
        out[i] = p.d * lap[i] + p.r[i] * u[i] * (1.0 - u[i] / p.K[i]);
    return ScalarField(u.grid(), std::move(out));
}

struct Tridiagonal {
    std::vector<double> sub;    // length n-1, row i couples to column i-1
    std::vector<double> diag;   // length n
    std::vector<double> super;  // length n-1, row i couples to column i+1
};

// dF/du: the Laplacian acts on u/P, so column j carries 1/P_j; the reaction
// contributes r_i (1 - 2 u_i / K_i) on the diagonal. Boundary rows take the
// doubled mirror-ghost coupling.
inline Tridiagonal jacobian(const ScalarField& u, const Problem& p) {
    require_same_grid(u, p.K);
    const int n = u.size();
    const double c = p.d / (u.grid().h * u.grid().h);
    Tridiagonal m;
    m.sub.resize(n - 1);
    m.diag.resize(n);
    m.super.resize(n - 1);
    for (int i = 0; i < n; ++i)
        m.diag[i] = -2.0 * c / p.P[i] + p.r[i] * (1.0 - 2.0 * u[i] / p.K[i]);
    m.super[0] = 2.0 * c / p.P[1];
    for (int i = 1; i + 1 < n; ++i) {
        m.sub[i - 1] = c / p.P[i - 1];
        m.super[i] = c / p.P[i + 1];
    }
    m.sub[n - 2] = 2.0 * c / p.P[n - 2];
    return m;
}

// Thomas elimination with a pivot guard relative to the row's magnitude.
inline std::vector<double> thomas_solve(const Tridiagonal& m, std::vector<double> rhs) {
    const int n = static_cast<int>(m.diag.size());
    if (static_cast<int>(rhs.size()) != n ||
        static_cast<int>(m.sub.size()) != n - 1 ||
        static_cast<int>(m.super.size()) != n - 1)
        throw std::invalid_argument("thomas_solve: inconsistent dimensions");

    auto row_scale = [&](int i) {
        double s = std::abs(m.diag[i]);
        if (i > 0) s = std::max(s, std::abs(m.sub[i - 1]));
        if (i + 1 < n) s = std::max(s, std::abs(m.super[i]));
        return s;
    };

    std::vector<double> c(n - 1), x(std::move(rhs));
    double pivot = m.diag[0];
    if (std::abs(pivot) < 1e-13 * row_scale(0))
        throw SingularJacobian("thomas_solve: vanishing pivot in row 0");
    c[0] = m.super[0] / pivot;
    x[0] /= pivot;
    for (int i = 1; i < n; ++i) {
        pivot = m.diag[i] - m.sub[i - 1] * c[i - 1];
        if (std::abs(pivot) < 1e-13 * row_scale(i))
            throw SingularJacobian("thomas_solve: vanishing pivot in row " + std::to_string(i));
        if (i + 1 < n) c[i] = m.super[i] / pivot;
        x[i] = (x[i] - m.sub[i - 1] * x[i - 1]) / pivot;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
}

// Double precision cannot evaluate d * Lap(u/P) below the cancellation
// noise of the second difference, about eps * d * max|u/P| / h^2. Newton
// accepts a stalled iteration whose residual sits inside this floor (the
// digits it is missing do not exist), and the time marcher stops at
// max(pt_tol, floor). For d below ~0.3 at default resolution the floor
// sits under the configured tolerances and never engages.
inline double residual_floor(const Problem& p, const ScalarField& u) {
    double wmax = 0.0;
    for (int i = 0; i < u.size(); ++i)
        wmax = std::max(wmax, std::abs(u[i]) / p.P[i]);
    const double h = u.grid().h;
    return 16.0 * std::numeric_limits<double>::epsilon() * p.d * wmax / (h * h);
}

namespace detail {
inline void require_positive_start(const ScalarField& u0) {
    if (min_value(u0) <= 0.0)
        throw std::invalid_argument("solver: initial state must be strictly positive");
}
}  // namespace detail

// Damped Newton: solve J delta = -F, halve the step until the residual
// decreases and positivity is kept. Iterates until the residual reaches
// newton_tol; if progress stalls first (damping underflow, singular
// Jacobian, iteration limit) the state is still accepted when the residual
// sits inside the roundoff floor, since no further digits exist at that
// point. Otherwise NoConvergence is thrown and continuation falls back to
// the time marcher.
inline SolveResult newton_solve(const Problem& p, const ScalarField& u0,
                                const SolverOptions& opts = {}) {
    require_same_grid(u0, p.K);
    detail::require_positive_start(u0);

    ScalarField u = u0;
    ScalarField F = residual(u, p);
    double rn = sup_norm(F);

    auto accept_floor = [&]() { return std::max(opts.newton_tol, residual_floor(p, u)); };
    auto stalled = [&](const std::string& why) -> SolveResult {
        double floor = accept_floor();
        if (rn <= floor) return {u, 0, rn, floor, true, SolveMethod::newton};
        throw NoConvergence("newton_solve: " + why + " at residual " + std::to_string(rn));
    };

    for (int iter = 0; iter <= opts.max_newton_iters; ++iter) {
        if (rn <= opts.newton_tol)
            return {u, iter, rn, opts.newton_tol, true, SolveMethod::newton};
        if (iter == opts.max_newton_iters) {
            auto res = stalled("iteration limit");
            res.iterations = iter;
            return res;
        }

        std::vector<double> delta;
        try {
            std::vector<double> neg(F.size());
            for (int i = 0; i < F.size(); ++i) neg[i] = -F[i];
            delta = thomas_solve(jacobian(u, p), std::move(neg));
        } catch (const SingularJacobian& e) {
            auto res = stalled(e.what());
            res.iterations = iter;
            return res;
        }

        double s = 1.0;
        for (;;) {
            std::vector<double> trial(u.size());
            bool positive = true;
            for (int i = 0; i < u.size(); ++i) {
                trial[i] = u[i] + s * delta[i];
                if (!(trial[i] > 0.0)) positive = false;
            }
            if (positive) {
                ScalarField u_trial(u.grid(), std::move(trial));
                ScalarField F_trial = residual(u_trial, p);
                double rn_trial = sup_norm(F_trial);
                if (rn_trial < rn) {
                    u = std::move(u_trial);
                    F = std::move(F_trial);
                    rn = rn_trial;
                    break;
                }
            }
            s *= 0.5;
            if (s < opts.min_damping) {
                auto res = stalled("damping underflow");
                res.iterations = iter;
                return res;
            }
        }
    }
    throw std::logic_error("unreachable");
}

// Semi-implicit march to steady state: diffusion implicit, reaction
// explicit,
//   (I - dt * d * Lap(./P)) u_next = u + dt * r u (1 - u/K).
// The step grows by switched evolution relaxation dt0 * |F0|/|Fk| but is
// held inside the explicit stability window 1.5 / max|r (1 - 2u/K)| (an
// uncapped step turns the reaction update into a bounded limit cycle) and
// at most doubles per step. A step that loses positivity is halved and
// retried.
inline SolveResult pseudo_transient(const Problem& p, const ScalarField& u0,
                                    const SolverOptions& opts = {}) {
    require_same_grid(u0, p.K);
    detail::require_positive_start(u0);

    const int n = u0.size();
    const double h2 = u0.grid().h * u0.grid().h;

    ScalarField u = u0;
    double rn = sup_norm(residual(u, p));
    const double rn0 = rn;
    double tol = std::max(opts.pt_tol, residual_floor(p, u));
    if (rn <= tol) return {u, 0, rn, tol, true, SolveMethod::pseudo_transient};

    const double dt0 = 0.1 / max_value(p.r);
    double dt_prev = dt0;

    for (int step = 1; step <= opts.pt_max_steps; ++step) {
        double rho = 0.0;
        for (int i = 0; i < n; ++i)
            rho = std::max(rho, std::abs(p.r[i] * (1.0 - 2.0 * u[i] / p.K[i])));
        double dt = std::min({dt0 * rn0 / rn, 2.0 * dt_prev, 1.5 / std::max(rho, 1e-12)});

        ScalarField u_next = u;
        for (int attempt = 0;; ++attempt) {
            Tridiagonal m;
            m.sub.resize(n - 1);
            m.diag.resize(n);
            m.super.resize(n - 1);
            const double c = dt * p.d / h2;
            for (int i = 0; i < n; ++i) m.diag[i] = 1.0 + 2.0 * c / p.P[i];
            m.super[0] = -2.0 * c / p.P[1];
            for (int i = 1; i + 1 < n; ++i) {
                m.sub[i - 1] = -c / p.P[i - 1];
                m.super[i] = -c / p.P[i + 1];
            }
            m.sub[n - 2] = -2.0 * c / p.P[n - 2];

            std::vector<double> rhs(n);
            for (int i = 0; i < n; ++i)
                rhs[i] = u[i] + dt * p.r[i] * u[i] * (1.0 - u[i] / p.K[i]);

            std::vector<double> next = thomas_solve(m, std::move(rhs));
            bool positive = true;
            for (double v : next)
                if (!(v > 0.0)) { positive = false; break; }
            if (positive) {
                u_next = ScalarField(u.grid(), std::move(next));
                break;
            }
            dt *= 0.5;
            if (attempt > 60)
                throw NoConvergence("pseudo_transient: cannot keep the state positive");
        }

        u = std::move(u_next);
        dt_prev = dt;
        rn = sup_norm(residual(u, p));
        tol = std::max(opts.pt_tol, residual_floor(p, u));
        if (rn <= tol) return {u, step, rn, tol, true, SolveMethod::pseudo_transient};
    }
    throw NoConvergence("pseudo_transient: step limit at residual " + std::to_string(rn));
}

inline std::vector<double> log_spaced(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_spaced: requires 0 < lo < hi and points >= 2");
    std::vector<double> out(points);
    const double la = std::log(lo), lb = std::log(hi);
    for (int j = 0; j < points; ++j)
        out[j] = std::exp(la + (lb - la) * j / (points - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

// Sweep d upward: start from u = K at the smallest d (the steady state
// tends to K there), warm-start each subsequent solve, and fall back to the
// time marcher when Newton gives up. Every returned entry is converged.
inline std::vector<SolveResult> continuation_sweep(const ScalarField& K,
                                                   const ScalarField& P,
                                                   const ScalarField& r,
                                                   const std::vector<double>& d_grid,
                                                   const SolverOptions& opts = {}) {
    if (d_grid.empty()) throw std::invalid_argument("continuation_sweep: empty d grid");
    for (std::size_t j = 0; j < d_grid.size(); ++j)
        if (!(d_grid[j] > 0.0) || (j > 0 && !(d_grid[j] > d_grid[j - 1])))
            throw std::invalid_argument("continuation_sweep: d grid must be positive ascending");

    std::vector<SolveResult> results;
    results.reserve(d_grid.size());
    ScalarField u_start = K;
    for (double d : d_grid) {
        Problem p(d, K, P, r);
        try {
            results.push_back(newton_solve(p, u_start, opts));
        } catch (const NoConvergence& newton_err) {
            try {
                results.push_back(pseudo_transient(p, u_start, opts));
            } catch (const NoConvergence& pt_err) {
                throw SweepFailure(d, "continuation_sweep: both solvers failed at d = " +
                                          std::to_string(d) + " (" + newton_err.what() +
                                          "; " + pt_err.what() + ")");
            }
        }
        u_start = results.back().u;
    }
    return results;
}

// Single-d convenience: Newton from K, then a short continuation ladder
// from d = 1e-2 (where Newton from K is safe) if the direct solve fails.
inline SolveResult solve_steady(const ScalarField& K, const ScalarField& P,
                                const ScalarField& r, double d,
                                const SolverOptions& opts = {}) {
    Problem p(d, K, P, r);
    try {
        return newton_solve(p, K, opts);
    } catch (const NoConvergence&) {
    }
    double lo = std::min(d, 1e-2);
    if (lo == d) return pseudo_transient(p, K, opts);
    int points = std::max(2, static_cast<int>(std::ceil(4.0 * std::log10(d / lo))) + 1);
    std::vector<double> ladder = log_spaced(lo, d, points);
    return continuation_sweep(K, P, r, ladder, opts).back();
}

}  // namespace dispersal
