#pragma once
// Uniform 1-D node grid on [x0, x1] with trapezoid quadrature and
// second-order stencils for homogeneous-Neumann problems.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dispersal {

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double x0 = 0.0;
    double x1 = 1.0;
    int n_cells = 0;  // nodes are x0 + i*h, i = 0..n_cells
    double h = 0.0;

    GridSpec(double x0_, double x1_, int n_cells_)
        : x0(x0_), x1(x1_), n_cells(n_cells_) {
        if (!(x1 > x0)) throw std::invalid_argument("GridSpec: requires x1 > x0");
        if (n_cells < 8) throw std::invalid_argument("GridSpec: requires n_cells >= 8");
        h = (x1 - x0) / n_cells;
    }

    int n_nodes() const { return n_cells + 1; }
    double node(int i) const { return x0 + i * h; }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.x0 == b.x0 && a.x1 == b.x1 && a.n_cells == b.n_cells;
    }
    friend bool operator!=(const GridSpec& a, const GridSpec& b) { return !(a == b); }
};

class ScalarField {
public:
    ScalarField(GridSpec grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.n_nodes())
            throw std::invalid_argument("ScalarField: value count must equal node count");
        for (double v : values_)
            if (!std::isfinite(v))
                throw std::invalid_argument("ScalarField: entries must be finite");
    }

    static ScalarField constant(GridSpec grid, double c) {
        return ScalarField(grid, std::vector<double>(grid.n_nodes(), c));
    }

    template <class Fn>
    static ScalarField from_fn(GridSpec grid, Fn&& f) {
        std::vector<double> v(grid.n_nodes());
        for (int i = 0; i < grid.n_nodes(); ++i) v[i] = f(grid.node(i));
        return ScalarField(grid, std::move(v));
    }

    const GridSpec& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

private:
    GridSpec grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid())
        throw GridMismatch("fields live on different grids");
}

// Nodewise combinators. Results stay on the common grid.
template <class Fn>
inline ScalarField zip(const ScalarField& a, const ScalarField& b, Fn&& f) {
    require_same_grid(a, b);
    std::vector<double> v(a.size());
    for (int i = 0; i < a.size(); ++i) v[i] = f(a[i], b[i]);
    return ScalarField(a.grid(), std::move(v));
}

template <class Fn>
inline ScalarField map(const ScalarField& a, Fn&& f) {
    std::vector<double> v(a.size());
    for (int i = 0; i < a.size(); ++i) v[i] = f(a[i]);
    return ScalarField(a.grid(), std::move(v));
}

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, std::plus<double>());
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, std::minus<double>());
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, std::multiplies<double>());
}
inline ScalarField operator/(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, std::divides<double>());
}
inline ScalarField operator*(double s, const ScalarField& a) {
    return map(a, [s](double v) { return s * v; });
}

inline double min_value(const ScalarField& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}
inline double max_value(const ScalarField& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}
inline double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

// Discrete Laplacian with mirror ghosts, so d/dn f = 0 is built into the
// boundary rows:
//   row 0: 2(f1 - f0)/h^2,  row i: (f[i-1] - 2 f[i] + f[i+1])/h^2,
//   row N: 2(f[N-1] - f[N])/h^2.
// Written as differences of differences so a constant field maps to exact
// zeros, and the trapezoid-weighted row sum telescopes to exact zero
// (discrete conservation of the flux term).
inline ScalarField neumann_laplacian(const ScalarField& f) {
    const int n = f.size();
    const double h2 = f.grid().h * f.grid().h;
    std::vector<double> out(n);
    out[0] = 2.0 * (f[1] - f[0]) / h2;
    for (int i = 1; i + 1 < n; ++i)
        out[i] = ((f[i + 1] - f[i]) - (f[i] - f[i - 1])) / h2;
    out[n - 1] = 2.0 * (f[n - 2] - f[n - 1]) / h2;
    return ScalarField(f.grid(), std::move(out));
}

// Central differences inside, second-order one-sided at the ends. The
// one-sided forms are grouped so constants give exact zeros and affine
// fields give the exact slope.
inline ScalarField gradient(const ScalarField& f) {
    const int n = f.size();
    const double h = f.grid().h;
    std::vector<double> out(n);
    out[0] = (3.0 * (f[1] - f[0]) + (f[1] - f[2])) / (2.0 * h);
    for (int i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * (f[n - 1] - f[n - 2]) + (f[n - 3] - f[n - 2])) / (2.0 * h);
    return ScalarField(f.grid(), std::move(out));
}

// Trapezoid rule: h * (f0/2 + f1 + ... + f[N-1] + fN/2).
inline double integrate(const ScalarField& f) {
    const int n = f.size();
    double acc = 0.5 * (f[0] + f[n - 1]);
    for (int i = 1; i + 1 < n; ++i) acc += f[i];
    return acc * f.grid().h;
}

inline double l2_norm(const ScalarField& f) {
    return std::sqrt(integrate(f * f));
}

inline double inf_norm_diff(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace dispersal
