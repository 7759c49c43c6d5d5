#pragma once

// Dense reference implementations used only by tests. Matrices are assembled
// entry-by-entry straight from the per-pixel stencil formulas, independently
// of the matrix-free code paths they check.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "osmosis/drift.hpp"
#include "osmosis/operators.hpp"

namespace oracle {

struct Dense {
    int n = 0;
    std::vector<double> a; // row-major n x n

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }
};

inline Dense zeros(int n) {
    Dense m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    return m;
}

inline Dense identity(int n) {
    Dense m = zeros(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

// A_axis assembled from the stencil: second difference along the axis minus
// the drift terms at the half points, with missing neighbours contributing
// nothing.
inline Dense axis_matrix(const osmosis::DriftField& d, osmosis::Axis axis) {
    const int w = d.width;
    const int h = d.height;
    const double ih2 = 1.0 / (d.h * d.h);
    const double i2h = 1.0 / (2.0 * d.h);
    Dense m = zeros(w * h);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            const int r = j * w + i;
            if (axis == osmosis::Axis::X) {
                if (i + 1 < w) {
                    const double dr = d.d1_at(i, j);
                    m.at(r, r + 1) += ih2 - dr * i2h;
                    m.at(r, r) += -ih2 - dr * i2h;
                }
                if (i > 0) {
                    const double dl = d.d1_at(i - 1, j);
                    m.at(r, r - 1) += ih2 + dl * i2h;
                    m.at(r, r) += -ih2 + dl * i2h;
                }
            } else {
                if (j + 1 < h) {
                    const double dd = d.d2_at(i, j);
                    m.at(r, r + w) += ih2 - dd * i2h;
                    m.at(r, r) += -ih2 - dd * i2h;
                }
                if (j > 0) {
                    const double du = d.d2_at(i, j - 1);
                    m.at(r, r - w) += ih2 + du * i2h;
                    m.at(r, r) += -ih2 + du * i2h;
                }
            }
        }
    }
    return m;
}

inline Dense full_matrix(const osmosis::DriftField& d) {
    Dense m = axis_matrix(d, osmosis::Axis::X);
    const Dense y = axis_matrix(d, osmosis::Axis::Y);
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] += y.a[k];
    return m;
}

// I + scale * M
inline Dense shift_scale(const Dense& m, double scale) {
    Dense out = m;
    for (double& v : out.a) v *= scale;
    for (int i = 0; i < m.n; ++i) out.at(i, i) += 1.0;
    return out;
}

inline std::vector<double> matvec(const Dense& m, const std::vector<double>& x) {
    std::vector<double> y(m.n, 0.0);
    for (int r = 0; r < m.n; ++r) {
        double acc = 0.0;
        for (int c = 0; c < m.n; ++c) acc += m.at(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Dense m, std::vector<double> b) {
    const int n = m.n;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m.at(k, k));
        for (int r = k + 1; r < n; ++r) {
            const double cand = std::abs(m.at(r, k));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("dense solve: singular matrix");
        if (pivot != k) {
            for (int c = 0; c < n; ++c) std::swap(m.at(k, c), m.at(pivot, c));
            std::swap(b[k], b[pivot]);
        }
        for (int r = k + 1; r < n; ++r) {
            const double f = m.at(r, k) / m.at(k, k);
            if (f == 0.0) continue;
            m.at(r, k) = 0.0;
            for (int c = k + 1; c < n; ++c) m.at(r, c) -= f * m.at(k, c);
            b[r] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= m.at(r, c) * x[c];
        x[r] = acc / m.at(r, r);
    }
    return x;
}

inline double max_abs_column_sum(const Dense& m) {
    double worst = 0.0;
    for (int c = 0; c < m.n; ++c) {
        double s = 0.0;
        for (int r = 0; r < m.n; ++r) s += m.at(r, c);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace oracle
