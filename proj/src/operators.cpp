#include "osmosis/operators.hpp"

#include <cmath>

#include "osmosis/errors.hpp"
#include "osmosis/parallel.hpp"

namespace osmosis {

namespace {
constexpr std::int64_t kRowGrain = 64;

void check_pair(const ScalarField& u, const DriftField& d) {
    if (u.width != d.width || u.height != d.height) {
        throw DimensionError("field and drift dimensions do not match");
    }
    if (u.h != d.h) {
        throw DimensionError("field and drift grid spacings do not match");
    }
}

// Total flux through a face: diffusive part minus drift part.
inline double face_flux(double ua, double ub, double dface, double inv_h) {
    return (ub - ua) * inv_h - dface * 0.5 * (ub + ua);
}
} // namespace

ScalarField apply_A(const ScalarField& u, const DriftField& d) {
    check_pair(u, d);
    const int w = u.width;
    const int hgt = u.height;
    const double inv_h = 1.0 / u.h;

    ScalarField out(w, hgt, 0.0, u.h);
    par::for_chunks(hgt, kRowGrain, [&](std::int64_t j0, std::int64_t j1) {
        std::vector<double> flux_up(w); // y-flux through the face above the current row
        if (j0 > 0) {
            const double* prev = u.values.data() + (j0 - 1) * w;
            const double* cur = u.values.data() + j0 * w;
            const double* d2row = d.d2.data() + (j0 - 1) * w;
            for (int i = 0; i < w; ++i) flux_up[i] = face_flux(prev[i], cur[i], d2row[i], inv_h);
        } else {
            std::fill(flux_up.begin(), flux_up.end(), 0.0);
        }

        for (std::int64_t j = j0; j < j1; ++j) {
            const double* row = u.values.data() + j * w;
            const double* next = (j + 1 < hgt) ? row + w : nullptr;
            const double* d1row = d.d1.data() + j * (w - 1);
            const double* d2row = (j + 1 < hgt) ? d.d2.data() + j * w : nullptr;
            double* out_row = out.values.data() + j * w;

            double flux_left = 0.0;
            for (int i = 0; i < w; ++i) {
                const double flux_right =
                    (i + 1 < w) ? face_flux(row[i], row[i + 1], d1row[i], inv_h) : 0.0;
                const double flux_down =
                    next ? face_flux(row[i], next[i], d2row[i], inv_h) : 0.0;
                out_row[i] = (flux_right - flux_left) * inv_h + (flux_down - flux_up[i]) * inv_h;
                flux_left = flux_right;
                flux_up[i] = flux_down;
            }
        }
    });
    return out;
}

ScalarField apply_axis_transpose(const ScalarField& w_in, const DriftField& d, Axis axis) {
    check_pair(w_in, d);
    const int w = w_in.width;
    const int hgt = w_in.height;
    const double inv_h2 = 1.0 / (d.h * d.h);
    const double inv_2h = 1.0 / (2.0 * d.h);

    ScalarField out(w, hgt, 0.0, w_in.h);
    if (axis == Axis::X) {
        par::for_chunks(hgt, kRowGrain, [&](std::int64_t j0, std::int64_t j1) {
            for (std::int64_t j = j0; j < j1; ++j) {
                const double* row = w_in.values.data() + j * w;
                const double* d1row = d.d1.data() + j * (w - 1);
                double* out_row = out.values.data() + j * w;
                for (int i = 0; i < w; ++i) {
                    // t = toward-right coupling (appears in row i+1), s = toward-left.
                    double acc = 0.0;
                    if (i + 1 < w) {
                        const double t = inv_h2 + d1row[i] * inv_2h;
                        acc += t * row[i + 1] - t * row[i];
                    }
                    if (i > 0) {
                        const double s = inv_h2 - d1row[i - 1] * inv_2h;
                        acc += s * row[i - 1] - s * row[i];
                    }
                    out_row[i] = acc;
                }
            }
        });
    } else {
        par::for_chunks(hgt, kRowGrain, [&](std::int64_t j0, std::int64_t j1) {
            for (std::int64_t j = j0; j < j1; ++j) {
                const double* row = w_in.values.data() + j * w;
                double* out_row = out.values.data() + j * w;
                for (int i = 0; i < w; ++i) {
                    double acc = 0.0;
                    if (j + 1 < hgt) {
                        const double t = inv_h2 + d.d2_at(i, static_cast<int>(j)) * inv_2h;
                        acc += t * row[i + w] - t * row[i];
                    }
                    if (j > 0) {
                        const double s = inv_h2 - d.d2_at(i, static_cast<int>(j) - 1) * inv_2h;
                        acc += s * row[i - w] - s * row[i];
                    }
                    out_row[i] = acc;
                }
            }
        });
    }
    return out;
}

ScalarField apply_A_transpose(const ScalarField& w, const DriftField& d) {
    ScalarField x = apply_axis_transpose(w, d, Axis::X);
    const ScalarField y = apply_axis_transpose(w, d, Axis::Y);
    for (std::size_t i = 0; i < x.values.size(); ++i) x.values[i] += y.values[i];
    return x;
}

double column_sum_defect(const DriftField& d) {
    ScalarField ones(d.width, d.height, 1.0, d.h);
    const ScalarField sums = apply_A_transpose(ones, d);
    double defect = 0.0;
    for (double v : sums.values) defect = std::max(defect, std::abs(v));
    return defect;
}

ScalarField diagonal_of_A(const DriftField& d) {
    const int w = d.width;
    const int hgt = d.height;
    const double inv_h2 = 1.0 / (d.h * d.h);
    const double inv_2h = 1.0 / (2.0 * d.h);

    ScalarField diag(w, hgt, 0.0, d.h);
    for (int j = 0; j < hgt; ++j) {
        for (int i = 0; i < w; ++i) {
            double a = 0.0;
            if (i + 1 < w) a -= inv_h2 + d.d1_at(i, j) * inv_2h;
            if (i > 0) a -= inv_h2 - d.d1_at(i - 1, j) * inv_2h;
            if (j + 1 < hgt) a -= inv_h2 + d.d2_at(i, j) * inv_2h;
            if (j > 0) a -= inv_h2 - d.d2_at(i, j - 1) * inv_2h;
            diag.at(i, j) = a;
        }
    }
    return diag;
}

std::vector<LineSystem> assemble_lines(const DriftField& d, Axis axis, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValueError("tau must be positive and finite");
    }
    const double inv_h2 = 1.0 / (d.h * d.h);
    const double inv_2h = 1.0 / (2.0 * d.h);

    std::vector<LineSystem> lines;
    const int n = (axis == Axis::X) ? d.width : d.height;
    const int count = (axis == Axis::X) ? d.height : d.width;
    if (n < 2) {
        throw DimensionError("line length must be at least 2");
    }
    lines.reserve(count);
    for (int line = 0; line < count; ++line) {
        LineSystem sys;
        sys.axis = axis;
        sys.n = n;
        sys.lower.resize(n - 1);
        sys.upper.resize(n - 1);
        sys.diag.resize(n);
        for (int k = 0; k < n - 1; ++k) {
            const double dface =
                (axis == Axis::X) ? d.d1_at(k, line) : d.d2_at(line, k);
            sys.lower[k] = -tau * (inv_h2 + dface * inv_2h);
            sys.upper[k] = -tau * (inv_h2 - dface * inv_2h);
        }
        for (int k = 0; k < n; ++k) {
            // The diagonal collects the negated flux terms, so every column
            // of I - tau*A_axis sums to 1 in exact arithmetic.
            double v = 1.0;
            if (k > 0) v -= sys.upper[k - 1];
            if (k + 1 < n) v -= sys.lower[k];
            sys.diag[k] = v;
        }
        lines.push_back(std::move(sys));
    }
    return lines;
}

} // namespace osmosis
