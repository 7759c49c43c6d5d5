#include "osmosis/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "osmosis/errors.hpp"
#include "osmosis/parallel.hpp"

namespace osmosis {

namespace {
constexpr std::int64_t kRowGrain = 64;
constexpr std::int64_t kColGrain = 512;
constexpr std::int64_t kVecGrain = 1 << 15;
constexpr int kBicgstabCap = 1000;

using Clock = std::chrono::steady_clock;

[[noreturn]] void pivot_failure() {
    throw SolveError("tridiagonal solve hit a vanishing pivot (line system is degenerate)");
}

inline void check_pivot(double m, double scale) {
    if (!(std::abs(m) > 1e-14 * scale)) pivot_failure();
}

// Thomas solve of (I - tau*A_axis) restricted to one line, with coefficients
// derived on the fly from the face drift values d_face[0..n-2]:
//   lower_k = -tau*(1/h^2 + d_k/(2h)), upper_k = -tau*(1/h^2 - d_k/(2h)),
//   diag collects the negated flux terms (unit column sums).
inline void solve_line_fused(const double* rhs, const double* d_face, int n, double tau,
                             double inv_h2, double inv_2h, double* cp, double* out) {
    auto face_lower = [&](int k) { return -tau * (inv_h2 + d_face[k] * inv_2h); };
    auto face_upper = [&](int k) { return -tau * (inv_h2 - d_face[k] * inv_2h); };

    double low_prev = face_lower(0);
    double up_prev = face_upper(0);
    {
        const double diag0 = 1.0 - low_prev;
        cp[0] = up_prev / diag0;
        out[0] = rhs[0] / diag0;
    }
    for (int i = 1; i < n; ++i) {
        double low_i = 0.0;
        double up_i = 0.0;
        double diag = 1.0 - up_prev;
        if (i + 1 < n) {
            low_i = face_lower(i);
            up_i = face_upper(i);
            diag -= low_i;
        }
        const double m = diag - low_prev * cp[i - 1];
        check_pivot(m, std::abs(diag) + std::abs(low_prev * cp[i - 1]));
        cp[i] = (i + 1 < n) ? up_i / m : 0.0;
        out[i] = (rhs[i] - low_prev * out[i - 1]) / m;
        low_prev = low_i;
        up_prev = up_i;
    }
    for (int i = n - 2; i >= 0; --i) {
        out[i] -= cp[i] * out[i + 1];
    }
}

// (I - tau*A1)^{-1} rhs: independent Thomas solves along grid rows.
ScalarField solve_factor_x(const ScalarField& rhs, const DriftField& d, double tau) {
    const int w = rhs.width;
    const int hgt = rhs.height;
    const double inv_h2 = 1.0 / (rhs.h * rhs.h);
    const double inv_2h = 1.0 / (2.0 * rhs.h);

    ScalarField out(w, hgt, 0.0, rhs.h);
    par::for_chunks(hgt, kRowGrain, [&](std::int64_t j0, std::int64_t j1) {
        std::vector<double> cp(w);
        for (std::int64_t j = j0; j < j1; ++j) {
            solve_line_fused(rhs.values.data() + j * w, d.d1.data() + j * (w - 1), w, tau,
                             inv_h2, inv_2h, cp.data(), out.values.data() + j * w);
        }
    });
    return out;
}

// (I - tau*A2)^{-1} rhs: Thomas along columns, advanced row by row for all
// columns of a block at once so the passes stream in row-major order.
ScalarField solve_factor_y(const ScalarField& rhs, const DriftField& d, double tau) {
    const int w = rhs.width;
    const int hgt = rhs.height;
    const double inv_h2 = 1.0 / (rhs.h * rhs.h);
    const double inv_2h = 1.0 / (2.0 * rhs.h);

    ScalarField out(w, hgt, 0.0, rhs.h);
    std::vector<double> cp(static_cast<std::size_t>(w) * hgt);

    par::for_chunks(w, kColGrain, [&](std::int64_t c0, std::int64_t c1) {
        const int nc = static_cast<int>(c1 - c0);
        std::vector<double> low_prev(nc);
        std::vector<double> up_prev(nc);

        // j = 0
        for (int c = 0; c < nc; ++c) {
            const std::int64_t i = c0 + c;
            low_prev[c] = -tau * (inv_h2 + d.d2[i] * inv_2h);
            up_prev[c] = -tau * (inv_h2 - d.d2[i] * inv_2h);
            const double diag0 = 1.0 - low_prev[c];
            cp[i] = up_prev[c] / diag0;
            out.values[i] = rhs.values[i] / diag0;
        }
        for (int j = 1; j < hgt; ++j) {
            const double* d2row = (j + 1 < hgt) ? d.d2.data() + static_cast<std::size_t>(j) * w
                                                : nullptr;
            for (int c = 0; c < nc; ++c) {
                const std::int64_t i = c0 + c;
                const std::int64_t idx = static_cast<std::int64_t>(j) * w + i;
                double low_j = 0.0;
                double up_j = 0.0;
                double diag = 1.0 - up_prev[c];
                if (d2row) {
                    low_j = -tau * (inv_h2 + d2row[i] * inv_2h);
                    up_j = -tau * (inv_h2 - d2row[i] * inv_2h);
                    diag -= low_j;
                }
                const double m = diag - low_prev[c] * cp[idx - w];
                check_pivot(m, std::abs(diag) + std::abs(low_prev[c] * cp[idx - w]));
                cp[idx] = (j + 1 < hgt) ? up_j / m : 0.0;
                out.values[idx] = (rhs.values[idx] - low_prev[c] * out.values[idx - w]) / m;
                low_prev[c] = low_j;
                up_prev[c] = up_j;
            }
        }
        for (int j = hgt - 2; j >= 0; --j) {
            for (int c = 0; c < nc; ++c) {
                const std::int64_t idx = static_cast<std::int64_t>(j) * w + c0 + c;
                out.values[idx] -= cp[idx] * out.values[idx + w];
            }
        }
    });
    return out;
}

void check_step_inputs(const ScalarField& u, const DriftField& d, double tau) {
    if (u.width != d.width || u.height != d.height || u.h != d.h) {
        throw DimensionError("field and drift are not on the same grid");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValueError("tau must be positive and finite");
    }
}

double det_dot(const std::vector<double>& a, const std::vector<double>& b) {
    const double* pa = a.data();
    const double* pb = b.data();
    return par::sum_chunks(static_cast<std::int64_t>(a.size()), kVecGrain,
                           [pa, pb](std::int64_t begin, std::int64_t end) {
                               par::KahanSum s;
                               for (std::int64_t i = begin; i < end; ++i) s.add(pa[i] * pb[i]);
                               return s.sum;
                           });
}

double det_norm2(const std::vector<double>& a) { return std::sqrt(det_dot(a, a)); }

double sum_abs_diff(const ScalarField& a, const ScalarField& b) {
    const double* pa = a.values.data();
    const double* pb = b.values.data();
    return par::sum_chunks(static_cast<std::int64_t>(a.size()), kVecGrain,
                           [pa, pb](std::int64_t begin, std::int64_t end) {
                               par::KahanSum s;
                               for (std::int64_t i = begin; i < end; ++i)
                                   s.add(std::abs(pa[i] - pb[i]));
                               return s.sum;
                           });
}
} // namespace

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::Explicit: return "explicit";
    case Scheme::Implicit: return "implicit";
    case Scheme::Mos: return "mos";
    }
    return "unknown";
}

bool parse_scheme(const std::string& text, Scheme& out) {
    if (text == "explicit") {
        out = Scheme::Explicit;
    } else if (text == "implicit") {
        out = Scheme::Implicit;
    } else if (text == "mos") {
        out = Scheme::Mos;
    } else {
        return false;
    }
    return true;
}

double stable_timestep(const DriftField& d) {
    const ScalarField diag = diagonal_of_A(d);
    double max_neg = 0.0;
    for (double a : diag.values) max_neg = std::max(max_neg, -a);
    return 1.0 / max_neg;
}

ScalarField step_explicit(const ScalarField& u, const DriftField& d, double tau) {
    check_step_inputs(u, d, tau);
    const double bound = stable_timestep(d);
    if (tau > bound * (1.0 + 1e-12)) {
        throw ValueError("explicit time-step " + std::to_string(tau) +
                         " exceeds the stability bound " + std::to_string(bound));
    }
    ScalarField out = apply_A(u, d);
    const double* pu = u.values.data();
    double* po = out.values.data();
    par::for_chunks(static_cast<std::int64_t>(u.size()), kVecGrain,
                    [&](std::int64_t begin, std::int64_t end) {
                        for (std::int64_t i = begin; i < end; ++i) po[i] = pu[i] + tau * po[i];
                    });
    return out;
}

ScalarField step_mos(const ScalarField& u, const DriftField& d, double tau, FactorOrder order) {
    check_step_inputs(u, d, tau);
    if (order == FactorOrder::XThenY) {
        return solve_factor_y(solve_factor_x(u, d, tau), d, tau);
    }
    return solve_factor_x(solve_factor_y(u, d, tau), d, tau);
}

std::vector<double> solve_tridiagonal(const LineSystem& sys, std::span<const double> rhs) {
    const int n = sys.n;
    if (n < 2 || sys.diag.size() != static_cast<std::size_t>(n) ||
        sys.lower.size() != static_cast<std::size_t>(n - 1) ||
        sys.upper.size() != static_cast<std::size_t>(n - 1)) {
        throw DimensionError("malformed tridiagonal system");
    }
    if (rhs.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("rhs length does not match the system");
    }

    std::vector<double> cp(n - 1);
    std::vector<double> x(n);
    check_pivot(sys.diag[0], std::abs(sys.diag[0]) + 1.0);
    cp[0] = sys.upper[0] / sys.diag[0];
    x[0] = rhs[0] / sys.diag[0];
    for (int i = 1; i < n; ++i) {
        const double m = sys.diag[i] - sys.lower[i - 1] * cp[i - 1];
        check_pivot(m, std::abs(sys.diag[i]) + std::abs(sys.lower[i - 1] * cp[i - 1]));
        if (i + 1 < n) cp[i] = sys.upper[i] / m;
        x[i] = (rhs[i] - sys.lower[i - 1] * x[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= cp[i] * x[i + 1];
    return x;
}

ScalarField step_implicit(const ScalarField& u, const DriftField& d, double tau,
                          double linear_tol) {
    check_step_inputs(u, d, tau);
    if (!(linear_tol > 0.0)) {
        throw ValueError("linear_tol must be positive");
    }

    using Vec = std::vector<double>;
    const std::int64_t n = static_cast<std::int64_t>(u.size());
    ScalarField shell(u.width, u.height, 0.0, u.h);

    // y = (I - tau*A) x, matrix-free.
    auto apply_M = [&](const Vec& x, Vec& y) {
        shell.values = x;
        const ScalarField ax = apply_A(shell, d);
        y.resize(x.size());
        const double* px = x.data();
        const double* pa = ax.values.data();
        double* py = y.data();
        par::for_chunks(n, kVecGrain, [&](std::int64_t begin, std::int64_t end) {
            for (std::int64_t i = begin; i < end; ++i) py[i] = px[i] - tau * pa[i];
        });
    };

    const Vec& b = u.values;
    const double b_norm = det_norm2(b);
    if (b_norm == 0.0) return ScalarField(u.width, u.height, 0.0, u.h);

    // Start from x = u: the residual tau*A*u has zero mass, and every Krylov
    // direction keeps it, so the solve conserves mass down to rounding.
    Vec x = b;
    Vec r(b.size());
    {
        const ScalarField au = apply_A(u, d);
        for (std::int64_t i = 0; i < n; ++i) r[i] = tau * au.values[i];
    }
    Vec rhat = r;
    Vec p = r;
    Vec v(b.size(), 0.0);
    Vec s(b.size());
    Vec t(b.size());

    double rho = det_dot(rhat, r);
    const double breakdown = 1e-60 * b_norm * b_norm;
    int restarts = 0;

    auto true_residual_norm = [&](const Vec& candidate) {
        Vec mx;
        apply_M(candidate, mx);
        for (std::int64_t i = 0; i < n; ++i) mx[i] = b[i] - mx[i];
        return det_norm2(mx);
    };

    if (det_norm2(r) <= linear_tol * b_norm) {
        shell.values = std::move(x);
        return shell;
    }

    for (int it = 0; it < kBicgstabCap; ++it) {
        apply_M(p, v);
        const double rhat_v = det_dot(rhat, v);
        if (std::abs(rhat_v) < breakdown) {
            if (++restarts > 4) break;
            rhat = r;
            p = r;
            rho = det_dot(rhat, r);
            continue;
        }
        const double alpha = rho / rhat_v;
        for (std::int64_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (det_norm2(s) <= linear_tol * b_norm) {
            for (std::int64_t i = 0; i < n; ++i) x[i] += alpha * p[i];
            if (true_residual_norm(x) <= linear_tol * b_norm) {
                shell.values = std::move(x);
                return shell;
            }
            // fall through and keep iterating on the recomputed residual
            apply_M(x, t);
            for (std::int64_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
            rhat = r;
            p = r;
            rho = det_dot(rhat, r);
            continue;
        }
        apply_M(s, t);
        const double tt = det_dot(t, t);
        if (tt < breakdown) break;
        const double omega = det_dot(t, s) / tt;
        for (std::int64_t i = 0; i < n; ++i) x[i] += alpha * p[i] + omega * s[i];
        for (std::int64_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        if (det_norm2(r) <= linear_tol * b_norm) {
            if (true_residual_norm(x) <= linear_tol * b_norm) {
                shell.values = std::move(x);
                return shell;
            }
            apply_M(x, t);
            for (std::int64_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
            rhat = r;
            p = r;
            rho = det_dot(rhat, r);
            continue;
        }
        const double rho_next = det_dot(rhat, r);
        if (std::abs(rho_next) < breakdown) {
            if (++restarts > 4) break;
            rhat = r;
            p = r;
            rho = det_dot(rhat, r);
            continue;
        }
        const double beta = (rho_next / rho) * (alpha / omega);
        for (std::int64_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        rho = rho_next;
    }

    throw SolveError("implicit solve did not reach the requested tolerance within " +
                     std::to_string(kBicgstabCap) + " iterations (residual " +
                     std::to_string(det_norm2(r) / b_norm) + ")");
}

std::pair<ScalarField, EvolveReport> evolve(const ScalarField& f, const DriftField& d,
                                            const SchemeConfig& cfg) {
    f.require_positive("initial datum");
    if (!(cfg.tau > 0.0) || !(cfg.steady_tol > 0.0) || cfg.max_steps < 1) {
        throw ValueError("scheme configuration is invalid");
    }
    if (cfg.scheme == Scheme::Explicit) {
        const double bound = stable_timestep(d);
        if (cfg.tau > bound * (1.0 + 1e-12)) {
            throw ValueError("explicit time-step " + std::to_string(cfg.tau) +
                             " exceeds the stability bound " + std::to_string(bound));
        }
    }

    ScalarField u = f;
    EvolveReport report;
    report.mass.reserve(64);

    for (int k = 0; k < cfg.max_steps; ++k) {
        const auto t0 = Clock::now();
        ScalarField next;
        switch (cfg.scheme) {
        case Scheme::Explicit: next = step_explicit(u, d, cfg.tau); break;
        case Scheme::Implicit: next = step_implicit(u, d, cfg.tau, cfg.linear_tol); break;
        case Scheme::Mos: next = step_mos(u, d, cfg.tau, cfg.mos_order); break;
        }
        const double update = sum_abs_diff(next, u);
        const double denom = cfg.tau * l1_norm(u);
        const double norm = (denom > 0.0) ? update / denom : 0.0;
        const std::chrono::duration<double> dt = Clock::now() - t0;

        u = std::move(next);
        report.mass.push_back(total_mass(u));
        report.min_value.push_back(min_value(u));
        report.update_norm.push_back(norm);
        report.seconds.push_back(dt.count());
        report.iterations = k + 1;
        if (norm <= cfg.steady_tol) {
            report.converged = true;
            break;
        }
    }
    return {std::move(u), std::move(report)};
}

} // namespace osmosis
