#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osmosis/operators.hpp"

namespace osmosis {

enum class Scheme { Explicit, Implicit, Mos };

/// Factor order of the multiplicative splitting; XThenY matches the product
/// index order (A1 first, then A2).
enum class FactorOrder { XThenY, YThenX };

struct SchemeConfig {
    Scheme scheme = Scheme::Mos;
    double tau = 1000.0;
    int max_steps = 5000;
    double steady_tol = 1e-8;  // on the tau-normalized relative L1 update
    double linear_tol = 1e-10; // implicit inner solver, relative residual
    FactorOrder mos_order = FactorOrder::XThenY;
};

/// Per-iteration diagnostics of an evolution run.
struct EvolveReport {
    std::vector<double> mass;
    std::vector<double> min_value;
    std::vector<double> update_norm; // ||u^{k+1} - u^k||_1 / (tau * ||u^k||_1)
    std::vector<double> seconds;     // wall time per iteration
    int iterations = 0;
    bool converged = false;
};

std::string to_string(Scheme scheme);
bool parse_scheme(const std::string& text, Scheme& out);

/// Largest explicit time-step keeping I + tau*A non-negative:
/// 1 / max_i(-a_ii) over the diagonal of A.
double stable_timestep(const DriftField& d);

/// u + tau * A u. Rejects tau above stable_timestep(d).
ScalarField step_explicit(const ScalarField& u, const DriftField& d, double tau);

/// Solves (I - tau*A) w = u matrix-free (BiCGSTAB) to a relative residual
/// <= linear_tol. Throws SolveError if the iteration cap is hit.
ScalarField step_implicit(const ScalarField& u, const DriftField& d, double tau,
                          double linear_tol);

/// Multiplicative splitting step: solves (I - tau*A1) w = u along x-lines,
/// then (I - tau*A2) u' = w along y-lines (Thomas algorithm per line).
ScalarField step_mos(const ScalarField& u, const DriftField& d, double tau,
                     FactorOrder order = FactorOrder::XThenY);

/// Thomas forward elimination / back substitution; throws SolveError on a
/// vanishing pivot.
std::vector<double> solve_tridiagonal(const LineSystem& sys, std::span<const double> rhs);

/// Iterates the configured stepper from f until the tau-normalized relative
/// L1 update drops to steady_tol or max_steps is reached.
std::pair<ScalarField, EvolveReport> evolve(const ScalarField& f, const DriftField& d,
                                            const SchemeConfig& cfg);

} // namespace osmosis
