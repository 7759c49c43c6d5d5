#pragma once

#include <vector>

#include "osmosis/drift.hpp"
#include "osmosis/field.hpp"

namespace osmosis {

enum class Axis { X, Y };

/// One non-symmetric tridiagonal line of (I - tau*A_axis): lower/upper have
/// length n-1, diag length n. Assembled so each column sums to 1 in exact
/// arithmetic (the diagonal collects the negated flux terms).
struct LineSystem {
    Axis axis = Axis::X;
    int n = 0;
    std::vector<double> lower; // [i] = M(i+1, i)
    std::vector<double> diag;  // [i] = M(i, i)
    std::vector<double> upper; // [i] = M(i, i+1)
};

/// (A1 + A2) u with zero total flux (diffusive and drift) on domain-boundary
/// faces. Matrix-free; fluxes telescope exactly so the output has zero total
/// mass up to rounding.
ScalarField apply_A(const ScalarField& u, const DriftField& d);

/// Transpose action of one axis term, (A_axis^T) w. Applying it to the
/// all-ones field yields the column sums of A_axis.
ScalarField apply_axis_transpose(const ScalarField& w, const DriftField& d, Axis axis);

/// (A^T) w = (A1^T + A2^T) w.
ScalarField apply_A_transpose(const ScalarField& w, const DriftField& d);

/// One tridiagonal system per grid line along `axis`, each of (I - tau*A_axis).
std::vector<LineSystem> assemble_lines(const DriftField& d, Axis axis, double tau);

/// max over columns of |column sum| of the fully assembled A, computed via
/// the transpose action on the all-ones field. Structural self-test: zero up
/// to rounding for any drift.
double column_sum_defect(const DriftField& d);

/// Diagonal entry of A at every pixel (all values <= 0 when |d|h <= 2).
ScalarField diagonal_of_A(const DriftField& d);

} // namespace osmosis
