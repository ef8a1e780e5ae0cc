#pragma once

// Packing LP relaxations and a small dense simplex solver.

#include <cstddef>
#include <utility>
#include <vector>

#include "colsparse/instance.hpp"

namespace colsparse {

struct LpRow {
  std::vector<std::pair<std::size_t, double>> coeffs;  // (variable, coefficient)
  double upper = 0.0;
};

/// max objective.x  s.t.  row.coeffs . x <= row.upper,  0 <= x <= 1.
/// Every upper bound must be finite and nonnegative (x = 0 is feasible).
struct LpModel {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
};

/// big_sets(inst)[i] = { j : a_ij / b_i > 1/2 }.
std::vector<ItemSet> big_sets(const PackingInstance& inst);

/// One row per constraint; with `strengthen`, one extra row sum_{j in big(i)} x_j <= 1
/// for each row with at least two big items (singleton rows are implied by x <= 1).
LpModel build_packing_lp(const PackingInstance& inst, bool strengthen);

/// Optimal vertex of the model; Bland's rule, so the result is deterministic.
FractionalSolution solve_lp(const LpModel& model);

FractionalSolution solve_packing_lp(const PackingInstance& inst, bool strengthen);

/// Largest violation of any model row or bound by x (0 if x is feasible).
double max_violation(const LpModel& model, const std::vector<double>& x);

}  // namespace colsparse
