#include "colsparse/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "colsparse/errors.hpp"

namespace colsparse {
namespace {

constexpr double kPivotTol = 1e-11;

// Dense tableau for max c.x, A x <= b, x >= 0 with b >= 0; slacks start basic.
class Tableau {
 public:
  Tableau(const LpModel& model) : rows_(model.rows.size() + model.num_vars), vars_(model.num_vars) {
    cols_ = vars_ + rows_;
    a_.assign(rows_ * (cols_ + 1), 0.0);
    cost_.assign(cols_, 0.0);
    basis_.resize(rows_);
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
      for (const auto& [var, c] : model.rows[r].coeffs) at(r, var) += c;
      rhs(r) = model.rows[r].upper;
    }
    // Box rows x_j <= 1.
    for (std::size_t j = 0; j < vars_; ++j) {
      const std::size_t r = model.rows.size() + j;
      at(r, j) = 1.0;
      rhs(r) = 1.0;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      at(r, vars_ + r) = 1.0;
      basis_[r] = vars_ + r;
    }
    for (std::size_t j = 0; j < vars_; ++j) cost_[j] = model.objective[j];
  }

  void solve() {
    // Bland: entering = lowest index with positive reduced cost,
    // leaving = min ratio, ties broken by lowest basic variable index.
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (cost_[c] > kPivotTol) {
          enter = c;
          break;
        }
      }
      if (enter == cols_) return;
      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double coef = at(r, enter);
        if (coef <= kPivotTol) continue;
        const double ratio = rhs(r) / coef;
        if (leave == rows_ || ratio < best - kPivotTol) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + kPivotTol && basis_[r] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave == rows_) throw InternalError("simplex: unbounded direction in a boxed LP");
      pivot(leave, enter);
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(vars_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < vars_) x[basis_[r]] = std::clamp(rhs(r), 0.0, 1.0);
    }
    return x;
  }

 private:
  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return a_[r * (cols_ + 1) + cols_]; }
  double rhs(std::size_t r) const { return a_[r * (cols_ + 1) + cols_]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t width = cols_ + 1;
    double* prow = &a_[pr * width];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < width; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[r * width];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
      if (std::abs(row[cols_]) < 1e-14) row[cols_] = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols_; ++c) cost_[c] -= f * prow[c];
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t rows_;
  std::size_t vars_;
  std::size_t cols_ = 0;
  std::vector<double> a_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::vector<ItemSet> big_sets(const PackingInstance& inst) {
  std::vector<std::vector<std::size_t>> big(inst.m);
  for (std::size_t j = 0; j < inst.n; ++j) {
    for (const Entry& e : inst.columns[j]) {
      if (e.coeff / inst.capacities[e.row] > 0.5) big[e.row].push_back(j);
    }
  }
  std::vector<ItemSet> out;
  out.reserve(inst.m);
  for (auto& b : big) out.push_back(ItemSet::from_sorted(std::move(b)));
  return out;
}

LpModel build_packing_lp(const PackingInstance& inst, bool strengthen) {
  const auto report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("invalid instance: " + report.violations.front());
  LpModel model;
  model.num_vars = inst.n;
  model.objective = inst.weights;
  model.rows.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i) model.rows[i].upper = inst.capacities[i];
  for (std::size_t j = 0; j < inst.n; ++j) {
    for (const Entry& e : inst.columns[j]) model.rows[e.row].coeffs.emplace_back(j, e.coeff);
  }
  if (strengthen) {
    for (const ItemSet& big : big_sets(inst)) {
      if (big.size() < 2) continue;
      LpRow row;
      row.upper = 1.0;
      for (std::size_t j : big) row.coeffs.emplace_back(j, 1.0);
      model.rows.push_back(std::move(row));
    }
  }
  return model;
}

FractionalSolution solve_lp(const LpModel& model) {
  if (model.objective.size() != model.num_vars) {
    throw ValidationError("objective length does not match variable count");
  }
  for (const LpRow& row : model.rows) {
    if (!std::isfinite(row.upper) || row.upper < 0.0) {
      throw ValidationError("LP row bound must be finite and nonnegative");
    }
    for (const auto& [var, c] : row.coeffs) {
      if (var >= model.num_vars || !std::isfinite(c)) throw ValidationError("bad LP coefficient");
    }
  }
  Tableau t(model);
  t.solve();
  FractionalSolution sol;
  sol.x = t.primal();
  for (std::size_t j = 0; j < model.num_vars; ++j) sol.objective += model.objective[j] * sol.x[j];
  return sol;
}

FractionalSolution solve_packing_lp(const PackingInstance& inst, bool strengthen) {
  return solve_lp(build_packing_lp(inst, strengthen));
}

double max_violation(const LpModel& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max({worst, -v, v - 1.0});
  for (const LpRow& row : model.rows) {
    double lhs = 0.0;
    for (const auto& [var, c] : row.coeffs) lhs += c * x[var];
    worst = std::max(worst, lhs - row.upper);
  }
  return worst;
}

}  // namespace colsparse
