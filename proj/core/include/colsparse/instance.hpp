#pragma once

// Shared instance model for all four packing families: a sparse nonnegative
// constraint matrix stored by columns, item weights, and row capacities.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace colsparse {

/// Absolute tolerance for every capacity comparison.
inline constexpr double kCapacityTolerance = 1e-9;

struct Entry {
  std::size_t row = 0;
  double coeff = 0.0;
};

/// max { w.x : A x <= b, x in {0,1}^n }, A stored column-wise.
/// Items are 0..n-1 and rows 0..m-1 everywhere in the library.
struct PackingInstance {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<Entry>> columns;  // columns[j] = C(j) with coefficients
  std::vector<double> weights;
  std::vector<double> capacities;

  /// Convenience: unit capacities, m rows, columns given explicitly.
  static PackingInstance with_unit_capacities(std::size_t m,
                                              std::vector<std::vector<Entry>> columns,
                                              std::vector<double> weights);
};

struct FractionalSolution {
  std::vector<double> x;
  double objective = 0.0;
};

/// Sorted set of distinct item indices.
class ItemSet {
 public:
  ItemSet() = default;
  ItemSet(std::initializer_list<std::size_t> items);
  /// Sorts and removes duplicates.
  explicit ItemSet(std::vector<std::size_t> items);

  static ItemSet from_sorted(std::vector<std::size_t> items);

  bool contains(std::size_t item) const;
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  std::size_t operator[](std::size_t i) const { return members_[i]; }
  const std::vector<std::size_t>& members() const { return members_; }

  friend bool operator==(const ItemSet&, const ItemSet&) = default;

 private:
  std::vector<std::size_t> members_;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  bool mentions(std::string_view text) const;
};

/// Reports every violated structural invariant of the instance.
ValidationReport validate_instance(const PackingInstance& inst);

/// max_j |C(j)|.
std::size_t column_sparsity(const PackingInstance& inst);

/// True iff every row usage of `chosen` is within capacity + 1e-9.
bool check_feasible(const PackingInstance& inst, const ItemSet& chosen);

/// Row usage of a chosen set.
std::vector<double> row_usage(const PackingInstance& inst, const ItemSet& chosen);

double total_weight(const PackingInstance& inst, const ItemSet& chosen);

/// w.x; throws if sizes disagree.
double objective_value(const PackingInstance& inst, std::span<const double> x);

/// True iff every capacity is an integer >= 1 (needed by the SKSP/UFP paths).
bool has_integral_capacities(const PackingInstance& inst);

}  // namespace colsparse
