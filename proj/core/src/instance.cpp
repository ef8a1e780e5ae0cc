#include "colsparse/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "colsparse/errors.hpp"

namespace colsparse {

PackingInstance PackingInstance::with_unit_capacities(std::size_t m,
                                                      std::vector<std::vector<Entry>> columns,
                                                      std::vector<double> weights) {
  PackingInstance inst;
  inst.n = columns.size();
  inst.m = m;
  inst.columns = std::move(columns);
  inst.weights = std::move(weights);
  inst.capacities.assign(m, 1.0);
  return inst;
}

ItemSet::ItemSet(std::initializer_list<std::size_t> items)
    : ItemSet(std::vector<std::size_t>(items)) {}

ItemSet::ItemSet(std::vector<std::size_t> items) : members_(std::move(items)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

ItemSet ItemSet::from_sorted(std::vector<std::size_t> items) {
  ItemSet s;
  s.members_ = std::move(items);
  return s;
}

bool ItemSet::contains(std::size_t item) const {
  return std::binary_search(members_.begin(), members_.end(), item);
}

bool ValidationReport::mentions(std::string_view text) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const std::string& v) { return v.find(text) != std::string::npos; });
}

ValidationReport validate_instance(const PackingInstance& inst) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  if (inst.columns.size() != inst.n) {
    add("column count " + std::to_string(inst.columns.size()) + " != n " + std::to_string(inst.n));
  }
  if (inst.weights.size() != inst.n) {
    add("weight count " + std::to_string(inst.weights.size()) + " != n " + std::to_string(inst.n));
  }
  if (inst.capacities.size() != inst.m) {
    add("capacity count " + std::to_string(inst.capacities.size()) + " != m " +
        std::to_string(inst.m));
  }
  for (std::size_t i = 0; i < inst.capacities.size(); ++i) {
    const double b = inst.capacities[i];
    if (!std::isfinite(b) || b < 1.0) {
      add("capacity of row " + std::to_string(i) + " below 1");
    }
  }
  for (std::size_t j = 0; j < inst.weights.size(); ++j) {
    const double w = inst.weights[j];
    if (!std::isfinite(w) || w < 0.0) add("negative weight for item " + std::to_string(j));
  }
  for (std::size_t j = 0; j < inst.columns.size(); ++j) {
    std::vector<std::size_t> rows;
    for (const Entry& e : inst.columns[j]) {
      if (e.row >= inst.m) {
        add("row index " + std::to_string(e.row) + " out of range in column " + std::to_string(j));
      }
      if (!(e.coeff > 0.0 && e.coeff <= 1.0)) {
        std::ostringstream os;
        os << "coefficient out of (0,1] in column " << j << " row " << e.row << ": " << e.coeff;
        add(os.str());
      }
      rows.push_back(e.row);
    }
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
      add("duplicate row in column " + std::to_string(j));
    }
  }
  return report;
}

std::size_t column_sparsity(const PackingInstance& inst) {
  std::size_t k = 0;
  for (const auto& col : inst.columns) k = std::max(k, col.size());
  return k;
}

std::vector<double> row_usage(const PackingInstance& inst, const ItemSet& chosen) {
  std::vector<double> usage(inst.m, 0.0);
  for (std::size_t j : chosen) {
    if (j >= inst.n) throw ValidationError("item " + std::to_string(j) + " out of range");
    for (const Entry& e : inst.columns[j]) usage[e.row] += e.coeff;
  }
  return usage;
}

bool check_feasible(const PackingInstance& inst, const ItemSet& chosen) {
  const auto usage = row_usage(inst, chosen);
  for (std::size_t i = 0; i < inst.m; ++i) {
    if (usage[i] > inst.capacities[i] + kCapacityTolerance) return false;
  }
  return true;
}

double total_weight(const PackingInstance& inst, const ItemSet& chosen) {
  double w = 0.0;
  for (std::size_t j : chosen) w += inst.weights[j];
  return w;
}

double objective_value(const PackingInstance& inst, std::span<const double> x) {
  if (x.size() != inst.n) throw ValidationError("solution length does not match item count");
  double obj = 0.0;
  for (std::size_t j = 0; j < inst.n; ++j) obj += inst.weights[j] * x[j];
  return obj;
}

bool has_integral_capacities(const PackingInstance& inst) {
  return std::all_of(inst.capacities.begin(), inst.capacities.end(),
                     [](double b) { return b >= 1.0 && std::floor(b) == b; });
}

}  // namespace colsparse
