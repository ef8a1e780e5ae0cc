#pragma once

// JSON and CSV encodings of instances, solutions, and reports.
// Every parser throws ValidationError on malformed or inconsistent input.

#include <string>
#include <vector>

#include "colsparse/harness.hpp"
#include "colsparse/hypermatch.hpp"
#include "colsparse/instance.hpp"
#include "colsparse/sksp.hpp"
#include "colsparse/ufptree.hpp"

namespace colsparse {

/// {"n", "m", "capacities", "weights", "columns": [[[row, coeff], ...], ...]}
PackingInstance packing_from_json(const std::string& text);
std::string to_json(const PackingInstance& inst);

/// {"m", "capacities", "items": [{"support": [...], "scenarios": [[p, w, [bits]], ...]}]}
StochasticInstance stochastic_from_json(const std::string& text);
std::string to_json(const StochasticInstance& inst);

/// {"m", "edges": [{"vertices": [...], "weight": w}, ...]}
Hypergraph hypergraph_from_json(const std::string& text);
std::string to_json(const Hypergraph& h);

/// {"parent": [...], "root": r, "edgeCapacity": [...], "demands": [{"s", "t", "w"}, ...]}
TreeNetwork tree_from_json(const std::string& text);
std::string to_json(const TreeNetwork& net);

/// Reads a document of any of the four instance kinds, recognised by its keys.
AnyInstance instance_from_json(const std::string& text);
std::string instance_to_json(const AnyInstance& inst);

/// {"x": [...], "objective": v}
std::string to_json(const FractionalSolution& x);
FractionalSolution solution_from_json(const std::string& text);

std::string to_json(const ChanceSchedule& s);
std::string to_json(const OptResult& opt);
std::string to_json(const RoundingReport& report);
/// Header plus one row per item: index,x,frequency,std_error,analytic_floor,ratio.
std::string to_csv(const RoundingReport& report);
std::string to_json(const std::vector<TrendRow>& rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace colsparse
