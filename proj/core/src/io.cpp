#include "colsparse/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "colsparse/errors.hpp"
#include "json.hpp"

namespace colsparse {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

template <typename T>
T as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad ") + what + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Shortest text that parses back to the same double.
std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PackingInstance packing_from(const json& j) {
  PackingInstance inst;
  inst.n = field<std::size_t>(j, "n");
  inst.m = field<std::size_t>(j, "m");
  inst.capacities = field<std::vector<double>>(j, "capacities");
  inst.weights = field<std::vector<double>>(j, "weights");
  const json& cols = j.at("columns");
  if (!cols.is_array()) throw ValidationError("\"columns\" must be an array");
  for (const json& col : cols) {
    std::vector<Entry> entries;
    if (!col.is_array()) throw ValidationError("each column must be an array");
    for (const json& e : col) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("column entries are [row, coeff] pairs");
      const double row = as<double>(e[0], "row index");
      if (row < 0 || row != static_cast<double>(static_cast<std::size_t>(row))) {
        throw ValidationError("row index must be a nonnegative integer");
      }
      entries.push_back({static_cast<std::size_t>(row), as<double>(e[1], "coefficient")});
    }
    inst.columns.push_back(std::move(entries));
  }
  return inst;
}

json packing_json(const PackingInstance& inst) {
  json cols = json::array();
  for (const auto& col : inst.columns) {
    json c = json::array();
    for (const Entry& e : col) c.push_back(json::array({e.row, e.coeff}));
    cols.push_back(std::move(c));
  }
  return json{{"n", inst.n},
              {"m", inst.m},
              {"capacities", inst.capacities},
              {"weights", inst.weights},
              {"columns", std::move(cols)}};
}

StochasticInstance stochastic_from(const json& j) {
  StochasticInstance inst;
  inst.m = field<std::size_t>(j, "m");
  inst.capacities = field<std::vector<double>>(j, "capacities");
  const json& items = j.at("items");
  if (!items.is_array()) throw ValidationError("\"items\" must be an array");
  for (const json& it : items) {
    StochasticItem item;
    item.support = field<std::vector<std::size_t>>(it, "support");
    const json& scs = it.at("scenarios");
    if (!scs.is_array()) throw ValidationError("\"scenarios\" must be an array");
    for (const json& sc : scs) {
      if (!sc.is_array() || sc.size() != 3) {
        throw ValidationError("scenarios are [probability, weight, [bits]] triples");
      }
      Scenario s;
      s.probability = as<double>(sc[0], "scenario probability");
      s.weight = as<double>(sc[1], "scenario weight");
      for (int bit : as<std::vector<int>>(sc[2], "size vector")) {
        if (bit != 0 && bit != 1) throw ValidationError("size entries must be 0 or 1");
        s.size.push_back(static_cast<std::uint8_t>(bit));
      }
      item.scenarios.push_back(std::move(s));
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

json stochastic_json(const StochasticInstance& inst) {
  json items = json::array();
  for (const auto& item : inst.items) {
    json scs = json::array();
    for (const auto& s : item.scenarios) {
      std::vector<int> bits(s.size.begin(), s.size.end());
      scs.push_back(json::array({s.probability, s.weight, bits}));
    }
    items.push_back(json{{"support", item.support}, {"scenarios", std::move(scs)}});
  }
  return json{{"m", inst.m}, {"capacities", inst.capacities}, {"items", std::move(items)}};
}

Hypergraph hypergraph_from(const json& j) {
  Hypergraph h;
  h.m = field<std::size_t>(j, "m");
  const json& edges = j.at("edges");
  if (!edges.is_array()) throw ValidationError("\"edges\" must be an array");
  for (const json& e : edges) {
    h.edges.push_back({field<std::vector<std::size_t>>(e, "vertices"), field<double>(e, "weight")});
  }
  return h;
}

json hypergraph_json(const Hypergraph& h) {
  json edges = json::array();
  for (const auto& e : h.edges) edges.push_back(json{{"vertices", e.vertices}, {"weight", e.weight}});
  return json{{"m", h.m}, {"edges", std::move(edges)}};
}

TreeNetwork tree_from(const json& j) {
  TreeNetwork net;
  net.parent = field<std::vector<std::int64_t>>(j, "parent");
  net.root = field<std::size_t>(j, "root");
  net.edge_capacity = field<std::vector<double>>(j, "edgeCapacity");
  const json& demands = j.at("demands");
  if (!demands.is_array()) throw ValidationError("\"demands\" must be an array");
  for (const json& d : demands) {
    net.demands.push_back({field<std::size_t>(d, "s"), field<std::size_t>(d, "t"), field<double>(d, "w")});
  }
  return net;
}

json tree_json(const TreeNetwork& net) {
  json demands = json::array();
  for (const auto& d : net.demands) demands.push_back(json{{"s", d.s}, {"t", d.t}, {"w", d.weight}});
  return json{{"parent", net.parent},
              {"root", net.root},
              {"edgeCapacity", net.edge_capacity},
              {"demands", std::move(demands)}};
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bad instance document: ") + e.what());
  }
}

}  // namespace

PackingInstance packing_from_json(const std::string& text) {
  return guarded([&] { return packing_from(parse(text)); });
}
std::string to_json(const PackingInstance& inst) { return dump(packing_json(inst)); }

StochasticInstance stochastic_from_json(const std::string& text) {
  return guarded([&] { return stochastic_from(parse(text)); });
}
std::string to_json(const StochasticInstance& inst) { return dump(stochastic_json(inst)); }

Hypergraph hypergraph_from_json(const std::string& text) {
  return guarded([&] { return hypergraph_from(parse(text)); });
}
std::string to_json(const Hypergraph& h) { return dump(hypergraph_json(h)); }

TreeNetwork tree_from_json(const std::string& text) {
  return guarded([&] { return tree_from(parse(text)); });
}
std::string to_json(const TreeNetwork& net) { return dump(tree_json(net)); }

AnyInstance instance_from_json(const std::string& text) {
  return guarded([&]() -> AnyInstance {
    const json j = parse(text);
    if (!j.is_object()) throw ValidationError("instance document must be a JSON object");
    if (j.contains("parent")) return tree_from(j);
    if (j.contains("edges")) return hypergraph_from(j);
    if (j.contains("items")) return stochastic_from(j);
    if (j.contains("columns")) return packing_from(j);
    throw ValidationError("unrecognised instance document");
  });
}

std::string instance_to_json(const AnyInstance& inst) {
  return std::visit([](const auto& v) { return to_json(v); }, inst);
}

std::string to_json(const FractionalSolution& x) {
  return dump(json{{"x", x.x}, {"objective", x.objective}});
}

FractionalSolution solution_from_json(const std::string& text) {
  return guarded([&] {
    const json j = parse(text);
    FractionalSolution x;
    x.x = field<std::vector<double>>(j, "x");
    x.objective = j.contains("objective") ? field<double>(j, "objective") : 0.0;
    return x;
  });
}

std::string to_json(const ChanceSchedule& s) {
  return dump(json{{"T", s.T}, {"alphas", s.alphas}, {"betas", s.betas}, {"sumBeta", s.total_beta()}});
}

std::string to_json(const OptResult& opt) {
  return dump(json{{"value", opt.value}, {"items", opt.items.members()}});
}

std::string to_json(const RoundingReport& r) {
  json items = json::array();
  for (const auto& it : r.items) {
    items.push_back(json{{"index", it.index},
                         {"x", it.x},
                         {"frequency", it.frequency},
                         {"stdError", it.std_error},
                         {"analyticFloor", it.analytic_floor},
                         {"ratio", it.ratio}});
  }
  return dump(json{{"algorithm", r.algorithm},
                   {"seed", r.seed},
                   {"trialStreams", "trial t replays with stream (seed, t)"},
                   {"trials", r.trials},
                   {"sparsity", r.sparsity},
                   {"lpObjective", r.lp_objective},
                   {"meanObjective", r.mean_objective},
                   {"objectiveStdError", r.objective_std_error},
                   {"feasibleTrials", r.feasible_trials},
                   {"violations", r.violations},
                   {"violatingTrials", r.violating_trials},
                   {"flaggedEstimates", r.flagged_estimates},
                   {"analyticFloor", r.analytic_floor},
                   {"items", std::move(items)}});
}

std::string to_csv(const RoundingReport& r) {
  std::ostringstream os;
  os << "index,x,frequency,std_error,analytic_floor,ratio\n";
  for (const auto& it : r.items) {
    os << it.index << ',' << number(it.x) << ',' << number(it.frequency) << ','
       << number(it.std_error) << ',' << number(it.analytic_floor) << ',' << number(it.ratio)
       << '\n';
  }
  return os.str();
}

std::string to_json(const std::vector<TrendRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(json{{"family", r.family},
                       {"k", r.k},
                       {"measured", r.measured},
                       {"reference", r.reference},
                       {"quantity", r.quantity}});
  }
  return dump(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
  if (!out) throw ValidationError("failed writing " + path);
}

}  // namespace colsparse
