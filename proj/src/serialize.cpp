#include "tcpkit/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tcpkit/error.hpp"

namespace tcpkit {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kParse, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_error("expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_error(std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) {
    parse_error(std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

double number(const Json& v) {
  if (!v.is_number()) parse_error("expected a number");
  return v.get<double>();
}

Json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json points(std::span<const Vec> xs) {
  Json out = Json::array();
  for (const Vec& x : xs) out.push_back(to_json(x));
  return out;
}

Json one_based(std::span<const int> idx) {
  Json out = Json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

Json witness_json(const Witness& w) {
  Json out;
  out["x"] = to_json(w.x);
  if (w.y) out["y"] = to_json(*w.y);
  if (w.t) out["t"] = *w.t;
  out["exact"] = w.exact;
  return out;
}

}  // namespace

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) parse_error("expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = number(j[i]);
  return v;
}

Json to_json(const Tensor& a) {
  Json entries = Json::array();
  for (const Entry& e : a.entries()) {
    Json item;
    item["idx"] = one_based(e.index);
    item["val"] = e.value;
    entries.push_back(std::move(item));
  }
  Json out;
  out["order"] = a.order();
  out["dim"] = a.dim();
  out["entries"] = std::move(entries);
  return out;
}

Tensor tensor_from_json(const Json& j) {
  const int order = int_field(j, "order");
  const int dim = int_field(j, "dim");
  const Json& list = field(j, "entries");
  if (!list.is_array()) parse_error("'entries' must be an array");
  std::vector<Entry> entries;
  entries.reserve(list.size());
  for (const Json& item : list) {
    const Json& idx = field(item, "idx");
    if (!idx.is_array()) parse_error("'idx' must be an array");
    Entry e;
    for (const Json& i : idx) {
      if (!i.is_number_integer()) parse_error("'idx' must hold integers");
      // 1-based in files; out-of-range values are caught by from_entries.
      e.index.push_back(i.get<int>() - 1);
    }
    e.value = number(field(item, "val"));
    entries.push_back(std::move(e));
  }
  return Tensor::from_entries(order, dim, std::move(entries));
}

Json to_json(const TcpInstance& inst) {
  Json out;
  out["tensor"] = to_json(inst.tensor());
  out["q"] = to_json(inst.q());
  return out;
}

TcpInstance instance_from_json(const Json& j) {
  return TcpInstance(tensor_from_json(field(j, "tensor")),
                     vec_from_json(field(j, "q")));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

Json to_json(const ResidualReport& r) {
  Json out;
  out["primal_violation"] = number_or_null(r.primal_violation);
  out["dual_violation"] = number_or_null(r.dual_violation);
  out["complementarity_gap"] = number_or_null(r.complementarity_gap);
  out["componentwise_products"] = to_json(r.componentwise_products);
  return out;
}

Json to_json(const SolverOptions& o) {
  Json out;
  out["root_tol"] = o.root_tol;
  out["solution_tol"] = o.solution_tol;
  out["dedupe_dist"] = o.dedupe_dist;
  out["positivity_floor"] = o.positivity_floor;
  out["grid_points"] = o.grid_points;
  out["radius"] = o.radius;
  out["random_starts"] = o.random_starts;
  out["max_grid_starts"] = o.max_grid_starts;
  out["max_iter"] = o.max_iter;
  out["max_halvings"] = o.max_halvings;
  out["n_max"] = o.n_max;
  out["seed"] = o.seed;
  return out;
}

Json to_json(const SolutionSet& s) {
  Json sols = Json::array();
  for (const Solution& sol : s.solutions) {
    Json item;
    item["x"] = to_json(sol.x);
    item["residuals"] = to_json(sol.report);
    sols.push_back(std::move(item));
  }
  Json out;
  out["solutions"] = std::move(sols);
  out["search_params"] = to_json(s.params);
  out["exhaustive"] = s.exhaustive;
  return out;
}

Json to_json(const IterativeOptions& o) {
  Json out;
  out["start"] = o.start ? to_json(*o.start) : Json(nullptr);
  out["restarts"] = o.restarts;
  out["radius"] = o.radius;
  out["max_iter"] = o.max_iter;
  out["max_halvings"] = o.max_halvings;
  out["solution_tol"] = o.solution_tol;
  out["seed"] = o.seed;
  return out;
}

Json to_json(const IterativeResult& r) {
  Json out;
  out["converged"] = r.converged;
  out["x"] = to_json(r.x);
  out["natural_residual"] = number_or_null(r.residual);
  out["iterations"] = r.iterations;
  out["starts"] = r.starts;
  return out;
}

Json to_json(const GusReport& r, const GusOptions& o) {
  Json records = Json::array();
  for (const GusRecord& rec : r.records) {
    Json item;
    item["q"] = to_json(rec.q);
    item["solution_count"] = rec.count();
    item["solutions"] = points(rec.solutions);
    records.push_back(std::move(item));
  }
  Json grid;
  grid["enabled"] = o.include_grid;
  grid["lo"] = o.grid_lo;
  grid["hi"] = o.grid_hi;
  grid["steps"] = o.grid_steps;
  Json out;
  out["records"] = std::move(records);
  out["flags"] = points(r.flags);
  out["verdict"] = r.violated ? "GUS_violated" : "GUS_consistent";
  out["q_grid"] = std::move(grid);
  out["search_params"] = to_json(o.solver);
  return out;
}

Json to_json(const BoundednessReport& r) {
  Json sets = Json::array();
  for (std::size_t k = 0; k < r.sets.size(); ++k) {
    Json item;
    item["radius"] = r.radii[k];
    Json xs = Json::array();
    for (const Solution& s : r.sets[k].solutions) xs.push_back(to_json(s.x));
    item["solutions"] = std::move(xs);
    item["exhaustive"] = r.sets[k].exhaustive;
    sets.push_back(std::move(item));
  }
  Json out;
  out["sets"] = std::move(sets);
  out["stabilized"] = r.stabilized;
  out["nonempty"] = r.nonempty;
  if (!r.sets.empty()) out["search_params"] = to_json(r.sets.back().params);
  return out;
}

Json to_json(const CheckOptions& o) {
  Json out;
  out["samples"] = o.samples;
  out["refine_top"] = o.refine_top;
  out["refine_iters"] = o.refine_iters;
  out["shrink"] = o.shrink;
  out["initial_step"] = o.initial_step;
  out["witness_margin"] = o.witness_margin;
  out["separation"] = o.separation;
  out["equation_tol"] = o.equation_tol;
  out["r_starts"] = o.r_starts;
  out["n_max"] = o.n_max;
  out["seed"] = o.seed;
  return out;
}

Json to_json(const PropertyVerdict& v, const CheckOptions& o) {
  Json out;
  out["property"] = to_string(v.property);
  out["status"] = to_string(v.status);
  out["witness"] = v.witness ? witness_json(*v.witness) : Json(nullptr);
  out["min_value"] = number_or_null(v.stats.min_value);
  out["samples"] = v.stats.samples;
  out["seed"] = v.stats.seed;
  out["refinements"] = v.stats.refinements;
  out["reason"] = v.reason;
  out["certified"] = v.certified;
  out["params"] = to_json(o);
  return out;
}

Json to_json(const EigenOptions& o) {
  Json out;
  out["grid"] = o.grid;
  out["bisect_tol"] = o.bisect_tol;
  out["residual_tol"] = o.residual_tol;
  out["dedupe"] = o.dedupe;
  out["starts"] = o.starts;
  out["power_iters"] = o.power_iters;
  out["seed"] = o.seed;
  return out;
}

Json to_json(const Spectrum& s, const EigenOptions& o) {
  Json pairs = Json::array();
  for (const EigenPair& p : s.pairs) {
    Json item;
    item["lambda"] = p.lambda;
    item["x"] = to_json(p.x);
    item["residual"] = p.residual;
    pairs.push_back(std::move(item));
  }
  Json out;
  out["kind"] = to_string(s.kind);
  out["pairs"] = std::move(pairs);
  out["heuristic"] = s.heuristic;
  out["degenerate"] = s.degenerate;
  out["params"] = to_json(o);
  return out;
}

Json to_json(const AuditReport& r, const CheckOptions& o) {
  Json entries = Json::array();
  for (const AuditEntry& e : r.entries) {
    Json item;
    item["subset"] = one_based(e.subset);
    item["diagonal_positive"] = e.diagonal_positive;
    for (const auto& [key, v] :
         {std::pair{"p", &e.p}, {"ssp", &e.ssp}, {"r", &e.r},
          {"strong_p", &e.strong_p}}) {
      Json verdict;
      verdict["status"] = to_string(v->status);
      verdict["min_value"] = number_or_null(v->stats.min_value);
      verdict["certified"] = v->certified;
      item[key] = std::move(verdict);
    }
    entries.push_back(std::move(item));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["inconsistencies"] = r.inconsistencies;
  out["consistent"] = r.consistent();
  out["params"] = to_json(o);
  return out;
}

Json to_json(const PositivityReport& r, const EigenOptions& eo,
             const CheckOptions& co) {
  Json out;
  out["h"] = to_json(r.h, eo);
  out["z"] = to_json(r.z, eo);
  out["min_h"] = number_or_null(r.min_h);
  out["min_z"] = number_or_null(r.min_z);
  out["all_positive"] = r.all_positive;
  out["strong_p"] = to_json(r.strong_p, co);
  out["contradiction"] = r.contradiction;
  return out;
}

}  // namespace tcpkit
