#include "tcpkit/repro.hpp"

#include <cmath>
#include <cstdio>

#include "tcpkit/error.hpp"

namespace tcpkit {

namespace {

constexpr double kPointTol = 1e-8;

class Builder {
 public:
  explicit Builder(std::string id) { report_.case_id = std::move(id); }

  void close(const std::string& name, double expected, double computed,
             double tol) {
    add(name, expected, number(computed), tol,
        std::abs(expected - computed) <= tol);
  }
  void equal(const std::string& name, const Json& expected,
             const Json& computed) {
    add(name, expected, computed, 0.0, expected == computed);
  }
  // `pass` decided by the caller, e.g. for one-sided bounds.
  void custom(const std::string& name, const Json& expected,
              const Json& computed, double tol, bool pass) {
    add(name, expected, computed, tol, pass);
  }
  void points(const std::string& name, const std::vector<Vec>& expected,
              const std::vector<Vec>& computed, double tol) {
    Json e = Json::array(), c = Json::array();
    for (const Vec& x : expected) e.push_back(to_json(x));
    for (const Vec& x : computed) c.push_back(to_json(x));
    add(name, e, c, tol, same_point_set(expected, computed, tol));
  }

  ReproReport done(Json params) {
    report_.params = std::move(params);
    return std::move(report_);
  }

 private:
  static Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
  }
  void add(const std::string& name, Json expected, Json computed, double tol,
           bool pass) {
    report_.checks.push_back(
        {name, std::move(expected), std::move(computed), tol, pass});
  }

  ReproReport report_;
};

std::vector<Vec> xs_of(const SolutionSet& s) {
  std::vector<Vec> out;
  for (const Solution& sol : s.solutions) out.push_back(sol.x);
  return out;
}

SolverOptions solver_options(std::uint64_t seed) {
  SolverOptions o;
  o.seed = seed;
  return o;
}

CheckOptions check_options(std::uint64_t seed) {
  CheckOptions o;
  o.seed = seed;
  return o;
}

EigenOptions eigen_options(std::uint64_t seed) {
  EigenOptions o;
  o.seed = seed;
  return o;
}

std::string status_name(const PropertyVerdict& v) {
  return std::string(to_string(v.status));
}

// Root of x^3 - 2x^2 + x - 1 in [1, 2] by bisection.
double cubic_root() {
  auto f = [](double x) { return ((x - 2.0) * x + 1.0) * x - 1.0; };
  double lo = 1.0, hi = 2.0;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string q_label(const Vec& q) {
  std::string s = "q=(";
  char buf[32];
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%g", i ? "," : "", q[i]);
    s += buf;
  }
  return s + ")";
}

}  // namespace

bool ReproReport::pass() const {
  for (const ReproCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Tensor cubic_diagonal_tensor() {
  return Tensor::from_entries(3, 2, {{{0, 0, 0}, 1.0}, {{1, 1, 1}, 1.0}});
}

Tensor two_root_tensor() {
  return Tensor::from_entries(4, 2,
                              {{{0, 0, 0, 0}, 1.0},
                               {{0, 0, 0, 1}, -2.0},
                               {{0, 0, 1, 1}, 1.0},
                               {{1, 1, 1, 1}, 1.0}});
}

Tensor skew_quartic_tensor() {
  return Tensor::from_entries(4, 2,
                              {{{0, 0, 0, 0}, 1.0},
                               {{0, 1, 1, 1}, -1.0},
                               {{0, 0, 1, 1}, 1.0},
                               {{1, 1, 1, 1}, 1.0},
                               {{1, 0, 0, 0}, -1.0},
                               {{1, 1, 0, 0}, 1.0}});
}

Tensor diagonal_identity4() {
  const double ones[] = {1.0, 1.0};
  return Tensor::diagonal(4, ones);
}

ReproReport repro_example1(std::uint64_t seed) {
  Builder b("example1");
  const Tensor a = cubic_diagonal_tensor();
  const SolverOptions so = solver_options(seed);
  auto closed_form = [](const Vec& q) {
    Vec x(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      x[i] = q[i] < 0.0 ? std::sqrt(-q[i]) : 0.0;
    }
    return x;
  };

  const auto grid = q_grid(2, -4.0, 4.0, 9);
  std::size_t unique = 0;
  double max_err = 0.0;
  for (const Vec& q : grid) {
    const auto set = enumerate_solutions(TcpInstance(a, q), so);
    if (set.solutions.size() != 1) continue;
    ++unique;
    max_err = std::max(
        max_err, (set.solutions[0].x - closed_form(q)).lpNorm<Eigen::Infinity>());
  }
  b.equal("grid_unique_count", grid.size(), unique);
  b.custom("grid_max_error_vs_closed_form", 0.0, max_err, kPointTol,
           unique == grid.size() && max_err <= kPointTol);

  for (const Vec& q : {Vec{{-4.0, 1.0}}, Vec{{0.0, 0.0}}, Vec{{-2.25, -0.25}}}) {
    const auto set = enumerate_solutions(TcpInstance(a, q), so);
    b.points("solutions_at_" + q_label(q), {closed_form(q)}, xs_of(set),
             kPointTol);
  }

  const CheckOptions co = check_options(seed);
  const auto p = p_tensor_check(a, co);
  b.equal("p_check_status", "certified_fails", status_name(p));
  b.equal("p_check_reason", "odd order", p.reason);

  Json params;
  params["q_grid"] = {{"lo", -4.0}, {"hi", 4.0}, {"steps", 9}};
  params["solver"] = to_json(so);
  params["check"] = to_json(co);
  return b.done(std::move(params));
}

ReproReport repro_example2(std::uint64_t seed) {
  Builder b("example2");
  const Tensor a = two_root_tensor();
  const SolverOptions so = solver_options(seed);
  const CheckOptions co = check_options(seed);

  const auto p = p_tensor_check(a, co);
  b.equal("p_check_status", "not_disproved", status_name(p));
  b.custom("p_check_min_value", "> 0", p.stats.min_value, 0.0,
           p.stats.min_value > 0.0);
  b.custom("p_check_samples", ">= 20000", p.stats.samples, 0.0,
           p.stats.samples >= 20000);

  const Vec q0{{0.0, -1.0}};
  const auto set = enumerate_solutions(TcpInstance(a, q0), so);
  b.equal("solution_count_at_" + q_label(q0), 2, set.solutions.size());
  b.points("solutions_at_" + q_label(q0), {Vec{{0.0, 1.0}}, Vec{{1.0, 1.0}}},
           xs_of(set), kPointTol);

  const auto r = residuals(TcpInstance(a, q0), Vec{{1.0, 1.0}});
  b.custom("residuals_at_(1,1)", 0.0, to_json(r), 1e-12,
           r.max_violation() <= 1e-12 &&
               r.componentwise_products.lpNorm<Eigen::Infinity>() <= 1e-12);

  const Vec q1{{1.0, 1.0}};
  b.points("solutions_at_" + q_label(q1), {Vec{{0.0, 0.0}}},
           xs_of(enumerate_solutions(TcpInstance(a, q1), so)), kPointTol);

  GusOptions go;
  go.solver = so;
  const std::vector<Vec> qs{q0};
  const auto gus = gus_probe(a, qs, go);
  bool flagged = false;
  for (const Vec& f : gus.flags) flagged = flagged || f == q0;
  b.equal("gus_flags_" + q_label(q0), true, flagged);
  b.equal("gus_verdict", "GUS_violated",
          gus.violated ? "GUS_violated" : "GUS_consistent");

  Json params;
  params["q_grid"] = {{"lo", go.grid_lo}, {"hi", go.grid_hi},
                      {"steps", go.grid_steps}};
  params["solver"] = to_json(so);
  params["check"] = to_json(co);
  return b.done(std::move(params));
}

ReproReport repro_example3(std::uint64_t seed) {
  Builder b("example3");
  const Tensor a = skew_quartic_tensor();
  const CheckOptions co = check_options(seed);
  const Vec x{{2.1, -1.9}}, y{{2.0, -2.0}};

  const Vec comp = strong_p_components(a, x, y);
  b.close("psi_component_1", -0.0299, comp[0], 1e-9);
  b.close("psi_component_2", -0.0499, comp[1], 1e-9);

  const double psi = strong_p_objective(a, x, y);
  const double psi2 = strong_p_objective(a, Vec(2.0 * x), Vec(2.0 * y));
  b.close("psi_homogeneity_ratio", 16.0, psi2 / psi, 1e-12);
  b.close("psi_at_equal_points", 0.0, strong_p_objective(a, x, x), 0.0);

  const auto sp = strong_p_check(a, co);
  b.equal("strong_p_check_status", "fails", status_name(sp));
  std::optional<double> margin;
  if (sp.witness) margin = witness_violation(a, Property::kStrongP, *sp.witness, co);
  b.custom("strong_p_witness_margin", "> witness_margin",
           margin ? Json(*margin) : Json(nullptr), co.witness_margin,
           margin && *margin > co.witness_margin);

  const auto p = p_tensor_check(a, co);
  b.equal("p_check_status", "not_disproved", status_name(p));

  Json params;
  params["check"] = to_json(co);
  return b.done(std::move(params));
}

ReproReport repro_theorem31(std::uint64_t seed) {
  Builder b("theorem31");
  const Tensor a = two_root_tensor();
  const SolverOptions so = solver_options(seed);
  const std::vector<double> radii{2.0, 10.0, 100.0};
  const double root = cubic_root();

  const std::vector<std::pair<Vec, std::vector<Vec>>> cases{
      {Vec{{0.0, -1.0}}, {Vec{{0.0, 1.0}}, Vec{{1.0, 1.0}}}},
      {Vec{{1.0, 1.0}}, {Vec{{0.0, 0.0}}}},
      {Vec{{-1.0, -1.0}}, {Vec{{root, 1.0}}}},
  };
  for (const auto& [q, expected] : cases) {
    const auto rep = boundedness_probe(TcpInstance(a, q), radii, so);
    const std::string tag = q_label(q);
    b.equal("nonempty_" + tag, true, rep.nonempty);
    b.equal("stabilized_" + tag, true, rep.stabilized);
    b.points("solutions_" + tag, expected, xs_of(rep.sets.back()), kPointTol);
  }

  Json params;
  params["radii"] = radii;
  params["solver"] = to_json(so);
  return b.done(std::move(params));
}

ReproReport repro_prop41(std::uint64_t seed) {
  Builder b("prop41");
  const CheckOptions co = check_options(seed);
  const EigenOptions eo = eigen_options(seed);

  const Tensor id = diagonal_identity4();
  const auto audit_id = implication_audit(id, co);
  b.equal("identity_audit_inconsistencies", Json::array(),
          audit_id.inconsistencies);
  b.equal("identity_diagonal_positive", true, diagonal_positivity(id));
  const auto pos_id = positivity_report(id, eo, co);
  b.equal("identity_all_eigenvalues_positive", true, pos_id.all_positive);
  b.close("identity_min_z_eigenvalue", 0.5, pos_id.min_z, 1e-10);
  b.equal("identity_contradiction", false, pos_id.contradiction);

  const int first[] = {0};
  const auto sub = strong_p_check(principal_subtensor(id, first), co);
  b.equal("identity_subtensor_{1}_strong_p",
          Json{{"status", "not_disproved"}, {"certified", true}},
          Json{{"status", status_name(sub)}, {"certified", sub.certified}});

  const Tensor ex = skew_quartic_tensor();
  const auto audit_ex = implication_audit(ex, co);
  b.equal("skew_audit_inconsistencies", Json::array(),
          audit_ex.inconsistencies);
  b.equal("skew_diagonal_positive", true, diagonal_positivity(ex));
  b.equal("skew_strong_p_status", "fails",
          status_name(audit_ex.entries.front().strong_p));
  b.equal("skew_p_status", "not_disproved",
          status_name(audit_ex.entries.front().p));
  const auto pos_ex = positivity_report(ex, eo, co);
  b.equal("skew_contradiction", false, pos_ex.contradiction);

  Json params;
  params["check"] = to_json(co);
  params["eigen"] = to_json(eo);
  return b.done(std::move(params));
}

ReproReport repro_case(std::string_view id, std::uint64_t seed) {
  if (id == "example1") return repro_example1(seed);
  if (id == "example2") return repro_example2(seed);
  if (id == "example3") return repro_example3(seed);
  if (id == "theorem31") return repro_theorem31(seed);
  if (id == "prop41") return repro_prop41(seed);
  throw Error(ErrorCode::kBadValue, "unknown repro case " + std::string(id));
}

Json to_json(const ReproReport& r) {
  Json expected = Json::object(), computed = Json::object(),
       tolerances = Json::object(), checks = Json::array();
  for (const ReproCheck& c : r.checks) {
    expected[c.name] = c.expected;
    computed[c.name] = c.computed;
    tolerances[c.name] = c.tolerance;
    checks.push_back({{"name", c.name}, {"pass", c.pass}});
  }
  Json out;
  out["case"] = r.case_id;
  out["pass"] = r.pass();
  out["expected"] = std::move(expected);
  out["computed"] = std::move(computed);
  out["tolerances"] = std::move(tolerances);
  out["checks"] = std::move(checks);
  out["params"] = r.params;
  return out;
}

Json to_json(const std::vector<ReproReport>& reports) {
  Json list = Json::array();
  bool pass = true;
  for (const ReproReport& r : reports) {
    list.push_back(to_json(r));
    pass = pass && r.pass();
  }
  Json out;
  out["reports"] = std::move(list);
  out["pass"] = pass;
  return out;
}

}  // namespace tcpkit
