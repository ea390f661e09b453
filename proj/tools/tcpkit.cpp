// tcpkit command-line tool. Every verb writes one JSON report to stdout.
// Exit codes: 0 success, 1 a property or GUS verdict failed, 2 usage or I/O
// error (nothing emitted).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tcpkit/error.hpp"
#include "tcpkit/repro.hpp"
#include "tcpkit/serialize.hpp"

namespace {

using namespace tcpkit;

struct Output {
  std::string file;
  bool pretty = false;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("TCPKIT_SEED");
  if (!env || !*env) return kDefaultSeed;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(env, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(env).size()) {
    throw Error(ErrorCode::kParse, "TCPKIT_SEED is not an unsigned integer");
  }
  return v;
}

void emit(const Json& j, const Output& out) {
  const std::string text = out.pretty ? j.dump(2) : j.dump();
  if (!out.file.empty()) {
    std::ofstream f(out.file);
    if (!f || !(f << text << '\n')) {
      throw Error(ErrorCode::kParse, "cannot write " + out.file);
    }
  }
  std::cout << text << '\n';
}

// "a:b:steps"
GusOptions parse_grid(const std::string& spec, GusOptions o) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw CLI::ValidationError("--grid", "expected a:b:steps");
  }
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    const std::string s1 = spec.substr(0, c1);
    const std::string s2 = spec.substr(c1 + 1, c2 - c1 - 1);
    const std::string s3 = spec.substr(c2 + 1);
    o.grid_lo = std::stod(s1, &u1);
    o.grid_hi = std::stod(s2, &u2);
    o.grid_steps = std::stoi(s3, &u3);
    if (u1 != s1.size() || u2 != s2.size() || u3 != s3.size()) throw 0;
  } catch (...) {
    throw CLI::ValidationError("--grid", "expected a:b:steps");
  }
  if (!(o.grid_lo <= o.grid_hi) || o.grid_steps < 1) {
    throw CLI::ValidationError("--grid", "need a <= b and steps >= 1");
  }
  o.include_grid = true;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tcpkit: tensor complementarity problem toolkit"};
  app.require_subcommand(1, 1);

  Output out;
  int threads = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out.file, "Also write the report to this file");
    sub->add_flag("--pretty", out.pretty, "Indented JSON");
    sub->add_option("--threads", threads, "Worker threads")
        ->check(CLI::Range(1, 256));
  };

  std::string instance_file, tensor_file, method = "enumerate", property,
                                          kind, grid, repro_id;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed_flag;
  std::vector<std::string> q_specs;

  auto* solve = app.add_subcommand("solve", "Solve TCP(q, A)");
  solve->add_option("--instance", instance_file, "Instance JSON")->required();
  solve->add_option("--method", method, "enumerate or iterative")
      ->check(CLI::IsMember({"enumerate", "iterative"}));
  add_common(solve);

  auto* enumerate = app.add_subcommand("enumerate", "All solutions of TCP(q, A)");
  enumerate->add_option("--instance", instance_file, "Instance JSON")
      ->required();
  add_common(enumerate);

  auto* check = app.add_subcommand("check", "Property checker");
  check->add_option("--property", property, "p, ssp, r or strong-p")
      ->required()
      ->check(CLI::IsMember({"p", "ssp", "r", "strong-p"}));
  check->add_option("--tensor", tensor_file, "Tensor JSON")->required();
  check->add_option("--samples", samples, "Sample count");
  check->add_option("--seed", seed_flag, "Random seed");
  add_common(check);

  auto* eigen = app.add_subcommand("eigen", "H- or Z-eigenpairs");
  eigen->add_option("--kind", kind, "h or z")
      ->required()
      ->check(CLI::IsMember({"h", "z"}));
  eigen->add_option("--tensor", tensor_file, "Tensor JSON")->required();
  add_common(eigen);

  auto* gus = app.add_subcommand("gus-probe", "Probe solution uniqueness over q");
  gus->add_option("--tensor", tensor_file, "Tensor JSON")->required();
  gus->add_option("--grid", grid, "q grid a:b:steps per axis (default -2:2:9)");
  gus->add_option("--q", q_specs, "Extra q as comma-separated numbers, repeatable")
      ->allow_extra_args(false);
  add_common(gus);

  auto* repro = app.add_subcommand("repro", "Reproduce the worked examples");
  repro->add_option("case", repro_id, "example1|example2|example3|theorem31|prop41|all")
      ->required()
      ->check(CLI::IsMember(
          {"example1", "example2", "example3", "theorem31", "prop41", "all"}));
  add_common(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "tcpkit: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    const std::uint64_t seed = default_seed();
    if (solve->parsed() || enumerate->parsed()) {
      const TcpInstance inst = instance_from_json(read_json_file(instance_file));
      if (solve->parsed() && method == "iterative") {
        IterativeOptions o;
        o.seed = seed;
        Json j;
        j["method"] = "iterative";
        j["result"] = to_json(solve_iterative(inst, o));
        j["params"] = to_json(o);
        emit(j, out);
        return 0;
      }
      SolverOptions o;
      o.seed = seed;
      o.threads = threads;
      emit(to_json(enumerate_solutions(inst, o)), out);
      return 0;
    }
    if (check->parsed()) {
      const Tensor a = tensor_from_json(read_json_file(tensor_file));
      CheckOptions o;
      o.seed = seed_flag.value_or(seed);
      if (samples) o.samples = *samples;
      o.threads = threads;
      Property p = Property::kP;
      if (property == "ssp") p = Property::kStrictlySemiPositive;
      if (property == "r") p = Property::kR;
      if (property == "strong-p") p = Property::kStrongP;
      const PropertyVerdict v = check_property(p, a, o);
      emit(to_json(v, o), out);
      return v.fails() ? 1 : 0;
    }
    if (eigen->parsed()) {
      const Tensor a = tensor_from_json(read_json_file(tensor_file));
      EigenOptions o;
      o.seed = seed;
      emit(to_json(kind == "h" ? h_eigenpairs(a, o) : z_eigenpairs(a, o), o),
           out);
      return 0;
    }
    if (gus->parsed()) {
      const Tensor a = tensor_from_json(read_json_file(tensor_file));
      GusOptions o;
      o.solver.seed = seed;
      o.solver.threads = threads;
      if (!grid.empty()) o = parse_grid(grid, o);
      std::vector<Vec> qs;
      for (const std::string& s : q_specs) {
        Json j;
        try {
          j = Json::parse("[" + s + "]");
        } catch (const nlohmann::json::exception&) {
          throw Error(ErrorCode::kParse, "--q expects numbers like 0,-1: " + s);
        }
        Vec q = vec_from_json(j);
        if (q.size() != a.dim()) {
          throw Error(ErrorCode::kDimMismatch, "--q has the wrong length");
        }
        qs.push_back(std::move(q));
      }
      const GusReport r = gus_probe(a, qs, o);
      emit(to_json(r, o), out);
      return r.violated ? 1 : 0;
    }
    // repro
    std::vector<ReproReport> reports;
    if (repro_id == "all") {
      for (std::string_view id : kReproCases) {
        reports.push_back(repro_case(id, seed));
      }
      const Json j = to_json(reports);
      emit(j, out);
      return j["pass"].get<bool>() ? 0 : 1;
    }
    reports.push_back(repro_case(repro_id, seed));
    emit(to_json(reports.front()), out);
    return reports.front().pass() ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "tcpkit: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tcpkit: " << e.what() << '\n';
    return 2;
  }
}
