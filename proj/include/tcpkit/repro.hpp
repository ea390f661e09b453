#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tcpkit/serialize.hpp"

namespace tcpkit {

struct ReproCheck {
  std::string name;
  Json expected;
  Json computed;
  double tolerance = 0.0;  // 0 for exact comparisons
  bool pass = false;
};

struct ReproReport {
  std::string case_id;
  std::vector<ReproCheck> checks;
  Json params;  // seeds, grids and solver/checker defaults used
  bool pass() const;
};

inline constexpr std::string_view kReproCases[] = {
    "example1", "example2", "example3", "theorem31", "prop41"};

ReproReport repro_example1(std::uint64_t seed = kDefaultSeed);
ReproReport repro_example2(std::uint64_t seed = kDefaultSeed);
ReproReport repro_example3(std::uint64_t seed = kDefaultSeed);
ReproReport repro_theorem31(std::uint64_t seed = kDefaultSeed);
ReproReport repro_prop41(std::uint64_t seed = kDefaultSeed);

// One of kReproCases. Throws kBadValue for an unknown id.
ReproReport repro_case(std::string_view id, std::uint64_t seed = kDefaultSeed);

// The tensors of the reproduced examples.
Tensor cubic_diagonal_tensor();  // a111 = a222 = 1
Tensor two_root_tensor();  // a1111 = 1, a1112 = -2, a1122 = 1, a2222 = 1
Tensor skew_quartic_tensor();
Tensor diagonal_identity4();  // order 4, n = 2

Json to_json(const ReproReport& r);
// {"reports": [...], "pass": bool}
Json to_json(const std::vector<ReproReport>& reports);

}  // namespace tcpkit
