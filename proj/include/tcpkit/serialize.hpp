#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "tcpkit/properties.hpp"
#include "tcpkit/solvers.hpp"
#include "tcpkit/spectral.hpp"
#include "tcpkit/tcp.hpp"

namespace tcpkit {

using Json = nlohmann::ordered_json;

// Tensor files use 1-based indices: {"order", "dim", "entries": [{"idx",
// "val"}]}. Parsing throws kParse for malformed documents and the Tensor
// construction errors for bad contents.
Json to_json(const Tensor& a);
Tensor tensor_from_json(const Json& j);

// {"tensor": <tensor>, "q": [...]}
Json to_json(const TcpInstance& inst);
TcpInstance instance_from_json(const Json& j);

// Reads and parses a file. Throws kParse when it cannot be read or parsed.
Json read_json_file(const std::string& path);

Json to_json(const Vec& v);
Vec vec_from_json(const Json& j);

Json to_json(const ResidualReport& r);
Json to_json(const SolverOptions& o);
Json to_json(const SolutionSet& s);
Json to_json(const IterativeOptions& o);
Json to_json(const IterativeResult& r);
Json to_json(const GusReport& r, const GusOptions& o);
Json to_json(const BoundednessReport& r);
Json to_json(const CheckOptions& o);
Json to_json(const PropertyVerdict& v, const CheckOptions& o);
Json to_json(const EigenOptions& o);
Json to_json(const Spectrum& s, const EigenOptions& o);
Json to_json(const AuditReport& r, const CheckOptions& o);
Json to_json(const PositivityReport& r, const EigenOptions& eo,
             const CheckOptions& co);

}  // namespace tcpkit
