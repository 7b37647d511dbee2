#pragma once

// JSON input files and report serialization. Schema errors carry a JSON
// pointer to the offending value.
//
// norm:   {"kind": "euclidean", "dim": N}
//         {"kind": "randers", "a": [[..]], "b": [..]}
//         {"kind": "example4", "A": .., "B": .., "eps1": .., "eps2": ..}
//         {"kind": "expression", "dim": N, "text": "..."}
// germ:   {"n": n, "p": p, "d2": [p arrays n x n], "d3": [p arrays n x n x n]}
//         d3 may be omitted (zero). Arrays are symmetrized on input.
// pencil: {"A1": [[..]], "A2": [[..]], "psi1": [[[..]]], "psi2": [[[..]]]}
//         psi1 and psi2 are only needed for the common-zero search.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "finsub/curvature.hpp"
#include "finsub/example.hpp"
#include "finsub/germ.hpp"
#include "finsub/invariants.hpp"
#include "finsub/minkowski.hpp"
#include "finsub/pencil.hpp"

namespace finsub {

using Json = nlohmann::ordered_json;

/// Parses text; syntax errors become SchemaError at pointer "".
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

NormModel norm_from_json(const Json& j, const std::string& pointer = "");
Germ germ_from_json(const Json& j, const std::string& pointer = "");

struct PencilFile {
  SymPencil pencil;
  std::optional<Sym3> psi1;
  std::optional<Sym3> psi2;
};
PencilFile pencil_from_json(const Json& j, const std::string& pointer = "");

struct RunConfig {
  std::optional<Json> norm;  // validated lazily by the subcommand that needs it
  std::optional<Json> germ;
  std::uint64_t seed = 0;
};
RunConfig config_from_json(const Json& j);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Germ& g);
Json to_json(const CurvatureReport& r);
Json to_json(const ValidationReport& r);
Json to_json(const TypeValue& t);
Json to_json(const AuditReport& r);
Json to_json(const RuledAuditReport& r);
Json to_json(const SpectralData& s);
Json to_json(const CanonicalData& c);
Json to_json(const TopologyLabel& t);
Json to_json(const GenericityReport& g);
Json to_json(const ExampleParams& p);
Json to_json(const ExampleReport& r);

}  // namespace finsub
