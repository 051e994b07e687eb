#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <utility>
#include <vector>

#include "gdft/dft.hpp"

namespace gdft {

/// Group spec JSON:
///   {"type":"named","family":"dihedral","n":6}
///   {"type":"permutation","degree":5,"generators":[[1,2,3,4,0],[1,0,2,3,4]]}
///   {"type":"product","factors":[<spec>, <spec>]}
GroupPtr group_from_json(const nlohmann::json& spec);
GroupPtr group_from_json_file(const std::string& path);

/// "name:n" shorthand (cyclic:8, dihedral:6, symmetric:4, alternating:5,
/// quaternion8, heisenberg:3, sl2:5, c2xa5, c3xs3) or a path to a spec file.
GroupPtr group_from_cli(const std::string& arg);

/// Coefficient vectors: CSV rows "index,re,im" or a JSON array of [re,im]
/// pairs; "random:<seed>" draws the portable seeded vector.
GroupAlgebraElement alpha_from_cli(const std::string& arg, const GroupPtr& g);
GroupAlgebraElement alpha_from_file(const std::string& path, const GroupPtr& g);

nlohmann::json block_diagonal_to_json(const BlockDiagonal& m, const IrrepSet& irreps);
BlockDiagonal block_diagonal_from_json(const nlohmann::json& j);

nlohmann::json trace_to_json(const Trace& trace);

/// Built-in benchmark catalogs: "smoke", "cyclic2k", "triples",
/// "acceptance" (the full verification catalog).
std::vector<std::pair<std::string, GroupPtr>> catalog(const std::string& name);

}  // namespace gdft
