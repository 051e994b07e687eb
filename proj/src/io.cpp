#include "gdft/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gdft/errors.hpp"

namespace gdft {

GroupPtr group_from_json(const nlohmann::json& spec) {
  try {
    const std::string type = spec.at("type").get<std::string>();
    if (type == "named") {
      return group_from_named_family(spec.at("family").get<std::string>(),
                                     spec.value("n", spec.value("parameter", 0)));
    }
    if (type == "permutation") {
      int degree = spec.at("degree").get<int>();
      auto gens = spec.at("generators").get<std::vector<std::vector<int>>>();
      return group_from_generators(degree, gens, spec.value("label", std::string{}));
    }
    if (type == "product") {
      const auto& factors = spec.at("factors");
      if (!factors.is_array() || factors.size() < 2)
        throw ParseError("product spec needs at least two factors");
      GroupPtr g = group_from_json(factors[0]);
      for (std::size_t i = 1; i < factors.size(); ++i)
        g = direct_product(g, group_from_json(factors[i]));
      return g;
    }
    throw ParseError("unknown group spec type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad group spec: ") + e.what());
  }
}

GroupPtr group_from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open group spec file: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad group spec JSON: ") + e.what());
  }
  return group_from_json(j);
}

GroupPtr group_from_cli(const std::string& arg) {
  if (arg.find('.') != std::string::npos || arg.find('/') != std::string::npos)
    return group_from_json_file(arg);
  if (arg == "quaternion8" || arg == "q8") return group_from_named_family("quaternion8", 0);
  if (arg == "c2xa5")
    return direct_product(group_from_named_family("cyclic", 2),
                          group_from_named_family("alternating", 5));
  if (arg == "c3xs3")
    return direct_product(group_from_named_family("cyclic", 3),
                          group_from_named_family("symmetric", 3));
  auto colon = arg.find(':');
  if (colon == std::string::npos) throw ParseError("group spec needs name:n or a file: " + arg);
  const std::string name = arg.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(arg.substr(colon + 1));
  } catch (...) {
    throw ParseError("bad group parameter in: " + arg);
  }
  if (name == "sl2") return special_linear_2(n);
  return group_from_named_family(name, n);
}

GroupAlgebraElement alpha_from_file(const std::string& path, const GroupPtr& g) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open coefficient file: " + path);
  GroupAlgebraElement out{g, std::vector<cplx>(g->order()), std::nullopt};
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json j;
    try {
      f >> j;
      if (!j.is_array() || int(j.size()) != g->order())
        throw ParseError("coefficient array length must equal the group order");
      for (int i = 0; i < g->order(); ++i)
        out.coeffs[i] = cplx(j[i][0].get<double>(), j[i][1].get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad coefficient JSON: ") + e.what());
    }
    return out;
  }
  // CSV rows: index,re,im ; header line tolerated
  std::string line;
  int filled = 0;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 3) throw ParseError("CSV row needs index,re,im: " + line);
    int idx;
    double re, im;
    try {
      idx = std::stoi(cols[0]);
      re = std::stod(cols[1]);
      im = std::stod(cols[2]);
    } catch (...) {
      if (filled == 0) continue;  // header
      throw ParseError("bad CSV row: " + line);
    }
    if (idx < 0 || idx >= g->order()) throw ParseError("CSV index out of range: " + line);
    out.coeffs[idx] = cplx(re, im);
    ++filled;
  }
  return out;
}

GroupAlgebraElement alpha_from_cli(const std::string& arg, const GroupPtr& g) {
  if (arg.rfind("random", 0) == 0) {
    std::uint64_t seed = 0;
    auto colon = arg.find(':');
    if (colon != std::string::npos) {
      try {
        seed = std::stoull(arg.substr(colon + 1));
      } catch (...) {
        throw ParseError("bad random seed in: " + arg);
      }
    }
    return random_alpha(g, seed);
  }
  return alpha_from_file(arg, g);
}

nlohmann::json block_diagonal_to_json(const BlockDiagonal& m, const IrrepSet& irreps) {
  nlohmann::json j;
  j["label"] = irreps.group->label();
  j["order"] = irreps.group->order();
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.blocks.size(); ++i) {
    nlohmann::json b;
    b["id"] = int(i);
    b["dim"] = m.blocks[i].rows();
    auto& entries = b["entries"] = nlohmann::json::array();
    for (std::size_t e = 0; e < m.blocks[i].size(); ++e)
      entries.push_back({m.blocks[i].data()[e].real(), m.blocks[i].data()[e].imag()});
    blocks.push_back(std::move(b));
  }
  return j;
}

BlockDiagonal block_diagonal_from_json(const nlohmann::json& j) {
  BlockDiagonal out;
  try {
    for (const auto& b : j.at("blocks")) {
      int dim = b.at("dim").get<int>();
      Matrix m(dim, dim);
      const auto& entries = b.at("entries");
      if (int(entries.size()) != dim * dim) throw ParseError("block entry count mismatch");
      for (int e = 0; e < dim * dim; ++e)
        m.data()[e] = cplx(entries[e][0].get<double>(), entries[e][1].get<double>());
      out.blocks.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad block-diagonal JSON: ") + e.what());
  }
  return out;
}

nlohmann::json trace_to_json(const Trace& trace) {
  nlohmann::json j;
  auto& events = j["events"] = nlohmann::json::array();
  for (const auto& ev : trace.events()) {
    events.push_back({{"stage", ev.stage},
                      {"detail", ev.detail},
                      {"calls", ev.calls},
                      {"cmul", ev.ops.cmul},
                      {"cadd", ev.ops.cadd}});
  }
  return j;
}

std::vector<std::pair<std::string, GroupPtr>> catalog(const std::string& name) {
  std::vector<std::pair<std::string, GroupPtr>> out;
  auto add = [&](const std::string& spec, GroupPtr g) { out.emplace_back(spec, std::move(g)); };
  if (name == "smoke") {
    add("symmetric:3", group_from_named_family("symmetric", 3));
    add("dihedral:6", group_from_named_family("dihedral", 6));
    add("quaternion8", group_from_named_family("quaternion8", 0));
    return out;
  }
  if (name == "cyclic2k") {
    for (int k = 5; k <= 9; ++k)
      add("cyclic:" + std::to_string(1 << k), group_from_named_family("cyclic", 1 << k));
    return out;
  }
  if (name == "triples") {
    add("alternating:5", group_from_named_family("alternating", 5));
    add("c2xa5", group_from_cli("c2xa5"));
    add("sl2:5", special_linear_2(5));
    return out;
  }
  if (name == "acceptance") {
    for (int n = 2; n <= 128; ++n)
      add("cyclic:" + std::to_string(n), group_from_named_family("cyclic", n));
    for (int n = 3; 2 * n <= 128; ++n)
      add("dihedral:" + std::to_string(n), group_from_named_family("dihedral", n));
    add("symmetric:3", group_from_named_family("symmetric", 3));
    add("symmetric:4", group_from_named_family("symmetric", 4));
    add("symmetric:5", group_from_named_family("symmetric", 5));
    add("alternating:4", group_from_named_family("alternating", 4));
    add("alternating:5", group_from_named_family("alternating", 5));
    add("quaternion8", group_from_named_family("quaternion8", 0));
    add("heisenberg:3", group_from_named_family("heisenberg_p", 3));
    add("sl2:5", special_linear_2(5));
    add("c2xa5", group_from_cli("c2xa5"));
    add("c3xs3", group_from_cli("c3xs3"));
    return out;
  }
  throw ParseError("unknown catalog: " + name);
}

}  // namespace gdft
