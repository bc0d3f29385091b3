#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rigel/equivariant.hpp"
#include "rigel/genera.hpp"
#include "rigel/loops.hpp"

namespace rigel {

inline constexpr int kDatasetSchemaVersion = 1;

enum class DatasetKind { model, equivariant, loop };

inline std::string dataset_kind_name(DatasetKind k) {
  switch (k) {
    case DatasetKind::model: return "model";
    case DatasetKind::equivariant: return "equivariant";
    case DatasetKind::loop: return "loop";
  }
  throw std::invalid_argument("unknown dataset kind");
}

inline DatasetKind dataset_kind_from_name(const std::string& name) {
  if (name == "model") return DatasetKind::model;
  if (name == "equivariant") return DatasetKind::equivariant;
  if (name == "loop") return DatasetKind::loop;
  throw std::invalid_argument("dataset kind must be model, equivariant or loop, got \"" +
                              name + "\"");
}

// Raised by the loaders with the file path and the first violated invariant.
struct DatasetError : std::runtime_error {
  DatasetError(std::string file, std::string first_violation)
      : std::runtime_error(file + ": " + first_violation),
        path(std::move(file)),
        detail(std::move(first_violation)) {}
  std::string path;
  std::string detail;
};

// One dataset file: a version, a payload kind, the declared hypothesis flags
// of the rigidity statements, and exactly one payload.  The flags are copied
// into the payload structs on load so downstream checks read one source.
struct DatasetFile {
  int schema_version = kDatasetSchemaVersion;
  DatasetKind kind = DatasetKind::equivariant;
  bool g_star_one = false;
  bool c3_zero = false;
  bool p1_condition = false;
  std::optional<ModelManifold> model;
  std::optional<EquivariantData> equivariant;
  std::optional<LoopMap> loop;
};

namespace dataset_detail {

using Json = nlohmann::ordered_json;

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) {
    throw std::invalid_argument(where + " must be an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw std::invalid_argument(where + " is missing member \"" + key + "\"");
  }
  return *it;
}

inline int int_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_number_integer()) {
    throw std::invalid_argument(where + "." + key + " must be an integer");
  }
  return v.get<int>();
}

inline bool bool_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_boolean()) {
    throw std::invalid_argument(where + "." + key + " must be a boolean");
  }
  return v.get<bool>();
}

inline std::string string_member(const Json& j, const char* key,
                                 const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) {
    throw std::invalid_argument(where + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

inline double double_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_number()) {
    throw std::invalid_argument(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

inline const Json& array_member(const Json& j, const char* key,
                                const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_array()) {
    throw std::invalid_argument(where + "." + key + " must be an array");
  }
  return v;
}

inline GenTablePtr table_from_json(const Json& j, const std::string& where) {
  const int cap = int_member(j, "degree_cap", where);
  std::vector<Generator> gens;
  for (const Json& g : array_member(j, "generators", where)) {
    const std::string at = where + ".generators[" + std::to_string(gens.size()) + "]";
    gens.push_back(Generator{string_member(g, "name", at), int_member(g, "degree", at),
                             bool_member(g, "odd", at)});
  }
  return std::make_shared<GenTable>(std::move(gens), cap);
}

inline Mono mono_from_json(const Json& j, const GenTablePtr& tab,
                           const std::string& where) {
  const Json& arr = array_member(j, "mono", where);
  Mono m;
  for (const Json& v : arr) {
    if (!v.is_number_integer()) {
      throw std::invalid_argument(where + ".mono entries must be integers");
    }
    m.push_back(v.get<int>());
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 0 || m[i] >= tab->size()) {
      throw std::invalid_argument(where + ".mono indexes no generator");
    }
    if (i + 1 < m.size() && m[i] > m[i + 1]) {
      throw std::invalid_argument(where + ".mono must list generator indices in "
                                          "nondecreasing order");
    }
    if (i + 1 < m.size() && m[i] == m[i + 1] && tab->gen(m[i]).odd) {
      throw std::invalid_argument(where + ".mono repeats the odd generator \"" +
                                  tab->gen(m[i]).name + "\"");
    }
  }
  return m;
}

inline Cplx coeff_from_json(const Json& j, const std::string& where) {
  return Cplx(double_member(j, "re", where), double_member(j, "im", where));
}

inline GradedC graded_from_json(const Json& j, const GenTablePtr& tab,
                                const std::string& where) {
  if (!j.is_array()) {
    throw std::invalid_argument(where + " must be an array of terms");
  }
  GradedC out(tab);
  int i = 0;
  for (const Json& term : j) {
    const std::string at = where + "[" + std::to_string(i++) + "]";
    out.add_term(mono_from_json(term, tab, at),
                 QSeriesC::monomial(0, coeff_from_json(term, at),
                                    QSeriesC::kExactTrunc2));
  }
  return out;
}

inline BundleRootData roots_from_json(const Json& j, const GenTablePtr& tab,
                                      const std::string& where) {
  BundleRootData vb;
  vb.name = string_member(j, "name", where);
  vb.rank = int_member(j, "rank", where);
  vb.paired = bool_member(j, "paired", where);
  vb.table = tab;
  int i = 0;
  for (const Json& r : array_member(j, "roots", where)) {
    vb.roots.push_back(
        graded_from_json(r, tab, where + ".roots[" + std::to_string(i++) + "]"));
  }
  return vb;
}

inline OddClassVector odd_classes_from_json(const Json& j, const GenTablePtr& tab,
                                            const std::string& where) {
  OddClassVector out(tab);
  int i = 0;
  for (const Json& cls : j) {
    const std::string at = where + "[" + std::to_string(i++) + "]";
    out.set(int_member(cls, "degree", at),
            graded_from_json(member(cls, "terms", at), tab, at + ".terms"));
  }
  return out;
}

inline std::map<Mono, Cplx> pairing_from_json(const Json& j, const GenTablePtr& tab,
                                              const std::string& where) {
  std::map<Mono, Cplx> out;
  int i = 0;
  for (const Json& entry : j) {
    const std::string at = where + "[" + std::to_string(i++) + "]";
    Mono m = mono_from_json(entry, tab, at);
    if (!out.emplace(std::move(m), coeff_from_json(entry, at)).second) {
      throw std::invalid_argument(at + " repeats a pairing monomial");
    }
  }
  return out;
}

inline FixedComponent component_from_json(const Json& j, const std::string& where) {
  FixedComponent c{std::string(), 1, nullptr, BundleRootData{}, {}, {},
                   OddClassVector(table_from_json(member(j, "table", where), where)),
                   {}};
  c.table = c.odd_classes.table();
  c.name = string_member(j, "name", where);
  c.dim = int_member(j, "dim", where);
  c.tangent = roots_from_json(member(j, "tangent", where), c.table, where + ".tangent");
  int i = 0;
  for (const Json& s : array_member(j, "normal", where)) {
    const std::string at = where + ".normal[" + std::to_string(i++) + "]";
    const int gamma = int_member(s, "gamma", at);
    if (gamma == 0) {
      throw std::invalid_argument(at + " violates the weight constraint "
                                       "γ ∈ ℤ∖{0}");
    }
    c.normal.push_back(
        NormalSummand{gamma, roots_from_json(member(s, "bundle", at), c.table,
                                             at + ".bundle")});
  }
  i = 0;
  for (const Json& s : array_member(j, "vbundle", where)) {
    const std::string at = where + ".vbundle[" + std::to_string(i++) + "]";
    c.vbundle.push_back(
        VSummand{int_member(s, "nu", at), roots_from_json(member(s, "bundle", at),
                                                          c.table, at + ".bundle")});
  }
  c.odd_classes = odd_classes_from_json(array_member(j, "odd_classes", where), c.table,
                                        where + ".odd_classes");
  c.pairing =
      pairing_from_json(array_member(j, "pairing", where), c.table, where + ".pairing");
  return c;
}

inline EquivariantData equivariant_from_json(const Json& j, const std::string& where) {
  EquivariantData d;
  d.name = string_member(j, "name", where);
  d.ambient_dim = int_member(j, "ambient_dim", where);
  d.rank_e = int_member(j, "rank_e", where);
  if (j.contains("anomaly_n")) {
    const Json& v = j["anomaly_n"];
    if (!v.is_number_integer()) {
      throw std::invalid_argument(where + ".anomaly_n must be an integer");
    }
    d.anomaly_n = v.get<long long>();
  }
  int i = 0;
  for (const Json& c : array_member(j, "components", where)) {
    d.components.push_back(
        component_from_json(c, where + ".components[" + std::to_string(i++) + "]"));
  }
  return d;
}

inline ModelManifold model_from_json(const Json& j, const std::string& where) {
  GenTablePtr tab = table_from_json(member(j, "table", where), where + ".table");
  return ModelManifold{
      string_member(j, "name", where),
      int_member(j, "dim", where),
      tab,
      roots_from_json(member(j, "tangent", where), tab, where + ".tangent"),
      odd_classes_from_json(array_member(j, "odd_classes", where), tab,
                            where + ".odd_classes"),
      pairing_from_json(array_member(j, "pairing", where), tab, where + ".pairing"),
      false,
      false};
}

inline LoopMap loop_from_json(const Json& j, const std::string& where) {
  LoopMap loop;
  const std::string domain = string_member(j, "domain", where);
  if (domain == "circle") {
    loop.domain = LoopDomain::circle;
    loop.n_phi = int_member(j, "n_phi", where);
  } else if (domain == "sphere3") {
    loop.domain = LoopDomain::sphere3;
    loop.n_eta = int_member(j, "n_eta", where);
    loop.n_xi = int_member(j, "n_xi", where);
  } else {
    throw std::invalid_argument(where + ".domain must be circle or sphere3");
  }
  loop.rank = int_member(j, "rank", where);
  if (loop.rank < 1) {
    throw std::invalid_argument(where + ".rank must be positive");
  }
  const Json& data = array_member(j, "data", where);
  const std::size_t need = 2ull * loop.node_count() * loop.rank * loop.rank;
  if (data.size() != need) {
    throw std::invalid_argument(where + ".data must hold " + std::to_string(need) +
                                " numbers, got " + std::to_string(data.size()));
  }
  loop.data.reserve(need / 2);
  for (std::size_t i = 0; i + 1 < data.size(); i += 2) {
    if (!data[i].is_number() || !data[i + 1].is_number()) {
      throw std::invalid_argument(where + ".data entries must be numbers");
    }
    loop.data.emplace_back(data[i].get<double>(), data[i + 1].get<double>());
  }
  return loop;
}

inline Json coeff_to_json(const Cplx& z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

inline Json term_to_json(const Mono& m, const Cplx& z) {
  Json t;
  t["mono"] = m;
  t["re"] = z.real();
  t["im"] = z.imag();
  return t;
}

inline Json graded_to_json(const GradedC& g) {
  Json out = Json::array();
  for (const auto& [mono, coeff] : g.terms()) {
    out.push_back(term_to_json(mono, coeff.at(0)));
  }
  return out;
}

inline Json table_to_json(const GenTablePtr& tab) {
  Json gens = Json::array();
  for (int i = 0; i < tab->size(); ++i) {
    const Generator& g = tab->gen(i);
    gens.push_back(Json{{"name", g.name}, {"degree", g.degree}, {"odd", g.odd}});
  }
  return Json{{"degree_cap", tab->degree_cap()}, {"generators", std::move(gens)}};
}

inline Json roots_to_json(const BundleRootData& vb) {
  Json roots = Json::array();
  for (const GradedC& r : vb.roots) roots.push_back(graded_to_json(r));
  return Json{{"name", vb.name},
              {"rank", vb.rank},
              {"paired", vb.paired},
              {"roots", std::move(roots)}};
}

inline Json odd_classes_to_json(const OddClassVector& c) {
  Json out = Json::array();
  for (const auto& [degree, value] : c.classes()) {
    out.push_back(Json{{"degree", degree}, {"terms", graded_to_json(value)}});
  }
  return out;
}

inline Json pairing_to_json(const std::map<Mono, Cplx>& pairing) {
  Json out = Json::array();
  for (const auto& [mono, value] : pairing) out.push_back(term_to_json(mono, value));
  return out;
}

inline Json component_to_json(const FixedComponent& c) {
  Json out;
  out["name"] = c.name;
  out["dim"] = c.dim;
  out["table"] = table_to_json(c.table);
  out["tangent"] = roots_to_json(c.tangent);
  Json normal = Json::array();
  for (const NormalSummand& s : c.normal) {
    normal.push_back(Json{{"gamma", s.gamma}, {"bundle", roots_to_json(s.bundle)}});
  }
  out["normal"] = std::move(normal);
  Json vbundle = Json::array();
  for (const VSummand& s : c.vbundle) {
    vbundle.push_back(Json{{"nu", s.nu}, {"bundle", roots_to_json(s.bundle)}});
  }
  out["vbundle"] = std::move(vbundle);
  out["odd_classes"] = odd_classes_to_json(c.odd_classes);
  out["pairing"] = pairing_to_json(c.pairing);
  return out;
}

inline Json equivariant_to_json(const EquivariantData& d) {
  Json out;
  out["name"] = d.name;
  out["ambient_dim"] = d.ambient_dim;
  out["rank_e"] = d.rank_e;
  if (d.anomaly_n) out["anomaly_n"] = *d.anomaly_n;
  Json comps = Json::array();
  for (const FixedComponent& c : d.components) comps.push_back(component_to_json(c));
  out["components"] = std::move(comps);
  return out;
}

inline Json model_to_json(const ModelManifold& m) {
  Json out;
  out["name"] = m.name;
  out["dim"] = m.dim;
  out["table"] = table_to_json(m.table);
  out["tangent"] = roots_to_json(m.tangent);
  out["odd_classes"] = odd_classes_to_json(m.odd_classes);
  out["pairing"] = pairing_to_json(m.pairing);
  return out;
}

inline Json loop_to_json(const LoopMap& loop) {
  Json out;
  if (loop.domain == LoopDomain::circle) {
    out["domain"] = "circle";
    out["n_phi"] = loop.n_phi;
  } else {
    out["domain"] = "sphere3";
    out["n_eta"] = loop.n_eta;
    out["n_xi"] = loop.n_xi;
  }
  out["rank"] = loop.rank;
  Json data = Json::array();
  for (const Cplx& z : loop.data) {
    data.push_back(z.real());
    data.push_back(z.imag());
  }
  out["data"] = std::move(data);
  return out;
}

inline DatasetFile file_from_json(const Json& j) {
  DatasetFile file;
  file.schema_version = int_member(j, "schema_version", "dataset");
  if (file.schema_version != kDatasetSchemaVersion) {
    throw std::invalid_argument("unsupported schema_version " +
                                std::to_string(file.schema_version) + ", expected " +
                                std::to_string(kDatasetSchemaVersion));
  }
  file.kind = dataset_kind_from_name(string_member(j, "kind", "dataset"));
  if (file.kind != DatasetKind::loop || j.contains("hypotheses")) {
    const Json& flags = member(j, "hypotheses", "dataset");
    file.g_star_one = bool_member(flags, "g_star_one", "dataset.hypotheses");
    file.c3_zero = bool_member(flags, "c3_zero", "dataset.hypotheses");
    file.p1_condition = bool_member(flags, "p1_condition", "dataset.hypotheses");
  }
  switch (file.kind) {
    case DatasetKind::model: {
      ModelManifold m = model_from_json(member(j, "model", "dataset"), "model");
      m.c3_zero = file.c3_zero;
      m.p1_zero = file.p1_condition;
      validate_model(m);
      file.model = std::move(m);
      break;
    }
    case DatasetKind::equivariant: {
      EquivariantData d =
          equivariant_from_json(member(j, "equivariant", "dataset"), "equivariant");
      d.g_star_one = file.g_star_one;
      d.c3_zero = file.c3_zero;
      d.p1_condition = file.p1_condition;
      validate_equivariant_data(d);
      file.equivariant = std::move(d);
      break;
    }
    case DatasetKind::loop: {
      LoopMap loop = loop_from_json(member(j, "loop", "dataset"), "loop");
      loop_detail::require_shape(loop);
      loop_detail::require_unitary(loop);
      file.loop = std::move(loop);
      break;
    }
  }
  return file;
}

inline Json file_to_json(const DatasetFile& file) {
  Json out;
  out["schema_version"] = file.schema_version;
  out["kind"] = dataset_kind_name(file.kind);
  bool g_star = file.g_star_one;
  bool c3 = file.c3_zero;
  bool p1 = file.p1_condition;
  if (file.kind == DatasetKind::equivariant) {
    if (!file.equivariant) {
      throw std::invalid_argument("equivariant dataset without payload");
    }
    g_star = file.equivariant->g_star_one;
    c3 = file.equivariant->c3_zero;
    p1 = file.equivariant->p1_condition;
  } else if (file.kind == DatasetKind::model) {
    if (!file.model) throw std::invalid_argument("model dataset without payload");
    c3 = file.model->c3_zero;
    p1 = file.model->p1_zero;
  } else if (!file.loop) {
    throw std::invalid_argument("loop dataset without payload");
  }
  out["hypotheses"] =
      Json{{"g_star_one", g_star}, {"c3_zero", c3}, {"p1_condition", p1}};
  switch (file.kind) {
    case DatasetKind::model: out["model"] = model_to_json(*file.model); break;
    case DatasetKind::equivariant:
      out["equivariant"] = equivariant_to_json(*file.equivariant);
      break;
    case DatasetKind::loop: out["loop"] = loop_to_json(*file.loop); break;
  }
  return out;
}

}  // namespace dataset_detail

// Parses and validates one dataset file.  Throws DatasetError carrying the
// path and the first violated invariant.
inline DatasetFile load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(path, "cannot open file");
  dataset_detail::Json j;
  try {
    j = dataset_detail::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(path, std::string("malformed JSON: ") + e.what());
  }
  try {
    return dataset_detail::file_from_json(j);
  } catch (const std::exception& e) {
    throw DatasetError(path, e.what());
  }
}

inline void save_dataset(const DatasetFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError(path, "cannot open file for writing");
  out << dataset_detail::file_to_json(file).dump(2) << "\n";
}

// Sampled-loop CSV: a header row "circle,rank,n_phi" or
// "sphere3,rank,n_eta,n_xi", then one row per grid node holding the node
// index followed by the matrix entries row-major, real and imaginary parts
// interleaved.  Lines starting with # are skipped.
inline LoopMap load_loop_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(path, "cannot open file");
  auto next_row = [&in](std::vector<std::string>& cells) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      cells.clear();
      std::stringstream row(line);
      std::string cell;
      while (std::getline(row, cell, ',')) cells.push_back(cell);
      return true;
    }
    return false;
  };
  auto to_int = [&path](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw DatasetError(path, std::string(what) + " must be an integer, got \"" + s +
                                   "\"");
    }
  };
  std::vector<std::string> cells;
  if (!next_row(cells)) throw DatasetError(path, "missing header row");
  LoopMap loop;
  if (cells[0] == "circle") {
    if (cells.size() != 3) {
      throw DatasetError(path, "circle header must be circle,rank,n_phi");
    }
    loop.domain = LoopDomain::circle;
    loop.rank = to_int(cells[1], "rank");
    loop.n_phi = to_int(cells[2], "n_phi");
  } else if (cells[0] == "sphere3") {
    if (cells.size() != 4) {
      throw DatasetError(path, "sphere header must be sphere3,rank,n_eta,n_xi");
    }
    loop.domain = LoopDomain::sphere3;
    loop.rank = to_int(cells[1], "rank");
    loop.n_eta = to_int(cells[2], "n_eta");
    loop.n_xi = to_int(cells[3], "n_xi");
  } else {
    throw DatasetError(path, "loop domain must be circle or sphere3, got \"" +
                                 cells[0] + "\"");
  }
  if (loop.rank < 1) throw DatasetError(path, "rank must be positive");
  const int nodes = loop.node_count();
  if (nodes < 1) throw DatasetError(path, "grid resolution must be positive");
  const std::size_t stride = 2ull * loop.rank * loop.rank;
  loop.data.assign((std::size_t)nodes * loop.rank * loop.rank, Cplx(0.0, 0.0));
  for (int node = 0; node < nodes; ++node) {
    if (!next_row(cells)) {
      throw DatasetError(path, "missing row for node " + std::to_string(node));
    }
    if (cells.size() != stride + 1) {
      throw DatasetError(path, "node row needs " + std::to_string(stride + 1) +
                                   " cells, got " + std::to_string(cells.size()));
    }
    if (to_int(cells[0], "node index") != node) {
      throw DatasetError(path, "node rows must be listed in order, expected " +
                                   std::to_string(node) + " got " + cells[0]);
    }
    for (std::size_t i = 0; i < stride; i += 2) {
      try {
        std::size_t used_re = 0;
        std::size_t used_im = 0;
        const double re = std::stod(cells[1 + i], &used_re);
        const double im = std::stod(cells[2 + i], &used_im);
        if (used_re != cells[1 + i].size() || used_im != cells[2 + i].size()) {
          throw std::invalid_argument("trailing characters");
        }
        loop.data[(std::size_t)node * loop.rank * loop.rank + i / 2] = Cplx(re, im);
      } catch (const std::exception&) {
        throw DatasetError(path, "matrix entries must be numbers at node " +
                                     std::to_string(node));
      }
    }
  }
  if (next_row(cells)) {
    throw DatasetError(path, "trailing rows past node " + std::to_string(nodes - 1));
  }
  try {
    loop_detail::require_shape(loop);
    loop_detail::require_unitary(loop);
  } catch (const std::exception& e) {
    throw DatasetError(path, e.what());
  }
  return loop;
}

inline void save_loop_csv(const LoopMap& loop, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError(path, "cannot open file for writing");
  char buf[64];
  if (loop.domain == LoopDomain::circle) {
    out << "circle," << loop.rank << "," << loop.n_phi << "\n";
  } else {
    out << "sphere3," << loop.rank << "," << loop.n_eta << "," << loop.n_xi << "\n";
  }
  const std::size_t stride = (std::size_t)loop.rank * loop.rank;
  for (int node = 0; node < loop.node_count(); ++node) {
    out << node;
    for (std::size_t i = 0; i < stride; ++i) {
      const Cplx& z = loop.data[node * stride + i];
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", z.real(), z.imag());
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace rigel
