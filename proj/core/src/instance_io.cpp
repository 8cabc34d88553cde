#include "cqht/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cqht/error.hpp"

namespace cqht {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InputParse, where + ": " + what);
}

const json& require_field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) fail(name, "missing field");
  return *it;
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Complex parse_entry(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected an [re, im] pair");
  return {require_number(j[0], where + "[0]"), require_number(j[1], where + "[1]")};
}

DensityMatrix parse_state(const json& j, std::size_t dim, const std::string& where,
                          const ToleranceConfig& tol) {
  if (!j.is_array() || j.empty()) fail(where, "expected a matrix or a state vector");
  const auto d = static_cast<Eigen::Index>(dim);
  const bool is_vector = j[0].is_array() && !j[0].empty() && j[0][0].is_number();

  if (is_vector) {
    if (j.size() != dim) {
      fail(where, "state vector has " + std::to_string(j.size()) + " entries, expected " +
                      std::to_string(dim));
    }
    ComplexVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      v(i) = parse_entry(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
    }
    try {
      return PureState::normalized(std::move(v)).density();
    } catch (const Error& e) {
      fail(where, e.detail());
    }
  }

  if (j.size() != dim) {
    fail(where, "matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(dim));
  }
  ComplexMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const std::string row_where = where + " row " + std::to_string(r);
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != dim) {
      fail(row_where, "expected " + std::to_string(dim) + " [re, im] entries");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      m(r, c) = parse_entry(row[static_cast<std::size_t>(c)],
                            row_where + " col " + std::to_string(c));
    }
  }
  try {
    return DensityMatrix(m, tol);
  } catch (const Error& e) {
    fail(where, std::string(to_string(e.code())) + ": " + e.detail());
  }
}

std::vector<DensityMatrix> parse_set(const json& root, const char* name, std::size_t dim,
                                     const ToleranceConfig& tol) {
  const json& arr = require_field(root, name);
  if (!arr.is_array()) fail(name, "expected a list of states");
  if (arr.empty()) fail(name, "set is empty");
  std::vector<DensityMatrix> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse_state(arr[i], dim, std::string(name) + "[" + std::to_string(i) + "]", tol));
  }
  return out;
}

json state_to_json(const DensityMatrix& rho) {
  json rows = json::array();
  const ComplexMatrix& m = rho.mat();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool InstanceFile::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

HypothesisInstance InstanceFile::instance() const {
  return HypothesisInstance(p, UncertaintySet(set1), UncertaintySet(set2));
}

InstanceFile parse_instance(std::string_view text, const ToleranceConfig& tol) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InputParse, e.what());
  }
  if (!root.is_object()) fail("document", "expected a JSON object");

  InstanceFile f;
  const json& ver = require_field(root, "schema_version");
  if (!ver.is_number_integer()) fail("schema_version", "expected an integer");
  f.schema_version = ver.get<int>();
  if (f.schema_version != kSchemaVersion) {
    fail("schema_version", "unsupported version " + std::to_string(f.schema_version));
  }

  const json& dim = require_field(root, "dim");
  if (!dim.is_number_integer() || dim.get<long long>() < 1) fail("dim", "expected a positive integer");
  f.dim = dim.get<std::size_t>();
  if (f.dim > max_dim()) fail("dim", "exceeds the dimension cap");

  f.p = require_number(require_field(root, "p"), "p");
  f.delta = require_number(require_field(root, "delta"), "delta");
  if (auto it = root.find("id"); it != root.end()) {
    if (!it->is_string()) fail("id", "expected a string");
    f.id = it->get<std::string>();
  }
  if (auto it = root.find("tags"); it != root.end()) {
    if (!it->is_array()) fail("tags", "expected a list of strings");
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_string()) fail("tags[" + std::to_string(i) + "]", "expected a string");
      f.tags.push_back((*it)[i].get<std::string>());
    }
  }
  if (auto it = root.find("dp"); it != root.end()) {
    if (!it->is_object()) fail("dp", "expected an object");
    f.epsilon = require_number(require_field(*it, "epsilon"), "dp.epsilon");
  }

  f.set1 = parse_set(root, "set1", f.dim, tol);
  f.set2 = parse_set(root, "set2", f.dim, tol);
  return f;
}

InstanceFile load_instance(const std::filesystem::path& path, const ToleranceConfig& tol) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputParse, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str(), tol);
  } catch (const Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.detail());
  }
}

std::string write_instance(const InstanceFile& file) {
  // Fixed key order and one matrix row per line keep corpus diffs readable.
  std::ostringstream out;
  out << "{\n  \"schema_version\": " << file.schema_version;
  if (!file.id.empty()) out << ",\n  \"id\": " << json(file.id).dump();
  out << ",\n  \"dim\": " << file.dim;
  out << ",\n  \"p\": " << json(file.p).dump();
  out << ",\n  \"delta\": " << json(file.delta).dump();
  if (file.epsilon) out << ",\n  \"dp\": {\"epsilon\": " << json(*file.epsilon).dump() << "}";
  if (!file.tags.empty()) out << ",\n  \"tags\": " << json(file.tags).dump();
  auto write_set = [&](const char* name, const std::vector<DensityMatrix>& set) {
    out << ",\n  \"" << name << "\": [";
    for (std::size_t i = 0; i < set.size(); ++i) {
      const json rows = state_to_json(set[i]);
      out << (i ? ",\n    [" : "\n    [");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        out << (r ? ",\n     " : "") << rows[r].dump();
      }
      out << "]";
    }
    out << "\n  ]";
  };
  write_set("set1", file.set1);
  write_set("set2", file.set2);
  out << "\n}\n";
  return out.str();
}

void save_instance(const InstanceFile& file, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InputParse, path.string() + ": cannot write file");
  out << write_instance(file);
}

}  // namespace cqht
