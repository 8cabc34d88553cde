#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cqht/hypothesis.hpp"

namespace cqht {

inline constexpr int kSchemaVersion = 1;

/// On-disk instance. States are stored as d x d arrays of [re, im] pairs;
/// a length-d vector of pairs is accepted as a pure state and normalized.
struct InstanceFile {
  int schema_version = kSchemaVersion;
  std::string id;
  std::size_t dim = 2;
  double p = 0.5;
  double delta = 0.01;
  std::vector<DensityMatrix> set1;
  std::vector<DensityMatrix> set2;
  std::optional<double> epsilon;  // "dp": {"epsilon": ...}
  std::vector<std::string> tags;

  bool has_tag(std::string_view tag) const;
  HypothesisInstance instance() const;
};

/// Throws InputParse naming the offending field and index.
InstanceFile parse_instance(std::string_view text, const ToleranceConfig& tol = {});
InstanceFile load_instance(const std::filesystem::path& path, const ToleranceConfig& tol = {});

/// Doubles are written with shortest round-trip precision.
std::string write_instance(const InstanceFile& file);
void save_instance(const InstanceFile& file, const std::filesystem::path& path);

}  // namespace cqht
