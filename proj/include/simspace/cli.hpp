#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simspace/augment.hpp"
#include "simspace/mds.hpp"

namespace simspace::cli {

/// Everything a study needs. Loaded from a JSON file; command-line flags
/// override individual fields.
struct StudyConfig {
  std::string dissimilarity;
  std::string similarity;
  std::string conversion = "one-minus";
  std::vector<std::string> embeddings;
  std::string features;
  std::string images;
  std::string output;
  std::vector<int> dims{2, 4, 8};
  int restarts = 4;
  int max_iter = 300;
  double rel_tol = 1e-9;
  std::string init = "both";
  augment::AugmentSpec augment{};
  int factor = 1000;
  double ridge_lambda = 0.0;
  bool standardize = false;
  bool rmse_per_coordinate = false;
  int runs = 10;
  std::uint64_t seed = 0;
  std::optional<int> jobs;

  mds::SmacofConfig smacof(int dims_value) const;
};

/// Parses a JSON study definition; unknown keys are rejected.
StudyConfig parse_study_config(std::string_view json_text);
StudyConfig load_study_config(const std::filesystem::path& path);

/// Entry point; `args[0]` is the program name. Returns the process exit code.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace simspace::cli
