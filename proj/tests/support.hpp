#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simspace/core.hpp"
#include "simspace/rng.hpp"

namespace testing {

// Fresh, empty scratch directory under SIMSPACE_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch(const std::string& name) {
  const char* root = std::getenv("SIMSPACE_TEST_TMP");
  const auto base = root ? std::filesystem::path(root) : std::filesystem::temp_directory_path() / "simspace_tests";
  const auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<std::string> ids(int n, const std::string& prefix = "s") {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline Eigen::MatrixXd random_points(simspace::Rng& rng, int n, int d, double spread = 1.0) {
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.normal(0.0, spread);
  }
  return x;
}

inline Eigen::MatrixXd pairwise(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (x.row(i) - x.row(j)).norm();
  }
  return d;
}

inline simspace::DissimilarityMatrix dissimilarity_of(const Eigen::MatrixXd& x) {
  return simspace::DissimilarityMatrix(ids(static_cast<int>(x.rows())), pairwise(x));
}

}  // namespace testing
