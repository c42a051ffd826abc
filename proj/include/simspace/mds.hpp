#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simspace/core.hpp"

namespace simspace::mds {

enum class InitMode {
  random,     ///< every restart starts uniformly in [-1,1]^d (unit-mean scaled units)
  classical,  ///< a single start from classical scaling
  both,       ///< restart 0 from classical scaling, the rest random
};

InitMode parse_init_mode(const std::string& name);
std::string to_string(InitMode mode);

struct SmacofConfig {
  int dims = 2;
  int restarts = 4;
  int max_iter = 300;
  double rel_tol = 1e-9;
  InitMode init = InitMode::both;
  Seed seed{};
  int jobs = 1;

  void validate() const;
};

/// Raw stress after each Guttman step of the winning restart; element 0 is
/// the stress of the starting configuration.
struct IterationTrace {
  std::vector<double> raw_stress;
  int restart = 0;
  bool converged = false;
};

struct SmacofResult {
  Embedding embedding;
  IterationTrace trace;
};

struct StressPoint {
  int dims = 0;
  double stress1 = 0.0;
  double raw_stress = 0.0;
  /// dims >= n - 1: any n points fit exactly, so stress carries no information.
  bool overparameterized = false;
};

using StressCurve = std::vector<StressPoint>;

struct DimensionScan {
  StressCurve curve;
  std::vector<Embedding> embeddings;
};

/// Euclidean distance matrix between the rows of `coords`.
Eigen::MatrixXd distances(const Eigen::MatrixXd& coords);

/// Sum over i<j of (d_ij(X) - delta_ij)^2.
double raw_stress(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta);
double raw_stress(const Eigen::MatrixXd& coords, const DissimilarityMatrix& delta);

/// sqrt(raw_stress / sum_{i<j} delta_ij^2). Throws "degenerate dissimilarities"
/// when every delta is zero.
double stress1(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta);
double stress1(const Eigen::MatrixXd& coords, const DissimilarityMatrix& delta);

/// Torgerson scaling: top-`dims` eigenpairs of -1/2 J delta^2 J, each
/// eigenvector signed so its first nonzero component is positive. Negative
/// eigenvalues and dims beyond n contribute zero columns.
Eigen::MatrixXd classical_init(const Eigen::MatrixXd& delta, int dims);
Eigen::MatrixXd classical_init(const DissimilarityMatrix& delta, int dims);

/// One Guttman transform X+ = B(X) X / n (unit weights). Pairs that coincide
/// contribute b_ij = 0.
Eigen::MatrixXd guttman_step(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta);

/// Metric SMACOF with restarts. The returned embedding is centred and its
/// stress1 is measured against `delta`.
SmacofResult smacof(const DissimilarityMatrix& delta, const SmacofConfig& config);

/// One `smacof` per entry of `dims_list` (strictly increasing).
DimensionScan dimension_scan(const DissimilarityMatrix& delta, const std::vector<int>& dims_list,
                             const SmacofConfig& config);

std::string stress_curve_csv(const StressCurve& curve);

struct ProcrustesOptions {
  bool allow_scale = false;
};

struct ProcrustesFit {
  Eigen::MatrixXd aligned;
  double disparity = 0.0;
  Eigen::MatrixXd rotation;  ///< orthogonal, reflections allowed
  double scale = 1.0;
  Eigen::RowVectorXd translation;
};

/// Aligns row-matched `b` onto `a` with the orthogonal transform, translation
/// and optional uniform scale minimizing sum_i ||a_i - T(b_i)||^2;
/// `disparity` is that minimum. aligned = scale * b * rotation + translation.
ProcrustesFit procrustes_fit(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const ProcrustesOptions& options = {});

struct ProcrustesResult {
  Embedding aligned;
  double disparity = 0.0;
};

/// Embedding form of `procrustes_fit`: rows of `b` are matched to `a` by id and
/// the result is in `a`'s id order.
ProcrustesResult procrustes_align(const Embedding& a, const Embedding& b, const ProcrustesOptions& options = {});

}  // namespace simspace::mds
