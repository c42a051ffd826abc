#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simspace/core.hpp"
#include "simspace/rng.hpp"

namespace simspace::mapping {

/// y = weights^T x + intercept, with weights of shape k x d.
struct LinearMap {
  Eigen::MatrixXd weights;
  Eigen::VectorXd intercept;
  double ridge_lambda = 0.0;

  Eigen::Index feature_width() const { return weights.rows(); }
  Eigen::Index dims() const { return weights.cols(); }
};

struct FitOptions {
  double ridge_lambda = 0.0;
  /// z-score feature columns with training statistics before fitting; the
  /// scaling is folded back into the returned weights and intercept.
  bool standardize = false;
};

/// Factorization of one training design matrix, reusable for any number of
/// target matrices over the same rows.
///
/// Minimizes sum_i ||W^T x_i + b - y_i||^2 + lambda ||W||_F^2 with an
/// unpenalized intercept. Features are centred; lambda = 0 is solved by a
/// complete orthogonal decomposition (minimum-norm solution when the centred
/// design is rank deficient), lambda > 0 by the same decomposition of the
/// design stacked on sqrt(lambda) I.
class LeastSquaresSolver {
 public:
  LeastSquaresSolver(const Eigen::MatrixXd& features, const FitOptions& options);
  ~LeastSquaresSolver();
  LeastSquaresSolver(LeastSquaresSolver&&) noexcept;
  LeastSquaresSolver& operator=(LeastSquaresSolver&&) noexcept;

  /// `targets` has one row per training row.
  LinearMap solve(const Eigen::MatrixXd& targets) const;

  Eigen::Index rank() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LinearMap fit_linear_map(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets,
                         const FitOptions& options = {});
LinearMap fit_linear_map(const LabeledDataset& data, const FitOptions& options = {});

Eigen::VectorXd predict(const LinearMap& m, const Eigen::VectorXd& x);
/// Row-wise prediction for a feature matrix.
Eigen::MatrixXd predict_rows(const LinearMap& m, const Eigen::MatrixXd& features);

/// CSV with a `#ridge_lambda=<v>` metadata line, header `row,dim_0,...`, one
/// `w_<i>` row per feature and a final `intercept` row.
std::string linear_map_csv(const LinearMap& m);
void save_linear_map(const LinearMap& m, const std::filesystem::path& path);
LinearMap load_linear_map(const std::filesystem::path& path);

enum class BaselineKind { zero, mean, distribution, random_draw };

BaselineKind parse_baseline_kind(const std::string& name);
std::string to_string(BaselineKind kind);

/// Baseline predictor; statistics come from training targets only.
struct BaselineModel {
  BaselineKind kind = BaselineKind::zero;
  Eigen::VectorXd train_mean;
  Eigen::VectorXd train_stddev;  ///< per dimension, sample (n-1) estimate
  Eigen::MatrixXd train_points;  ///< one row per training target
};

/// `train_targets` has one row per training item. `distribution` needs >= 2.
BaselineModel fit_baseline(BaselineKind kind, const Eigen::MatrixXd& train_targets);

/// zero: origin. mean: training centroid. distribution: independent Gaussian
/// draw per dimension. random_draw: a uniformly chosen training target.
Eigen::VectorXd baseline_predict(const BaselineModel& m, Rng& rng);
Eigen::VectorXd baseline_predict(const BaselineModel& m, Seed seed);

/// Least-squares multilateration. Squared-distance equations are linearized
/// against the first anchor and solved in least squares; anchors are rows.
/// Requires >= d+1 affinely independent anchors.
Eigen::VectorXd triangulate(const Eigen::MatrixXd& anchors, const Eigen::VectorXd& distances);

/// Named groups of dimension indices that partition 0..d-1 exactly.
class DomainPartition {
 public:
  struct Domain {
    std::string name;
    std::vector<int> dims;
  };

  explicit DomainPartition(std::vector<Domain> domains);

  /// One domain holding every dimension.
  static DomainPartition single(int dims);
  /// Every dimension its own domain.
  static DomainPartition separate(int dims);

  const std::vector<Domain>& domains() const { return domains_; }
  int dims() const { return dims_; }

 private:
  std::vector<Domain> domains_;
  int dims_ = 0;
};

/// Euclidean within each domain, summed (Manhattan) across domains.
double conceptual_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const DomainPartition& partition);

}  // namespace simspace::mapping
