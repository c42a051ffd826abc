#include "simspace/mapping.hpp"

#include <cmath>

#include "simspace/io.hpp"

namespace simspace::mapping {

struct LeastSquaresSolver::Impl {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> decomposition;
  Eigen::Index rows = 0;
  double lambda = 0.0;
};

LeastSquaresSolver::LeastSquaresSolver(const Eigen::MatrixXd& features, const FitOptions& options)
    : impl_(std::make_unique<Impl>()) {
  if (features.rows() < 1) throw Error("fit_linear_map: need at least one training item");
  if (features.cols() < 1) throw Error("fit_linear_map: zero feature width");
  if (!features.allFinite()) throw Error("fit_linear_map: non-finite features");
  if (!(options.ridge_lambda >= 0.0) || !std::isfinite(options.ridge_lambda)) {
    throw Error("fit_linear_map: ridge_lambda must be finite and >= 0");
  }
  const Eigen::Index n = features.rows();
  const Eigen::Index k = features.cols();
  impl_->rows = n;
  impl_->lambda = options.ridge_lambda;
  impl_->mean = features.colwise().mean();
  impl_->scale = Eigen::RowVectorXd::Ones(k);

  Eigen::MatrixXd centred = features.rowwise() - impl_->mean;
  if (options.standardize && n > 1) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double sd = std::sqrt(centred.col(j).squaredNorm() / static_cast<double>(n - 1));
      if (sd > 0.0) impl_->scale(j) = sd;
    }
    centred.array().rowwise() /= impl_->scale.array();
  }
  if (impl_->lambda > 0.0) {
    Eigen::MatrixXd stacked(n + k, k);
    stacked.topRows(n) = centred;
    stacked.bottomRows(k) = std::sqrt(impl_->lambda) * Eigen::MatrixXd::Identity(k, k);
    impl_->decomposition.compute(stacked);
  } else {
    impl_->decomposition.compute(centred);
  }
}

LeastSquaresSolver::~LeastSquaresSolver() = default;
LeastSquaresSolver::LeastSquaresSolver(LeastSquaresSolver&&) noexcept = default;
LeastSquaresSolver& LeastSquaresSolver::operator=(LeastSquaresSolver&&) noexcept = default;

Eigen::Index LeastSquaresSolver::rank() const { return impl_->decomposition.rank(); }

LinearMap LeastSquaresSolver::solve(const Eigen::MatrixXd& targets) const {
  if (targets.rows() != impl_->rows) throw Error("fit_linear_map: target row count does not match features");
  if (!targets.allFinite()) throw Error("fit_linear_map: non-finite targets");
  const Eigen::Index k = impl_->mean.size();
  const Eigen::RowVectorXd target_mean = targets.colwise().mean();
  Eigen::MatrixXd rhs(impl_->lambda > 0.0 ? impl_->rows + k : impl_->rows, targets.cols());
  rhs.topRows(impl_->rows) = targets.rowwise() - target_mean;
  if (impl_->lambda > 0.0) rhs.bottomRows(k).setZero();

  Eigen::MatrixXd standardized = impl_->decomposition.solve(rhs);
  LinearMap m;
  m.weights = standardized.array().colwise() / impl_->scale.transpose().array();
  m.intercept = (target_mean - impl_->mean * m.weights).transpose();
  m.ridge_lambda = impl_->lambda;
  return m;
}

LinearMap fit_linear_map(const Eigen::MatrixXd& features, const Eigen::MatrixXd& targets, const FitOptions& options) {
  return LeastSquaresSolver(features, options).solve(targets);
}

LinearMap fit_linear_map(const LabeledDataset& data, const FitOptions& options) {
  return fit_linear_map(data.features().features(), data.target_matrix(), options);
}

Eigen::VectorXd predict(const LinearMap& m, const Eigen::VectorXd& x) {
  if (x.size() != m.feature_width()) {
    throw Error("predict: feature width mismatch (" + std::to_string(x.size()) + " vs " +
                std::to_string(m.feature_width()) + ")");
  }
  return m.weights.transpose() * x + m.intercept;
}

Eigen::MatrixXd predict_rows(const LinearMap& m, const Eigen::MatrixXd& features) {
  if (features.cols() != m.feature_width()) throw Error("predict: feature width mismatch");
  return (features * m.weights).rowwise() + m.intercept.transpose();
}

std::string linear_map_csv(const LinearMap& m) {
  std::string out = "#ridge_lambda=" + csv::format_double(m.ridge_lambda) + "\nrow";
  for (Eigen::Index j = 0; j < m.dims(); ++j) out += ",dim_" + std::to_string(j);
  out += "\n";
  auto row = [&](const std::string& name, const auto& values) {
    out += name;
    for (Eigen::Index j = 0; j < values.size(); ++j) out += "," + csv::format_double(values(j));
    out += "\n";
  };
  for (Eigen::Index i = 0; i < m.feature_width(); ++i) row("w_" + std::to_string(i), m.weights.row(i));
  row("intercept", m.intercept);
  return out;
}

void save_linear_map(const LinearMap& m, const std::filesystem::path& path) {
  csv::write_file(path, linear_map_csv(m));
}

LinearMap load_linear_map(const std::filesystem::path& path) {
  const auto doc = csv::read(path);
  LinearMap m;
  bool have_lambda = false;
  for (const auto& c : doc.comments) {
    constexpr std::string_view key = "ridge_lambda=";
    if (c.rfind(key, 0) == 0) {
      m.ridge_lambda = csv::parse_double(std::string_view(c).substr(key.size()), "ridge_lambda");
      have_lambda = true;
    }
  }
  if (!have_lambda) throw Error("malformed model: missing '#ridge_lambda=<v>' line");
  if (doc.rows.size() < 3 || doc.rows.front().empty() || doc.rows.front().front() != "row") {
    throw Error("malformed model: expected header 'row,dim_0,...' followed by weight rows and 'intercept'");
  }
  const auto d = static_cast<Eigen::Index>(doc.rows.front().size() - 1);
  const auto k = static_cast<Eigen::Index>(doc.rows.size() - 2);
  m.weights.resize(k, d);
  m.intercept.resize(d);
  for (Eigen::Index i = 0; i <= k; ++i) {
    const auto& row = doc.rows[i + 1];
    const std::string expected = i < k ? "w_" + std::to_string(i) : "intercept";
    if (row.front() != expected || static_cast<Eigen::Index>(row.size()) != d + 1) {
      throw Error("malformed model: bad row '" + row.front() + "' (expected '" + expected + "')");
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = csv::parse_double(row[j + 1], expected);
      if (i < k) {
        m.weights(i, j) = v;
      } else {
        m.intercept(j) = v;
      }
    }
  }
  return m;
}

BaselineKind parse_baseline_kind(const std::string& name) {
  if (name == "zero") return BaselineKind::zero;
  if (name == "mean") return BaselineKind::mean;
  if (name == "distribution") return BaselineKind::distribution;
  if (name == "random-draw") return BaselineKind::random_draw;
  throw Error("unknown baseline '" + name + "'");
}

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::zero: return "zero";
    case BaselineKind::mean: return "mean";
    case BaselineKind::distribution: return "distribution";
    case BaselineKind::random_draw: return "random-draw";
  }
  return "zero";
}

BaselineModel fit_baseline(BaselineKind kind, const Eigen::MatrixXd& train_targets) {
  const Eigen::Index n = train_targets.rows();
  if (n < 1) throw Error("fit_baseline: need at least one training target");
  if (kind == BaselineKind::distribution && n < 2) {
    throw Error("fit_baseline: distribution baseline needs at least 2 training targets");
  }
  BaselineModel m;
  m.kind = kind;
  m.train_mean = train_targets.colwise().mean().transpose();
  m.train_stddev = Eigen::VectorXd::Zero(train_targets.cols());
  if (n > 1) {
    const Eigen::MatrixXd centred = train_targets.rowwise() - m.train_mean.transpose();
    m.train_stddev = (centred.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt().transpose();
  }
  m.train_points = train_targets;
  return m;
}

Eigen::VectorXd baseline_predict(const BaselineModel& m, Rng& rng) {
  switch (m.kind) {
    case BaselineKind::zero:
      return Eigen::VectorXd::Zero(m.train_mean.size());
    case BaselineKind::mean:
      return m.train_mean;
    case BaselineKind::distribution: {
      Eigen::VectorXd out(m.train_mean.size());
      for (Eigen::Index j = 0; j < out.size(); ++j) out(j) = rng.normal(m.train_mean(j), m.train_stddev(j));
      return out;
    }
    case BaselineKind::random_draw:
      return m.train_points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m.train_points.rows()))))
          .transpose();
  }
  return Eigen::VectorXd::Zero(m.train_mean.size());
}

Eigen::VectorXd baseline_predict(const BaselineModel& m, Seed seed) {
  Rng rng(seed);
  return baseline_predict(m, rng);
}

Eigen::VectorXd triangulate(const Eigen::MatrixXd& anchors, const Eigen::VectorXd& distances) {
  const Eigen::Index m = anchors.rows();
  const Eigen::Index d = anchors.cols();
  if (d < 1) throw Error("triangulate: zero-dimensional anchors");
  if (m < d + 1) throw Error("insufficient anchors: need at least " + std::to_string(d + 1) + ", got " + std::to_string(m));
  if (distances.size() != m) throw Error("triangulate: one distance per anchor required");
  if (!anchors.allFinite() || !distances.allFinite() || distances.minCoeff() < 0.0) {
    throw Error("triangulate: distances must be finite and >= 0");
  }
  // ||x - a_i||^2 - ||x - a_0||^2 = r_i^2 - r_0^2 is linear in x.
  const Eigen::RowVectorXd a0 = anchors.row(0);
  Eigen::MatrixXd lhs(m - 1, d);
  Eigen::VectorXd rhs(m - 1);
  for (Eigen::Index i = 1; i < m; ++i) {
    lhs.row(i - 1) = 2.0 * (anchors.row(i) - a0);
    rhs(i - 1) = anchors.row(i).squaredNorm() - a0.squaredNorm() - distances(i) * distances(i) +
                 distances(0) * distances(0);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
  if (qr.rank() < d) throw Error("rank-deficient anchor set");
  return qr.solve(rhs);
}

DomainPartition::DomainPartition(std::vector<Domain> domains) : domains_(std::move(domains)) {
  if (domains_.empty()) throw Error("domain partition: no domains");
  std::size_t total = 0;
  for (const auto& dom : domains_) {
    if (dom.dims.empty()) throw Error("domain partition: domain '" + dom.name + "' is empty");
    total += dom.dims.size();
  }
  dims_ = static_cast<int>(total);
  std::vector<bool> seen(total, false);
  for (const auto& dom : domains_) {
    for (int i : dom.dims) {
      if (i < 0 || i >= dims_ || seen[static_cast<std::size_t>(i)]) {
        throw Error("domain partition: dimensions must be disjoint and cover 0.." + std::to_string(dims_ - 1));
      }
      seen[static_cast<std::size_t>(i)] = true;
    }
  }
}

DomainPartition DomainPartition::single(int dims) {
  Domain all{"all", {}};
  for (int i = 0; i < dims; ++i) all.dims.push_back(i);
  return DomainPartition({all});
}

DomainPartition DomainPartition::separate(int dims) {
  std::vector<Domain> out;
  for (int i = 0; i < dims; ++i) out.push_back({"dim_" + std::to_string(i), {i}});
  return DomainPartition(std::move(out));
}

double conceptual_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const DomainPartition& partition) {
  if (p.size() != partition.dims() || q.size() != partition.dims()) {
    throw Error("conceptual_distance: partition mismatch");
  }
  double total = 0.0;
  for (const auto& dom : partition.domains()) {
    double sq = 0.0;
    for (int i : dom.dims) sq += (p(i) - q(i)) * (p(i) - q(i));
    total += std::sqrt(sq);
  }
  return total;
}

}  // namespace simspace::mapping
