#include "simspace/mds.hpp"

#include <cmath>
#include <string>

#include "simspace/io.hpp"
#include "simspace/parallel.hpp"
#include "simspace/rng.hpp"

namespace simspace::mds {
namespace {

void check_shapes(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta) {
  if (delta.rows() != delta.cols()) throw Error("dimension mismatch: dissimilarity matrix is not square");
  if (coords.rows() != delta.rows()) {
    throw Error("dimension mismatch: " + std::to_string(coords.rows()) + " points vs " +
                std::to_string(delta.rows()) + " stimuli");
  }
}

struct RestartOutcome {
  Eigen::MatrixXd coords;
  std::vector<double> trace;
  bool converged = false;
};

// Iterates Guttman steps from `start` on the (already unit-mean) matrix.
RestartOutcome run_restart(const Eigen::MatrixXd& delta, Eigen::MatrixXd start, const SmacofConfig& config) {
  RestartOutcome out;
  out.coords = std::move(start);
  double previous = raw_stress(out.coords, delta);
  out.trace.push_back(previous);
  // Below this the fit is exact up to round-off (stress1 ~ 1e-14) and further
  // steps only reshuffle rounding noise, which is not monotone.
  const double exact_fit = 1e-28 * 0.5 * delta.squaredNorm();
  for (int it = 0; it < config.max_iter; ++it) {
    if (previous <= exact_fit) {
      out.converged = true;
      break;
    }
    Eigen::MatrixXd next = guttman_step(out.coords, delta);
    const double current = raw_stress(next, delta);
    out.coords = std::move(next);
    out.trace.push_back(current);
    const bool done = (previous - current) / previous < config.rel_tol;
    previous = current;
    if (done) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

InitMode parse_init_mode(const std::string& name) {
  if (name == "random") return InitMode::random;
  if (name == "classical") return InitMode::classical;
  if (name == "both") return InitMode::both;
  throw Error("unknown init mode '" + name + "' (expected random, classical or both)");
}

std::string to_string(InitMode mode) {
  switch (mode) {
    case InitMode::random: return "random";
    case InitMode::classical: return "classical";
    case InitMode::both: return "both";
  }
  return "both";
}

void SmacofConfig::validate() const {
  if (dims < 1) throw Error("smacof: dims must be >= 1");
  if (restarts < 1) throw Error("smacof: restarts must be >= 1");
  if (max_iter < 1) throw Error("smacof: max_iter must be >= 1");
  if (!(rel_tol > 0.0)) throw Error("smacof: rel_tol must be > 0");
}

Eigen::MatrixXd distances(const Eigen::MatrixXd& coords) {
  const Eigen::Index n = coords.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (coords.row(i) - coords.row(j)).norm();
    }
  }
  return d;
}

double raw_stress(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta) {
  check_shapes(coords, delta);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < coords.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < coords.rows(); ++j) {
      const double r = (coords.row(i) - coords.row(j)).norm() - delta(i, j);
      sum += r * r;
    }
  }
  return sum;
}

double raw_stress(const Eigen::MatrixXd& coords, const DissimilarityMatrix& delta) {
  return raw_stress(coords, delta.values());
}

double stress1(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta) {
  check_shapes(coords, delta);
  const double norm = delta.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().squaredNorm();
  if (norm == 0.0) throw Error("degenerate dissimilarities");
  return std::sqrt(raw_stress(coords, delta) / norm);
}

double stress1(const Eigen::MatrixXd& coords, const DissimilarityMatrix& delta) {
  return stress1(coords, delta.values());
}

Eigen::MatrixXd classical_init(const Eigen::MatrixXd& delta, int dims) {
  if (dims < 1) throw Error("classical_init: dims must be >= 1");
  const Eigen::Index n = delta.rows();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd gram = -0.5 * centering * delta.array().square().matrix() * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw Error("classical_init: eigen-solver failure");

  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, dims);
  const double tiny = 1e-12 * std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  // Eigen sorts ascending; walk from the top.
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(dims, n); ++k) {
    const Eigen::Index col = n - 1 - k;
    const double lambda = solver.eigenvalues()(col);
    if (lambda <= tiny) break;
    Eigen::VectorXd v = solver.eigenvectors().col(col);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    coords.col(k) = v * std::sqrt(lambda);
  }
  return coords;
}

Eigen::MatrixXd classical_init(const DissimilarityMatrix& delta, int dims) {
  return classical_init(delta.values(), dims);
}

Eigen::MatrixXd guttman_step(const Eigen::MatrixXd& coords, const Eigen::MatrixXd& delta) {
  check_shapes(coords, delta);
  const Eigen::Index n = coords.rows();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (coords.row(i) - coords.row(j)).norm();
      if (d > 0.0) b(i, j) = b(j, i) = -delta(i, j) / d;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return b * coords / static_cast<double>(n);
}

SmacofResult smacof(const DissimilarityMatrix& delta, const SmacofConfig& config) {
  config.validate();
  const Eigen::Index n = delta.size();
  const double mean = delta.values().sum() / static_cast<double>(n * (n - 1));
  if (mean == 0.0) throw Error("degenerate dissimilarities");
  const Eigen::MatrixXd unit = delta.values() / mean;

  const int starts = config.init == InitMode::classical ? 1 : config.restarts;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(starts));
  parallel_for(outcomes.size(), config.jobs, [&](std::size_t r) {
    Eigen::MatrixXd start;
    if (r == 0 && config.init != InitMode::random) {
      start = classical_init(unit, config.dims);
    } else {
      Rng rng(derive_seed(config.seed, "smacof/" + std::to_string(config.dims) + "/" + std::to_string(r)));
      start.resize(n, config.dims);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0; k < config.dims; ++k) start(i, k) = rng.uniform(-1.0, 1.0);
      }
    }
    outcomes[r] = run_restart(unit, std::move(start), config);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].trace.back() < outcomes[best].trace.back()) best = r;
  }

  Eigen::MatrixXd coords = outcomes[best].coords * mean;
  coords.rowwise() -= coords.colwise().mean();
  IterationTrace trace{std::move(outcomes[best].trace), static_cast<int>(best), outcomes[best].converged};
  for (auto& s : trace.raw_stress) s *= mean * mean;
  const double fit = stress1(coords, delta);
  return SmacofResult{Embedding(delta.ids(), std::move(coords), fit), std::move(trace)};
}

DimensionScan dimension_scan(const DissimilarityMatrix& delta, const std::vector<int>& dims_list,
                             const SmacofConfig& config) {
  if (dims_list.empty()) throw Error("dimension_scan: empty dims list");
  for (std::size_t i = 1; i < dims_list.size(); ++i) {
    if (dims_list[i] <= dims_list[i - 1]) throw Error("dimension_scan: dims list must be strictly increasing");
  }
  DimensionScan scan;
  for (int dims : dims_list) {
    SmacofConfig c = config;
    c.dims = dims;
    auto result = smacof(delta, c);
    scan.curve.push_back(StressPoint{dims, result.embedding.stress1(), raw_stress(result.embedding.coords(), delta),
                                     dims >= delta.size() - 1});
    scan.embeddings.push_back(std::move(result.embedding));
  }
  return scan;
}

std::string stress_curve_csv(const StressCurve& curve) {
  std::string out = "dims,stress1,raw_stress\n";
  for (const auto& p : curve) {
    out += std::to_string(p.dims) + "," + csv::format_double(p.stress1) + "," + csv::format_double(p.raw_stress) + "\n";
  }
  return out;
}

}  // namespace simspace::mds
