#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace simspace {

/// Raised for every invalid input, malformed file and failed invariant.
/// The message names the violated condition (e.g. "nonzero diagonal").
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StimulusId = std::string;
using TargetMap = std::map<StimulusId, Eigen::VectorXd>;

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// Symmetric, nonnegative, zero-diagonal pairwise dissimilarities over n >= 3
/// named stimuli.
class DissimilarityMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-9;

  DissimilarityMatrix(std::vector<StimulusId> ids, Eigen::MatrixXd values);

  const std::vector<StimulusId>& ids() const { return ids_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  std::vector<StimulusId> ids_;
  Eigen::MatrixXd values_;
};

/// Pairwise similarities (higher = more alike). Only squareness and symmetry
/// are enforced.
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::vector<StimulusId> ids, Eigen::MatrixXd values);

  const std::vector<StimulusId>& ids() const { return ids_; }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index size() const { return values_.rows(); }

 private:
  std::vector<StimulusId> ids_;
  Eigen::MatrixXd values_;
};

enum class ConversionMode { max_minus, one_minus };

ConversionMode parse_conversion_mode(const std::string& name);

DissimilarityMatrix similarity_to_dissimilarity(const SimilarityMatrix& s, ConversionMode mode);

/// n stimuli placed in a d-dimensional space, with the stress-1 of the fit
/// that produced them (0 when not produced by MDS).
class Embedding {
 public:
  Embedding(std::vector<StimulusId> ids, Eigen::MatrixXd coords, double stress1 = 0.0);

  const std::vector<StimulusId>& ids() const { return ids_; }
  const Eigen::MatrixXd& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.rows(); }
  int dims() const { return static_cast<int>(coords_.cols()); }
  double stress1() const { return stress1_; }

  /// Row of `id`; throws when the id is absent.
  Eigen::Index index_of(const StimulusId& id) const;
  Eigen::VectorXd point(const StimulusId& id) const { return coords_.row(index_of(id)).transpose(); }

 private:
  std::vector<StimulusId> ids_;
  Eigen::MatrixXd coords_;
  double stress1_;
  std::map<StimulusId, Eigen::Index> index_;
};

/// Per-item feature vectors of a fixed width, each item tagged with the
/// stimulus (original image) it derives from.
class FeatureTable {
 public:
  FeatureTable(std::vector<std::string> item_ids, std::vector<StimulusId> group_ids,
               Eigen::MatrixXd features);

  const std::vector<std::string>& item_ids() const { return item_ids_; }
  const std::vector<StimulusId>& group_ids() const { return group_ids_; }
  const Eigen::MatrixXd& features() const { return features_; }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index width() const { return features_.cols(); }

  /// Distinct group ids in order of first appearance.
  std::vector<StimulusId> groups() const;

 private:
  std::vector<std::string> item_ids_;
  std::vector<StimulusId> group_ids_;
  Eigen::MatrixXd features_;
};

/// Features joined with one target point per group.
class LabeledDataset {
 public:
  LabeledDataset(FeatureTable features, TargetMap targets);

  const FeatureTable& features() const { return features_; }
  const TargetMap& targets() const { return targets_; }
  int dims() const { return dims_; }

  /// One target row per item, in feature-table order.
  Eigen::MatrixXd target_matrix() const;

 private:
  FeatureTable features_;
  TargetMap targets_;
  int dims_ = 0;
};

/// Joins a feature table with the points of an embedding by group id.
LabeledDataset label_features(FeatureTable features, const Embedding& embedding);

}  // namespace simspace
