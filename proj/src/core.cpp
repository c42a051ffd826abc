#include "simspace/core.hpp"

#include <cmath>
#include <set>

namespace simspace {
namespace {

void check_ids(const std::vector<StimulusId>& ids, Eigen::Index n, const char* what) {
  if (static_cast<Eigen::Index>(ids.size()) != n) {
    throw Error(std::string(what) + ": id count does not match row count");
  }
  std::set<StimulusId> seen;
  for (const auto& id : ids) {
    if (id.empty()) throw Error(std::string(what) + ": empty id");
    if (!seen.insert(id).second) throw Error(std::string(what) + ": duplicate id '" + id + "'");
  }
}

double max_asymmetry(const Eigen::MatrixXd& m) { return (m - m.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

DissimilarityMatrix::DissimilarityMatrix(std::vector<StimulusId> ids, Eigen::MatrixXd values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw Error("dissimilarity matrix: non-square");
  if (values_.rows() < 3) throw Error("dissimilarity matrix: need at least 3 stimuli");
  check_ids(ids_, values_.rows(), "dissimilarity matrix");
  if (!values_.allFinite()) throw Error("dissimilarity matrix: non-finite entry");
  if (max_asymmetry(values_) > kSymmetryTolerance) throw Error("dissimilarity matrix: asymmetric");
  if (values_.minCoeff() < 0.0) throw Error("dissimilarity matrix: negative entries");
  if (values_.diagonal().cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw Error("dissimilarity matrix: nonzero diagonal");
  }
  values_.diagonal().setZero();
}

SimilarityMatrix::SimilarityMatrix(std::vector<StimulusId> ids, Eigen::MatrixXd values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw Error("similarity matrix: non-square");
  check_ids(ids_, values_.rows(), "similarity matrix");
  if (!values_.allFinite()) throw Error("similarity matrix: non-finite entry");
  if (values_.size() > 0 && max_asymmetry(values_) > DissimilarityMatrix::kSymmetryTolerance) {
    throw Error("similarity matrix: asymmetric");
  }
}

ConversionMode parse_conversion_mode(const std::string& name) {
  if (name == "max-minus") return ConversionMode::max_minus;
  if (name == "one-minus") return ConversionMode::one_minus;
  throw Error("unknown conversion mode '" + name + "' (expected max-minus or one-minus)");
}

DissimilarityMatrix similarity_to_dissimilarity(const SimilarityMatrix& s, ConversionMode mode) {
  Eigen::MatrixXd delta;
  switch (mode) {
    case ConversionMode::max_minus:
      delta = (s.values().maxCoeff() - s.values().array()).matrix();
      break;
    case ConversionMode::one_minus:
      if (s.values().minCoeff() < 0.0 || s.values().maxCoeff() > 1.0) {
        throw Error("one-minus conversion: similarities outside [0,1]");
      }
      delta = (1.0 - s.values().array()).matrix();
      break;
  }
  delta.diagonal().setZero();
  // Symmetrize exactly; the input is symmetric only within tolerance.
  delta = 0.5 * (delta + delta.transpose()).eval();
  return DissimilarityMatrix(s.ids(), std::move(delta));
}

Embedding::Embedding(std::vector<StimulusId> ids, Eigen::MatrixXd coords, double stress1)
    : ids_(std::move(ids)), coords_(std::move(coords)), stress1_(stress1) {
  if (coords_.cols() < 1) throw Error("embedding: dims must be >= 1");
  check_ids(ids_, coords_.rows(), "embedding");
  if (!std::isfinite(stress1_) || stress1_ < 0.0) throw Error("embedding: stress1 must be finite and >= 0");
  if (!coords_.allFinite()) throw Error("embedding: non-finite coordinate");
  for (Eigen::Index i = 0; i < coords_.rows(); ++i) index_.emplace(ids_[i], i);
}

Eigen::Index Embedding::index_of(const StimulusId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown group_id '" + id + "'");
  return it->second;
}

FeatureTable::FeatureTable(std::vector<std::string> item_ids, std::vector<StimulusId> group_ids,
                           Eigen::MatrixXd features)
    : item_ids_(std::move(item_ids)), group_ids_(std::move(group_ids)), features_(std::move(features)) {
  if (item_ids_.empty()) throw Error("feature table: no items");
  if (features_.cols() < 1) throw Error("feature table: zero feature width");
  if (group_ids_.size() != item_ids_.size()) throw Error("feature table: group id count mismatch");
  check_ids(item_ids_, features_.rows(), "feature table");
  for (const auto& g : group_ids_) {
    if (g.empty()) throw Error("feature table: empty group_id");
  }
  if (!features_.allFinite()) throw Error("feature table: non-finite features");
}

std::vector<StimulusId> FeatureTable::groups() const {
  std::vector<StimulusId> out;
  std::set<StimulusId> seen;
  for (const auto& g : group_ids_) {
    if (seen.insert(g).second) out.push_back(g);
  }
  return out;
}

LabeledDataset::LabeledDataset(FeatureTable features, TargetMap targets)
    : features_(std::move(features)), targets_(std::move(targets)) {
  if (targets_.empty()) throw Error("labeled dataset: no targets");
  dims_ = static_cast<int>(targets_.begin()->second.size());
  if (dims_ < 1) throw Error("labeled dataset: zero-dimensional targets");
  for (const auto& [id, point] : targets_) {
    if (point.size() != dims_) throw Error("labeled dataset: targets of differing dimension");
    if (!point.allFinite()) throw Error("labeled dataset: non-finite target for '" + id + "'");
  }
  for (const auto& g : features_.group_ids()) {
    if (!targets_.count(g)) throw Error("unknown group_id '" + g + "'");
  }
}

Eigen::MatrixXd LabeledDataset::target_matrix() const {
  Eigen::MatrixXd y(features_.size(), dims_);
  for (Eigen::Index i = 0; i < features_.size(); ++i) {
    y.row(i) = targets_.at(features_.group_ids()[i]).transpose();
  }
  return y;
}

LabeledDataset label_features(FeatureTable features, const Embedding& embedding) {
  TargetMap targets;
  for (const auto& g : features.groups()) targets.emplace(g, embedding.point(g));
  return LabeledDataset(std::move(features), std::move(targets));
}

}  // namespace simspace
