#include "simspace/eval.hpp"

#include <cmath>

#include "simspace/parallel.hpp"
#include "simspace/rng.hpp"

namespace simspace::eval {
namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Eigen::MatrixXd item_targets(const FeatureTable& features, const TargetMap& targets) {
  if (targets.empty()) throw Error("run_loocv: empty target set");
  const auto d = targets.begin()->second.size();
  Eigen::MatrixXd y(features.size(), d);
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    auto it = targets.find(features.group_ids()[i]);
    if (it == targets.end()) throw Error("unknown group_id '" + features.group_ids()[i] + "'");
    if (it->second.size() != d) throw Error("run_loocv: targets of differing dimension");
    y.row(i) = it->second.transpose();
  }
  return y;
}

LoocvResult summarize(std::vector<FoldScore> folds) {
  LoocvResult r;
  for (const auto& f : folds) {
    r.mean_train_rmse += f.train_rmse;
    r.mean_test_rmse += f.test_rmse;
  }
  r.mean_train_rmse /= static_cast<double>(folds.size());
  r.mean_test_rmse /= static_cast<double>(folds.size());
  r.folds = std::move(folds);
  return r;
}

mapping::BaselineKind baseline_of(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::zero: return mapping::BaselineKind::zero;
    case PredictorKind::mean: return mapping::BaselineKind::mean;
    case PredictorKind::distribution: return mapping::BaselineKind::distribution;
    case PredictorKind::random_draw: return mapping::BaselineKind::random_draw;
    case PredictorKind::regression: break;
  }
  throw Error("baseline_of: regression is not a baseline");
}

}  // namespace

double rmse(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, const RmseOptions& options) {
  if (predictions.rows() == 0 || targets.rows() == 0) throw Error("rmse: empty input");
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw Error("rmse: predictions and targets differ in shape");
  }
  double denom = static_cast<double>(targets.rows());
  if (options.per_coordinate) denom *= static_cast<double>(targets.cols());
  return std::sqrt((predictions - targets).squaredNorm() / denom);
}

FoldPlan make_folds(const FeatureTable& features) {
  const auto groups = features.groups();
  if (groups.size() < 2) throw Error("make_folds: need at least 2 groups");
  FoldPlan plan;
  plan.reserve(groups.size());
  for (const auto& g : groups) {
    Fold fold{g, {}, {}};
    for (Eigen::Index i = 0; i < features.size(); ++i) {
      (features.group_ids()[i] == g ? fold.test : fold.train).push_back(i);
    }
    plan.push_back(std::move(fold));
  }
  return plan;
}

FoldPlan make_folds(const LabeledDataset& dataset) { return make_folds(dataset.features()); }

LabeledDataset shuffle_targets(const LabeledDataset& dataset, Seed seed) {
  std::vector<StimulusId> groups;
  std::vector<Eigen::VectorXd> points;
  for (const auto& [g, p] : dataset.targets()) {
    groups.push_back(g);
    points.push_back(p);
  }
  Rng rng(seed);
  for (std::size_t i = points.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(points[i - 1], points[j]);
  }
  TargetMap shuffled;
  for (std::size_t i = 0; i < groups.size(); ++i) shuffled.emplace(groups[i], std::move(points[i]));
  return LabeledDataset(dataset.features(), std::move(shuffled));
}

std::string to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::zero: return "zero";
    case PredictorKind::mean: return "mean";
    case PredictorKind::distribution: return "distribution";
    case PredictorKind::random_draw: return "random-draw";
    case PredictorKind::regression: return "regression";
  }
  return "regression";
}

bool is_stochastic(PredictorKind kind) {
  return kind == PredictorKind::distribution || kind == PredictorKind::random_draw;
}

LoocvResult run_loocv(const LabeledDataset& dataset, const PredictorSpec& predictor, Seed seed,
                      const EvalOptions& options) {
  if (predictor.kind == PredictorKind::regression) {
    return run_loocv_regression(dataset.features(), {dataset.targets()}, predictor.fit, options).front();
  }
  const auto plan = make_folds(dataset);
  const Eigen::MatrixXd y = dataset.target_matrix();
  const auto kind = baseline_of(predictor.kind);
  std::vector<FoldScore> scores(plan.size());
  parallel_for(plan.size(), options.jobs, [&](std::size_t f) {
    const Fold& fold = plan[f];
    const Eigen::MatrixXd train_y = take_rows(y, fold.train);
    const Eigen::MatrixXd test_y = take_rows(y, fold.test);
    const auto model = mapping::fit_baseline(kind, train_y);
    Rng rng(derive_seed(seed, "fold/" + fold.test_group));
    Eigen::MatrixXd train_pred(train_y.rows(), train_y.cols());
    Eigen::MatrixXd test_pred(test_y.rows(), test_y.cols());
    for (Eigen::Index i = 0; i < train_pred.rows(); ++i) train_pred.row(i) = mapping::baseline_predict(model, rng);
    for (Eigen::Index i = 0; i < test_pred.rows(); ++i) test_pred.row(i) = mapping::baseline_predict(model, rng);
    scores[f] = FoldScore{fold.test_group, rmse(train_pred, train_y, options.rmse), rmse(test_pred, test_y, options.rmse)};
  });
  return summarize(std::move(scores));
}

std::vector<LoocvResult> run_loocv_regression(const FeatureTable& features, const std::vector<TargetMap>& target_sets,
                                              const mapping::FitOptions& fit, const EvalOptions& options) {
  if (target_sets.empty()) return {};
  const auto plan = make_folds(features);

  std::vector<Eigen::Index> offsets;
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::Index total = 0;
  for (const auto& targets : target_sets) {
    blocks.push_back(item_targets(features, targets));
    offsets.push_back(total);
    total += blocks.back().cols();
  }
  Eigen::MatrixXd y(features.size(), total);
  for (std::size_t s = 0; s < blocks.size(); ++s) y.middleCols(offsets[s], blocks[s].cols()) = blocks[s];
  blocks.clear();

  // scores[fold][set]
  std::vector<std::vector<FoldScore>> scores(plan.size());
  parallel_for(plan.size(), options.jobs, [&](std::size_t f) {
    const Fold& fold = plan[f];
    const Eigen::MatrixXd train_x = take_rows(features.features(), fold.train);
    const Eigen::MatrixXd test_x = take_rows(features.features(), fold.test);
    const Eigen::MatrixXd train_y = take_rows(y, fold.train);
    const Eigen::MatrixXd test_y = take_rows(y, fold.test);
    const auto map = mapping::LeastSquaresSolver(train_x, fit).solve(train_y);
    const Eigen::MatrixXd train_pred = mapping::predict_rows(map, train_x);
    const Eigen::MatrixXd test_pred = mapping::predict_rows(map, test_x);
    auto& row = scores[f];
    for (std::size_t s = 0; s < target_sets.size(); ++s) {
      const Eigen::Index o = offsets[s];
      const Eigen::Index d = (s + 1 < offsets.size() ? offsets[s + 1] : total) - o;
      row.push_back(FoldScore{fold.test_group,
                              rmse(train_pred.middleCols(o, d), train_y.middleCols(o, d), options.rmse),
                              rmse(test_pred.middleCols(o, d), test_y.middleCols(o, d), options.rmse)});
    }
  });

  std::vector<LoocvResult> out;
  for (std::size_t s = 0; s < target_sets.size(); ++s) {
    std::vector<FoldScore> per_fold;
    for (const auto& row : scores) per_fold.push_back(row[s]);
    out.push_back(summarize(std::move(per_fold)));
  }
  return out;
}

}  // namespace simspace::eval
