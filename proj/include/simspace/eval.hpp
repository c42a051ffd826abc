#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simspace/core.hpp"
#include "simspace/mapping.hpp"

namespace simspace::eval {

struct RmseOptions {
  /// Divide by N*d instead of N: the per-coordinate variant.
  bool per_coordinate = false;
};

/// sqrt(1/N sum_i ||pred_i - target_i||^2) over rows.
double rmse(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets, const RmseOptions& options = {});

/// All items of one group held out; everything else trains.
struct Fold {
  StimulusId test_group;
  std::vector<Eigen::Index> train;  ///< row indices into the feature table
  std::vector<Eigen::Index> test;
};

using FoldPlan = std::vector<Fold>;

/// One fold per group, in order of first appearance.
FoldPlan make_folds(const FeatureTable& features);
FoldPlan make_folds(const LabeledDataset& dataset);

/// Uniformly random permutation of the group -> point assignment
/// (Fisher-Yates over groups in id order).
LabeledDataset shuffle_targets(const LabeledDataset& dataset, Seed seed);

enum class PredictorKind { zero, mean, distribution, random_draw, regression };

std::string to_string(PredictorKind kind);
bool is_stochastic(PredictorKind kind);

struct PredictorSpec {
  PredictorKind kind = PredictorKind::regression;
  mapping::FitOptions fit{};
};

struct EvalOptions {
  RmseOptions rmse{};
  int jobs = 1;
};

struct FoldScore {
  StimulusId test_group;
  double train_rmse = 0.0;
  double test_rmse = 0.0;
};

struct LoocvResult {
  double mean_train_rmse = 0.0;
  double mean_test_rmse = 0.0;
  std::vector<FoldScore> folds;
};

/// Group-wise leave-one-out: per fold the predictor is fit on the training
/// items and scored on both splits; means are unweighted across folds.
/// Stochastic baselines draw one prediction per item from a stream derived
/// from `seed` and the fold's group.
LoocvResult run_loocv(const LabeledDataset& dataset, const PredictorSpec& predictor, Seed seed,
                      const EvalOptions& options = {});

/// Regression LOOCV for several target assignments over one feature table.
/// Each fold's training design is factorized once and reused for every
/// target set, which may differ in dimension. Results equal separate
/// `run_loocv` calls.
std::vector<LoocvResult> run_loocv_regression(const FeatureTable& features, const std::vector<TargetMap>& target_sets,
                                              const mapping::FitOptions& fit, const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Study: every predictor on every space, averaged over independent runs.

enum class Split { train, test };
std::string to_string(Split split);

inline const std::vector<std::string>& study_predictors() {
  static const std::vector<std::string> names{"zero",         "mean", "distribution", "random-draw",
                                              "regression-shuffled", "regression-correct"};
  return names;
}

struct ReportCell {
  int dims = 0;
  std::string predictor;
  Split split = Split::test;
  std::vector<double> per_run;
  std::vector<Seed> seeds;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample stddev across runs, 0 for a single run
};

struct StudyReport {
  int runs = 0;
  Seed seed{};
  std::vector<ReportCell> cells;

  const ReportCell& cell(int dims, const std::string& predictor, Split split) const;
  std::vector<int> dims() const;
};

struct StudyOptions {
  int runs = 10;
  Seed seed{};
  mapping::FitOptions fit{};
  EvalOptions eval{};
};

/// `spaces` holds one embedding per dimensionality; every group of
/// `features` must appear in each. Run r of predictor p on space d uses
/// derive_seed(seed, "<d>/<p>/<r>").
StudyReport run_study(const std::vector<Embedding>& spaces, const FeatureTable& features, const StudyOptions& options);

/// `dims,predictor,split,mean_rmse,stddev_rmse,runs`
std::string report_csv(const StudyReport& report);
/// Plain-text grid: predictors down, (dims x split) across.
std::string report_table(const StudyReport& report);
/// Bar chart of mean test RMSE per predictor for one dimensionality.
std::string report_svg(const StudyReport& report, int dims);

}  // namespace simspace::eval
