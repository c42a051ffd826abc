#include "simspace/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "simspace/io.hpp"
#include "simspace/rng.hpp"
#include "simspace/svg.hpp"

namespace simspace::eval {
namespace {

Seed run_seed(Seed master, int dims, const std::string& predictor, int run) {
  return derive_seed(master, std::to_string(dims) + "/" + predictor + "/" + std::to_string(run));
}

// Shifted by the first run so identical runs give exactly that value and stddev 0.
void finish(ReportCell& cell) {
  const double shift = cell.per_run.front();
  const auto n = static_cast<double>(cell.per_run.size());
  double sum = 0.0, ss = 0.0;
  for (double v : cell.per_run) {
    sum += v - shift;
    ss += (v - shift) * (v - shift);
  }
  cell.mean = shift + sum / n;
  cell.stddev = cell.per_run.size() > 1 ? std::sqrt(std::max(0.0, (ss - sum * sum / n) / (n - 1.0))) : 0.0;
}

const std::map<std::string, std::string>& bar_colours() {
  static const std::map<std::string, std::string> colours{
      {"zero", "#8c8c8c"},         {"mean", "#b0b0b0"},
      {"distribution", "#dd8452"}, {"random-draw", "#e5ae38"},
      {"regression-shuffled", "#8172b3"}, {"regression-correct", "#4c72b0"}};
  return colours;
}

}  // namespace

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

const ReportCell& StudyReport::cell(int dims, const std::string& predictor, Split split) const {
  for (const auto& c : cells) {
    if (c.dims == dims && c.predictor == predictor && c.split == split) return c;
  }
  throw Error("report: no cell for " + std::to_string(dims) + "D " + predictor + " " + to_string(split));
}

std::vector<int> StudyReport::dims() const {
  std::vector<int> out;
  for (const auto& c : cells) {
    if (out.empty() || out.back() != c.dims) out.push_back(c.dims);
  }
  return out;
}

StudyReport run_study(const std::vector<Embedding>& spaces, const FeatureTable& features, const StudyOptions& options) {
  if (spaces.empty()) throw Error("run_study: no embeddings supplied");
  if (options.runs < 1) throw Error("run_study: runs must be >= 1");
  std::set<int> seen_dims;
  for (const auto& s : spaces) {
    if (!seen_dims.insert(s.dims()).second) throw Error("run_study: two embeddings with " + std::to_string(s.dims()) + " dims");
  }

  std::vector<LabeledDataset> datasets;
  for (const auto& s : spaces) datasets.push_back(label_features(features, s));

  // Regression target sets: per space, the correct assignment then one shuffle per run.
  std::vector<TargetMap> target_sets;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    target_sets.push_back(datasets[i].targets());
    for (int r = 0; r < options.runs; ++r) {
      const Seed seed = run_seed(options.seed, spaces[i].dims(), "regression-shuffled", r);
      target_sets.push_back(shuffle_targets(datasets[i], seed).targets());
    }
  }
  const auto regression = run_loocv_regression(features, target_sets, options.fit, options.eval);

  StudyReport report;
  report.runs = options.runs;
  report.seed = options.seed;
  const std::vector<std::pair<std::string, PredictorKind>> baselines{{"zero", PredictorKind::zero},
                                                                     {"mean", PredictorKind::mean},
                                                                     {"distribution", PredictorKind::distribution},
                                                                     {"random-draw", PredictorKind::random_draw}};
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const int dims = spaces[i].dims();
    const std::size_t base = i * (static_cast<std::size_t>(options.runs) + 1);
    for (const auto& name : study_predictors()) {
      ReportCell train{dims, name, Split::train, {}, {}, 0.0, 0.0};
      ReportCell test{dims, name, Split::test, {}, {}, 0.0, 0.0};
      for (int r = 0; r < options.runs; ++r) {
        const Seed seed = run_seed(options.seed, dims, name, r);
        LoocvResult result;
        if (name == "regression-correct") {
          // Deterministic in the data: every run reproduces the same fit.
          result = regression[base];
        } else if (name == "regression-shuffled") {
          result = regression[base + 1 + static_cast<std::size_t>(r)];
        } else {
          PredictorKind kind = PredictorKind::zero;
          for (const auto& [n, k] : baselines) {
            if (n == name) kind = k;
          }
          result = run_loocv(datasets[i], PredictorSpec{kind, options.fit}, seed, options.eval);
        }
        train.per_run.push_back(result.mean_train_rmse);
        test.per_run.push_back(result.mean_test_rmse);
        train.seeds.push_back(seed);
        test.seeds.push_back(seed);
      }
      finish(train);
      finish(test);
      report.cells.push_back(std::move(train));
      report.cells.push_back(std::move(test));
    }
  }
  return report;
}

std::string report_csv(const StudyReport& report) {
  std::string out = "dims,predictor,split,mean_rmse,stddev_rmse,runs\n";
  for (const auto& c : report.cells) {
    out += std::to_string(c.dims) + "," + c.predictor + "," + to_string(c.split) + "," + csv::format_double(c.mean) +
           "," + csv::format_double(c.stddev) + "," + std::to_string(c.per_run.size()) + "\n";
  }
  return out;
}

std::string report_table(const StudyReport& report) {
  const auto dims = report.dims();
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-22s", "predictor");
  out += buf;
  for (int d : dims) {
    std::snprintf(buf, sizeof(buf), " | %2dD train  %2dD test", d, d);
    out += buf;
  }
  out += "\n";
  for (const auto& name : study_predictors()) {
    std::snprintf(buf, sizeof(buf), "%-22s", name.c_str());
    out += buf;
    for (int d : dims) {
      std::snprintf(buf, sizeof(buf), " |  %8.4f  %8.4f", report.cell(d, name, Split::train).mean,
                    report.cell(d, name, Split::test).mean);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string report_svg(const StudyReport& report, int dims) {
  std::vector<svg::Bar> bars;
  for (const auto& name : study_predictors()) {
    const auto& c = report.cell(dims, name, Split::test);
    bars.push_back(svg::Bar{name, c.mean, c.stddev, bar_colours().at(name)});
  }
  return svg::bar_chart("Test RMSE, " + std::to_string(dims) + "D space (" + std::to_string(report.runs) + " runs)",
                        bars, "RMSE");
}

}  // namespace simspace::eval
