#include "simspace/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "simspace/eval.hpp"
#include "simspace/image_io.hpp"
#include "simspace/io.hpp"
#include "simspace/mapping.hpp"
#include "simspace/parallel.hpp"
#include "simspace/svg.hpp"

namespace simspace::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

augment::Range range_from_json(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) throw Error(std::string("config: '") + key + "' must be [lo, hi]");
  return augment::Range{j[0].get<double>(), j[1].get<double>()};
}

augment::AugmentSpec augment_spec_from_json(const json& j, augment::AugmentSpec spec) {
  static const std::set<std::string> known{
      "flip_prob", "affine_prob", "max_rotation_deg", "max_shear_deg", "max_translate", "scale",
      "crop_prob", "crop_fraction", "blur_prob", "blur_sigma", "color_prob", "contrast", "brightness",
      "noise_prob", "gauss_noise_sigma", "salt_pepper_prob", "salt_pepper_fraction"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error("config: unknown augment key '" + key + "'");
  }
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  auto rng = [&](const char* key, augment::Range& field) {
    if (j.contains(key)) field = range_from_json(j.at(key), key);
  };
  num("flip_prob", spec.flip_prob);
  num("affine_prob", spec.affine_prob);
  num("max_rotation_deg", spec.max_rotation_deg);
  num("max_shear_deg", spec.max_shear_deg);
  num("max_translate", spec.max_translate);
  rng("scale", spec.scale);
  num("crop_prob", spec.crop_prob);
  rng("crop_fraction", spec.crop_fraction);
  num("blur_prob", spec.blur_prob);
  rng("blur_sigma", spec.blur_sigma);
  num("color_prob", spec.color_prob);
  rng("contrast", spec.contrast);
  rng("brightness", spec.brightness);
  num("noise_prob", spec.noise_prob);
  num("gauss_noise_sigma", spec.gauss_noise_sigma);
  num("salt_pepper_prob", spec.salt_pepper_prob);
  num("salt_pepper_fraction", spec.salt_pepper_fraction);
  spec.validate();
  return spec;
}

int resolve_jobs(const CLI::Option* flag, int flag_value, const StudyConfig& config) {
  if (flag->count() > 0) return std::max(1, flag_value);
  if (std::getenv("SIMSPACE_JOBS") != nullptr) return jobs_from_env();
  return config.jobs.value_or(1);
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(std::string(what) + ": expected comma-separated integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw Error(std::string(what) + ": empty list");
  return out;
}

DissimilarityMatrix load_delta(const StudyConfig& c) {
  if (!c.dissimilarity.empty()) return load_dissimilarity_matrix(c.dissimilarity);
  if (!c.similarity.empty()) {
    return similarity_to_dissimilarity(load_similarity_matrix(c.similarity), parse_conversion_mode(c.conversion));
  }
  throw Error("missing input: dissimilarity matrix (--dissim) or similarity matrix (--similarity)");
}

fs::path embedding_path(const fs::path& dir, int dims) { return dir / ("embedding_" + std::to_string(dims) + "d.csv"); }

// Options shared by the commands that run SMACOF.
struct SmacofFlags {
  CLI::Option* dims = nullptr;
  CLI::Option* restarts = nullptr;
  CLI::Option* max_iter = nullptr;
  CLI::Option* rel_tol = nullptr;
  CLI::Option* init = nullptr;
  std::string dims_value;
  int restarts_value = 0;
  int max_iter_value = 0;
  double rel_tol_value = 0.0;
  std::string init_value;

  void add(CLI::App* app) {
    dims = app->add_option("--dims", dims_value, "Comma-separated dimensionalities, e.g. 2,4,8");
    restarts = app->add_option("--restarts", restarts_value, "SMACOF restarts per dimensionality");
    max_iter = app->add_option("--max-iter", max_iter_value, "Guttman iterations per restart");
    rel_tol = app->add_option("--rel-tol", rel_tol_value, "Relative stress decrease that stops a restart");
    init = app->add_option("--init", init_value, "random | classical | both");
  }

  void apply(StudyConfig& c) const {
    if (dims->count()) c.dims = parse_int_list(dims_value, "--dims");
    if (restarts->count()) c.restarts = restarts_value;
    if (max_iter->count()) c.max_iter = max_iter_value;
    if (rel_tol->count()) c.rel_tol = rel_tol_value;
    if (init->count()) c.init = init_value;
  }
};

struct CommonFlags {
  CLI::Option* config = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* jobs = nullptr;
  std::string config_value;
  std::uint64_t seed_value = 0;
  int jobs_value = 1;

  void add(CLI::App* app) {
    config = app->add_option("--config", config_value, "JSON study configuration (flags override it)");
    seed = app->add_option("--seed", seed_value, "Master seed for every stochastic step");
    jobs = app->add_option("--jobs", jobs_value, "Worker threads (also SIMSPACE_JOBS); output does not depend on it");
  }

  StudyConfig base() const {
    StudyConfig c = config->count() ? load_study_config(config_value) : StudyConfig{};
    if (seed->count()) c.seed = seed_value;
    c.jobs = resolve_jobs(jobs, jobs_value, c);
    return c;
  }
};

void print_curve(const mds::StressCurve& curve, std::ostream& out) {
  out << mds::stress_curve_csv(curve);
  for (const auto& p : curve) {
    if (p.overparameterized) {
      std::cerr << "warning: dims " << p.dims << " >= n-1; the fit is exact by construction\n";
    }
  }
}

std::vector<Embedding> scan_and_write(const StudyConfig& c, const fs::path& out_dir) {
  const auto delta = load_delta(c);
  auto base = c.smacof(c.dims.front());
  auto scan = mds::dimension_scan(delta, c.dims, base);
  for (const auto& e : scan.embeddings) write_embedding(e, embedding_path(out_dir, e.dims()));
  csv::write_file(out_dir / "stress_curve.csv", mds::stress_curve_csv(scan.curve));
  print_curve(scan.curve, std::cout);
  return std::move(scan.embeddings);
}

std::string manifest_file_name(const std::string& item_id) {
  std::string name = item_id;
  for (auto& ch : name) {
    if (ch == '#' || ch == '/' || ch == '\\') ch = '_';
  }
  return name + ".png";
}

}  // namespace

mds::SmacofConfig StudyConfig::smacof(int dims_value) const {
  mds::SmacofConfig c;
  c.dims = dims_value;
  c.restarts = restarts;
  c.max_iter = max_iter;
  c.rel_tol = rel_tol;
  c.init = mds::parse_init_mode(init);
  c.seed = Seed{seed};
  c.jobs = jobs.value_or(1);
  c.validate();
  return c;
}

StudyConfig parse_study_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: top level must be an object");
  static const std::set<std::string> known{
      "dissimilarity", "similarity", "conversion", "embeddings", "features", "images", "output", "dims", "smacof",
      "augment", "factor", "ridge_lambda", "standardize", "rmse_per_coordinate", "runs", "seed", "jobs"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error("config: unknown key '" + key + "'");
  }
  StudyConfig c;
  try {
    auto str = [&](const char* key, std::string& field) {
      if (j.contains(key)) field = j.at(key).get<std::string>();
    };
    str("dissimilarity", c.dissimilarity);
    str("similarity", c.similarity);
    str("conversion", c.conversion);
    str("features", c.features);
    str("images", c.images);
    str("output", c.output);
    if (j.contains("embeddings")) c.embeddings = j.at("embeddings").get<std::vector<std::string>>();
    if (j.contains("dims")) c.dims = j.at("dims").get<std::vector<int>>();
    if (j.contains("smacof")) {
      const auto& s = j.at("smacof");
      for (const auto& [key, value] : s.items()) {
        if (key != "restarts" && key != "max_iter" && key != "rel_tol" && key != "init") {
          throw Error("config: unknown smacof key '" + key + "'");
        }
      }
      if (s.contains("restarts")) c.restarts = s.at("restarts").get<int>();
      if (s.contains("max_iter")) c.max_iter = s.at("max_iter").get<int>();
      if (s.contains("rel_tol")) c.rel_tol = s.at("rel_tol").get<double>();
      if (s.contains("init")) c.init = s.at("init").get<std::string>();
    }
    if (j.contains("augment")) c.augment = augment_spec_from_json(j.at("augment"), c.augment);
    if (j.contains("factor")) c.factor = j.at("factor").get<int>();
    if (j.contains("ridge_lambda")) c.ridge_lambda = j.at("ridge_lambda").get<double>();
    if (j.contains("standardize")) c.standardize = j.at("standardize").get<bool>();
    if (j.contains("rmse_per_coordinate")) c.rmse_per_coordinate = j.at("rmse_per_coordinate").get<bool>();
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<int>();
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (c.dims.empty()) throw Error("config: dims list must be non-empty");
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_study_config(buffer.str());
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Similarity spaces from dissimilarity data, and mappings from image features into them"};
  app.require_subcommand(1);

  // mds ----------------------------------------------------------------------
  auto* mds_cmd = app.add_subcommand("mds", "SMACOF embeddings and a stress curve over --dims");
  CommonFlags mds_common;
  SmacofFlags mds_smacof;
  std::string mds_dissim, mds_similarity, mds_conversion, mds_out;
  mds_common.add(mds_cmd);
  mds_smacof.add(mds_cmd);
  auto* mds_dissim_opt = mds_cmd->add_option("--dissim", mds_dissim, "Dissimilarity matrix CSV");
  auto* mds_sim_opt = mds_cmd->add_option("--similarity", mds_similarity, "Similarity matrix CSV");
  auto* mds_conv_opt = mds_cmd->add_option("--conversion", mds_conversion, "one-minus | max-minus");
  auto* mds_out_opt = mds_cmd->add_option("--out", mds_out, "Output directory");

  // augment ------------------------------------------------------------------
  auto* aug_cmd = app.add_subcommand("augment", "Augmented variants of every PNG in a directory, plus a manifest");
  CommonFlags aug_common;
  std::string aug_images, aug_out;
  int aug_factor = 0;
  aug_common.add(aug_cmd);
  auto* aug_images_opt = aug_cmd->add_option("--images", aug_images, "Directory of original PNGs (id = file stem)");
  auto* aug_factor_opt = aug_cmd->add_option("--factor", aug_factor, "Variants per original");
  auto* aug_out_opt = aug_cmd->add_option("--out", aug_out, "Output directory");

  // train --------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Fit a linear map from features to an embedding");
  CommonFlags train_common;
  std::string train_features, train_embedding, train_out;
  double train_lambda = 0.0;
  bool train_standardize = false;
  train_common.add(train_cmd);
  auto* train_features_opt = train_cmd->add_option("--features", train_features, "Feature CSV");
  train_cmd->add_option("--embedding", train_embedding, "Embedding CSV supplying the targets")->required();
  auto* train_lambda_opt = train_cmd->add_option("--lambda", train_lambda, "Ridge penalty (0 = least squares)");
  auto* train_std_opt = train_cmd->add_flag("--standardize", train_standardize, "z-score feature columns");
  train_cmd->add_option("--out", train_out, "Model CSV to write")->required();

  // eval ---------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Grouped leave-one-out study: baselines and regressions per space");
  CommonFlags eval_common;
  SmacofFlags eval_smacof;
  std::string eval_dissim, eval_similarity, eval_features, eval_images, eval_out;
  std::vector<std::string> eval_embeddings;
  int eval_runs = 0;
  double eval_lambda = 0.0;
  bool eval_standardize = false, eval_per_coord = false;
  eval_common.add(eval_cmd);
  eval_smacof.add(eval_cmd);
  auto* eval_dissim_opt = eval_cmd->add_option("--dissim", eval_dissim, "Dissimilarity matrix CSV");
  auto* eval_sim_opt = eval_cmd->add_option("--similarity", eval_similarity, "Similarity matrix CSV");
  auto* eval_emb_opt = eval_cmd->add_option("--embedding", eval_embeddings, "Precomputed embedding CSV (repeatable)");
  auto* eval_features_opt = eval_cmd->add_option("--features", eval_features, "Feature CSV");
  auto* eval_images_opt = eval_cmd->add_option("--images", eval_images, "Image directory (needs extracted features)");
  auto* eval_out_opt = eval_cmd->add_option("--out", eval_out, "Output directory");
  auto* eval_runs_opt = eval_cmd->add_option("--runs", eval_runs, "Independent runs per cell");
  auto* eval_lambda_opt = eval_cmd->add_option("--lambda", eval_lambda, "Ridge penalty");
  auto* eval_std_opt = eval_cmd->add_flag("--standardize", eval_standardize, "z-score feature columns per fold");
  auto* eval_pc_opt = eval_cmd->add_flag("--rmse-per-coordinate", eval_per_coord, "RMSE over N*d instead of N");

  // scatter ------------------------------------------------------------------
  auto* scatter_cmd = app.add_subcommand("scatter", "SVG scatter plot of two embedding dimensions");
  std::string scatter_embedding, scatter_axes = "0,1", scatter_manifest, scatter_out;
  scatter_cmd->add_option("--embedding", scatter_embedding, "Embedding CSV")->required();
  scatter_cmd->add_option("--axes", scatter_axes, "Dimension pair, e.g. 0,3");
  scatter_cmd->add_option("--manifest", scatter_manifest, "Manifest CSV; first image per group becomes a thumbnail");
  scatter_cmd->add_option("--out", scatter_out, "SVG to write")->required();

  // triangulate --------------------------------------------------------------
  auto* tri_cmd = app.add_subcommand("triangulate", "Locate a point from its distances to anchor stimuli");
  std::string tri_anchors, tri_distances, tri_out;
  tri_cmd->add_option("--anchors", tri_anchors, "Embedding CSV holding the anchor points")->required();
  tri_cmd->add_option("--distances", tri_distances, "CSV 'id,distance' for a subset of the anchors")->required();
  tri_cmd->add_option("--out", tri_out, "CSV to write (stdout when omitted)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (mds_cmd->parsed()) {
      StudyConfig c = mds_common.base();
      mds_smacof.apply(c);
      if (mds_dissim_opt->count()) c.dissimilarity = mds_dissim;
      if (mds_sim_opt->count()) c.similarity = mds_similarity;
      if (mds_conv_opt->count()) c.conversion = mds_conversion;
      if (mds_out_opt->count()) c.output = mds_out;
      if (c.output.empty()) throw Error("missing input: output directory (--out)");
      scan_and_write(c, c.output);
    } else if (aug_cmd->parsed()) {
      StudyConfig c = aug_common.base();
      if (aug_images_opt->count()) c.images = aug_images;
      if (aug_factor_opt->count()) c.factor = aug_factor;
      if (aug_out_opt->count()) c.output = aug_out;
      if (c.images.empty()) throw Error("missing input: image directory (--images)");
      if (c.output.empty()) throw Error("missing input: output directory (--out)");
      const auto originals = augment::load_image_directory(c.images);
      const fs::path out_dir = c.output;
      std::vector<ManifestEntry> manifest;
      for (const auto& [id, image] : originals) {
        auto variants = augment::augment_variants(id, image, c.factor, c.augment, Seed{c.seed}, c.jobs.value_or(1));
        for (const auto& v : variants) {
          const fs::path rel = fs::path("images") / manifest_file_name(v.item_id);
          augment::write_png(v.image, out_dir / rel);
          manifest.push_back({v.item_id, v.group_id, rel.generic_string()});
        }
      }
      write_manifest(manifest, out_dir / "manifest.csv");
      std::cout << manifest.size() << " items from " << originals.size() << " originals\n";
    } else if (train_cmd->parsed()) {
      StudyConfig c = train_common.base();
      if (train_features_opt->count()) c.features = train_features;
      if (train_lambda_opt->count()) c.ridge_lambda = train_lambda;
      if (train_std_opt->count()) c.standardize = train_standardize;
      if (c.features.empty()) throw Error("missing input: feature CSV (--features)");
      auto features = load_feature_table(c.features);
      const auto embedding = load_embedding(train_embedding);
      auto labels = augment::propagate_labels(features.item_ids(), features.group_ids(), embedding);
      LabeledDataset data(std::move(features), augment::target_map(labels));
      const auto model = mapping::fit_linear_map(data, mapping::FitOptions{c.ridge_lambda, c.standardize});
      mapping::save_linear_map(model, train_out);
      const Eigen::MatrixXd pred = mapping::predict_rows(model, data.features().features());
      std::cout << "train_rmse," << csv::format_double(eval::rmse(pred, data.target_matrix())) << "\n";
    } else if (eval_cmd->parsed()) {
      StudyConfig c = eval_common.base();
      eval_smacof.apply(c);
      if (eval_dissim_opt->count()) c.dissimilarity = eval_dissim;
      if (eval_sim_opt->count()) c.similarity = eval_similarity;
      if (eval_emb_opt->count()) c.embeddings = eval_embeddings;
      if (eval_features_opt->count()) c.features = eval_features;
      if (eval_images_opt->count()) c.images = eval_images;
      if (eval_out_opt->count()) c.output = eval_out;
      if (eval_runs_opt->count()) c.runs = eval_runs;
      if (eval_lambda_opt->count()) c.ridge_lambda = eval_lambda;
      if (eval_std_opt->count()) c.standardize = eval_standardize;
      if (eval_pc_opt->count()) c.rmse_per_coordinate = eval_per_coord;
      if (c.output.empty()) throw Error("missing input: output directory (--out)");
      if (c.features.empty()) {
        throw Error(c.images.empty() ? "missing input: feature CSV (--features)"
                                     : "missing input: feature CSV (--features); extract features from '" + c.images +
                                           "' first");
      }
      const fs::path out_dir = c.output;
      std::vector<Embedding> spaces;
      if (!c.embeddings.empty()) {
        for (const auto& p : c.embeddings) spaces.push_back(load_embedding(p));
      } else {
        spaces = scan_and_write(c, out_dir);
      }
      const auto features = load_feature_table(c.features);
      eval::StudyOptions options;
      options.runs = c.runs;
      options.seed = Seed{c.seed};
      options.fit = mapping::FitOptions{c.ridge_lambda, c.standardize};
      options.eval = eval::EvalOptions{eval::RmseOptions{c.rmse_per_coordinate}, c.jobs.value_or(1)};
      const auto report = eval::run_study(spaces, features, options);
      csv::write_file(out_dir / "report.csv", eval::report_csv(report));
      for (int d : report.dims()) {
        csv::write_file(out_dir / ("report_" + std::to_string(d) + "d.svg"), eval::report_svg(report, d));
      }
      std::cout << eval::report_table(report);
    } else if (scatter_cmd->parsed()) {
      const auto embedding = load_embedding(scatter_embedding);
      const auto axes = parse_int_list(scatter_axes, "--axes");
      if (axes.size() != 2) throw Error("--axes: expected exactly two dimensions");
      svg::ScatterOptions options;
      options.axis_x = axes[0];
      options.axis_y = axes[1];
      if (!scatter_manifest.empty()) {
        const fs::path manifest_dir = fs::path(scatter_manifest).parent_path();
        const fs::path svg_dir = fs::absolute(fs::path(scatter_out)).parent_path();
        for (const auto& entry : load_manifest(scatter_manifest)) {
          if (options.thumbnails.count(entry.group_id)) continue;
          fs::path image = entry.file_path;
          if (image.is_relative()) image = manifest_dir / image;
          options.thumbnails.emplace(entry.group_id, fs::absolute(image).lexically_relative(svg_dir).generic_string());
        }
      }
      csv::write_file(scatter_out, svg::scatter_plot(embedding, options));
    } else if (tri_cmd->parsed()) {
      const auto anchors = load_embedding(tri_anchors);
      const auto doc = csv::read(tri_distances);
      if (doc.rows.empty() || doc.rows.front() != std::vector<std::string>{"id", "distance"}) {
        throw Error("malformed CSV: distances header must be 'id,distance'");
      }
      Eigen::MatrixXd points(static_cast<Eigen::Index>(doc.rows.size() - 1), anchors.dims());
      Eigen::VectorXd distances(points.rows());
      for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const auto& row = doc.rows[static_cast<std::size_t>(i) + 1];
        if (row.size() != 2) throw Error("malformed CSV: distances rows need 'id,distance'");
        points.row(i) = anchors.point(row[0]).transpose();
        distances(i) = csv::parse_double(row[1], "distance for '" + row[0] + "'");
      }
      const Eigen::VectorXd p = mapping::triangulate(points, distances);
      std::string out;
      for (Eigen::Index j = 0; j < p.size(); ++j) out += (j ? ",dim_" : "dim_") + std::to_string(j);
      out += "\n";
      for (Eigen::Index j = 0; j < p.size(); ++j) out += (j ? "," : "") + csv::format_double(p(j));
      out += "\n";
      if (tri_out.empty()) {
        std::cout << out;
      } else {
        csv::write_file(tri_out, out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace simspace::cli
