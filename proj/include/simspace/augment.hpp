#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "simspace/core.hpp"

namespace simspace::augment {

/// 8-bit RGB, row-major, channels interleaved.
class RasterImage {
 public:
  RasterImage(int width, int height, std::vector<std::uint8_t> pixels);
  RasterImage(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  std::uint8_t& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3 +
           static_cast<std::size_t>(c);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Transform parameters. Each transform fires independently with its
/// probability; parameters are drawn uniformly from their ranges.
struct AugmentSpec {
  double flip_prob = 0.5;

  double affine_prob = 0.5;
  double max_rotation_deg = 15.0;
  double max_shear_deg = 8.0;
  double max_translate = 0.05;  ///< fraction of width / height
  Range scale{0.9, 1.1};

  double crop_prob = 0.5;
  Range crop_fraction{0.85, 1.0};  ///< side length of the window relative to the image

  double blur_prob = 0.5;
  Range blur_sigma{0.0, 1.5};  ///< pixels

  double color_prob = 0.5;
  Range contrast{0.8, 1.2};      ///< multiplicative, around mid-grey
  Range brightness{-0.1, 0.1};   ///< additive, fraction of 255

  double noise_prob = 0.5;
  double gauss_noise_sigma = 0.02 * 255.0;  ///< intensity units

  double salt_pepper_prob = 0.5;
  double salt_pepper_fraction = 0.01;

  /// Every probability zero: the pipeline leaves pixels untouched.
  static AugmentSpec identity();

  void validate() const;
};

/// flip -> affine -> crop -> blur -> contrast/brightness -> Gaussian noise ->
/// salt-and-pepper. The output has the input's size. Deterministic in `seed`.
RasterImage augment_image(const RasterImage& img, const AugmentSpec& spec, Seed seed);

/// Individual transforms, exposed for testing. Borders are reflected and
/// resampling is bilinear.
RasterImage flip_horizontal(const RasterImage& img);

struct AugmentedItem {
  std::string item_id;  ///< "<stimulus>#<k>"
  StimulusId group_id;
  RasterImage image;
};

struct AugmentedDataset {
  std::vector<AugmentedItem> items;
  int factor = 0;
};

std::string variant_id(const StimulusId& stimulus, int k);

/// `factor` variants of one original; variant k is seeded with
/// derive_seed(seed, variant_id(stimulus, k)).
std::vector<AugmentedItem> augment_variants(const StimulusId& stimulus, const RasterImage& original, int factor,
                                            const AugmentSpec& spec, Seed seed, int jobs = 1);

AugmentedDataset augment_dataset(const std::map<StimulusId, RasterImage>& originals, int factor,
                                 const AugmentSpec& spec, Seed seed, int jobs = 1);

struct ItemTarget {
  std::string item_id;
  StimulusId group_id;
  Eigen::VectorXd point;
};

/// Each variant inherits the MDS point of its original.
std::vector<ItemTarget> propagate_labels(const AugmentedDataset& dataset, const Embedding& embedding);

/// Same over bare (item_id, group_id) pairs, e.g. from a manifest or feature table.
std::vector<ItemTarget> propagate_labels(const std::vector<std::string>& item_ids,
                                         const std::vector<StimulusId>& group_ids, const Embedding& embedding);

/// Collapses per-item labels into the group -> point map of a LabeledDataset.
TargetMap target_map(const std::vector<ItemTarget>& labels);

}  // namespace simspace::augment
