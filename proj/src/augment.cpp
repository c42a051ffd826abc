#include "simspace/augment.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>

#include "simspace/parallel.hpp"
#include "simspace/rng.hpp"

namespace simspace::augment {
namespace {

// Working copy in double precision; quantized once at the end of the pipeline.
struct Canvas {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double& at(int x, int y, int c) { return values[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int x, int y, int c) const { return values[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

Canvas to_canvas(const RasterImage& img) {
  Canvas c{img.width(), img.height(), std::vector<double>(img.pixels().begin(), img.pixels().end())};
  return c;
}

RasterImage to_image(const Canvas& c) {
  std::vector<std::uint8_t> px(c.values.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<std::uint8_t>(std::clamp(std::lround(c.values[i]), 0L, 255L));
  }
  return RasterImage(c.width, c.height, std::move(px));
}

// Mirror without repeating the edge sample: ... 2 1 | 0 1 2 ... n-1 | n-2 ...
int reflect(long i, int n) {
  if (n == 1) return 0;
  const long period = 2L * (n - 1);
  long m = i % period;
  if (m < 0) m += period;
  return static_cast<int>(m < n ? m : period - m);
}

// Bilinear sample at continuous pixel-index coordinates (pixel centres on integers).
double sample(const Canvas& src, double fx, double fy, int c) {
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const double wx = fx - x0f;
  const double wy = fy - y0f;
  const long x0 = static_cast<long>(x0f);
  const long y0 = static_cast<long>(y0f);
  const int xa = reflect(x0, src.width), xb = reflect(x0 + 1, src.width);
  const int ya = reflect(y0, src.height), yb = reflect(y0 + 1, src.height);
  const double top = (1.0 - wx) * src.at(xa, ya, c) + wx * src.at(xb, ya, c);
  const double bottom = (1.0 - wx) * src.at(xa, yb, c) + wx * src.at(xb, yb, c);
  return (1.0 - wy) * top + wy * bottom;
}

void flip(Canvas& img) {
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width / 2; ++x) {
      for (int c = 0; c < 3; ++c) std::swap(img.at(x, y, c), img.at(img.width - 1 - x, y, c));
    }
  }
}

void affine(Canvas& img, const AugmentSpec& spec, Rng& rng) {
  const double deg = std::numbers::pi / 180.0;
  const double angle = rng.uniform(-spec.max_rotation_deg, spec.max_rotation_deg) * deg;
  const double shear = rng.uniform(-spec.max_shear_deg, spec.max_shear_deg) * deg;
  const double tx = rng.uniform(-spec.max_translate, spec.max_translate) * img.width;
  const double ty = rng.uniform(-spec.max_translate, spec.max_translate) * img.height;
  const double s = rng.uniform(spec.scale.lo, spec.scale.hi);

  // Forward: rotation * shear_x * scale about the image centre, then translate.
  Eigen::Matrix2d rot;
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Eigen::Matrix2d sh;
  sh << 1.0, std::tan(shear), 0.0, 1.0;
  const Eigen::Matrix2d inverse = (rot * sh * s).inverse();

  const double cx = 0.5 * img.width, cy = 0.5 * img.height;
  Canvas out{img.width, img.height, std::vector<double>(img.values.size())};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Eigen::Vector2d p(x + 0.5 - cx - tx, y + 0.5 - cy - ty);
      const Eigen::Vector2d q = inverse * p;
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = sample(img, q.x() + cx - 0.5, q.y() + cy - 0.5, c);
    }
  }
  img = std::move(out);
}

void crop(Canvas& img, const AugmentSpec& spec, Rng& rng) {
  const double f = rng.uniform(spec.crop_fraction.lo, spec.crop_fraction.hi);
  const int cw = static_cast<int>(std::lround(f * img.width));
  const int ch = static_cast<int>(std::lround(f * img.height));
  if (cw < 1 || ch < 1) throw Error("crop fraction yields zero-size window");
  const int x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.width - cw) + 1));
  const int y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(img.height - ch) + 1));
  const double sx = static_cast<double>(cw) / img.width;
  const double sy = static_cast<double>(ch) / img.height;
  Canvas out{img.width, img.height, std::vector<double>(img.values.size())};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = sample(img, x0 + (x + 0.5) * sx - 0.5, y0 + (y + 0.5) * sy - 0.5, c);
    }
  }
  img = std::move(out);
}

void blur(Canvas& img, double sigma) {
  if (sigma < 1e-3) return;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) total += kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (auto& k : kernel) k /= total;

  Canvas tmp = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * img.at(reflect(x + i, img.width), y, c);
        tmp.at(x, y, c) = acc;
      }
    }
  }
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp.at(x, reflect(y + i, img.height), c);
        img.at(x, y, c) = acc;
      }
    }
  }
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(std::string("augment spec: ") + name + " must be in [0,1]");
}

void check_range(const Range& r, const char* name) {
  if (!(r.lo <= r.hi)) throw Error(std::string("augment spec: ") + name + " range is not ordered");
}

}  // namespace

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ < 1 || height_ < 1) throw Error("image: width and height must be >= 1");
  if (pixels_.size() != 3 * static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw Error("image: pixel buffer length must be 3*width*height");
  }
}

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : RasterImage(width, height,
                  std::vector<std::uint8_t>(3 * static_cast<std::size_t>(std::max(width, 0)) *
                                                static_cast<std::size_t>(std::max(height, 0)),
                                            fill)) {}

AugmentSpec AugmentSpec::identity() {
  AugmentSpec s;
  s.flip_prob = s.affine_prob = s.crop_prob = s.blur_prob = s.color_prob = s.noise_prob = s.salt_pepper_prob = 0.0;
  return s;
}

void AugmentSpec::validate() const {
  check_probability(flip_prob, "flip_prob");
  check_probability(affine_prob, "affine_prob");
  check_probability(crop_prob, "crop_prob");
  check_probability(blur_prob, "blur_prob");
  check_probability(color_prob, "color_prob");
  check_probability(noise_prob, "noise_prob");
  check_probability(salt_pepper_prob, "salt_pepper_prob");
  check_probability(salt_pepper_fraction, "salt_pepper_fraction");
  check_range(scale, "scale");
  check_range(crop_fraction, "crop_fraction");
  check_range(blur_sigma, "blur_sigma");
  check_range(contrast, "contrast");
  check_range(brightness, "brightness");
  if (!(crop_fraction.lo > 0.0 && crop_fraction.hi <= 1.0)) throw Error("augment spec: crop_fraction must lie in (0,1]");
  if (blur_sigma.lo < 0.0) throw Error("augment spec: blur_sigma must be >= 0");
  if (!(scale.lo > 0.0)) throw Error("augment spec: scale must be > 0");
  if (max_rotation_deg < 0.0 || max_shear_deg < 0.0 || max_translate < 0.0) {
    throw Error("augment spec: affine bounds must be >= 0");
  }
  if (max_shear_deg >= 90.0) throw Error("augment spec: max_shear_deg must be < 90");
  if (gauss_noise_sigma < 0.0) throw Error("augment spec: gauss_noise_sigma must be >= 0");
}

RasterImage flip_horizontal(const RasterImage& img) {
  Canvas c = to_canvas(img);
  flip(c);
  return to_image(c);
}

RasterImage augment_image(const RasterImage& img, const AugmentSpec& spec, Seed seed) {
  spec.validate();
  Rng rng(seed);
  Canvas c = to_canvas(img);

  if (rng.bernoulli(spec.flip_prob)) flip(c);
  if (rng.bernoulli(spec.affine_prob)) affine(c, spec, rng);
  if (rng.bernoulli(spec.crop_prob)) crop(c, spec, rng);
  if (rng.bernoulli(spec.blur_prob)) blur(c, rng.uniform(spec.blur_sigma.lo, spec.blur_sigma.hi));
  if (rng.bernoulli(spec.color_prob)) {
    const double contrast = rng.uniform(spec.contrast.lo, spec.contrast.hi);
    const double brightness = rng.uniform(spec.brightness.lo, spec.brightness.hi) * 255.0;
    for (auto& v : c.values) v = (v - 127.5) * contrast + 127.5 + brightness;
  }
  if (rng.bernoulli(spec.noise_prob)) {
    for (auto& v : c.values) v += rng.normal(0.0, spec.gauss_noise_sigma);
  }
  if (rng.bernoulli(spec.salt_pepper_prob)) {
    for (int y = 0; y < c.height; ++y) {
      for (int x = 0; x < c.width; ++x) {
        if (!rng.bernoulli(spec.salt_pepper_fraction)) continue;
        const double value = rng.bernoulli(0.5) ? 255.0 : 0.0;
        for (int ch = 0; ch < 3; ++ch) c.at(x, y, ch) = value;
      }
    }
  }
  return to_image(c);
}

std::string variant_id(const StimulusId& stimulus, int k) { return stimulus + "#" + std::to_string(k); }

std::vector<AugmentedItem> augment_variants(const StimulusId& stimulus, const RasterImage& original, int factor,
                                            const AugmentSpec& spec, Seed seed, int jobs) {
  if (factor < 1) throw Error("augment: factor must be >= 1");
  spec.validate();
  std::vector<AugmentedItem> items(static_cast<std::size_t>(factor), AugmentedItem{{}, {}, original});
  parallel_for(items.size(), jobs, [&](std::size_t k) {
    auto id = variant_id(stimulus, static_cast<int>(k));
    items[k].image = augment_image(original, spec, derive_seed(seed, id));
    items[k].item_id = std::move(id);
    items[k].group_id = stimulus;
  });
  return items;
}

AugmentedDataset augment_dataset(const std::map<StimulusId, RasterImage>& originals, int factor,
                                 const AugmentSpec& spec, Seed seed, int jobs) {
  if (factor < 1) throw Error("augment: factor must be >= 1");
  AugmentedDataset out;
  out.factor = factor;
  out.items.reserve(originals.size() * static_cast<std::size_t>(factor));
  for (const auto& [id, image] : originals) {
    auto variants = augment_variants(id, image, factor, spec, seed, jobs);
    std::move(variants.begin(), variants.end(), std::back_inserter(out.items));
  }
  return out;
}

std::vector<ItemTarget> propagate_labels(const std::vector<std::string>& item_ids,
                                         const std::vector<StimulusId>& group_ids, const Embedding& embedding) {
  if (item_ids.size() != group_ids.size()) throw Error("propagate_labels: item/group count mismatch");
  std::vector<ItemTarget> out;
  out.reserve(item_ids.size());
  for (std::size_t i = 0; i < item_ids.size(); ++i) {
    out.push_back({item_ids[i], group_ids[i], embedding.point(group_ids[i])});
  }
  return out;
}

std::vector<ItemTarget> propagate_labels(const AugmentedDataset& dataset, const Embedding& embedding) {
  std::vector<std::string> items;
  std::vector<StimulusId> groups;
  for (const auto& item : dataset.items) {
    items.push_back(item.item_id);
    groups.push_back(item.group_id);
  }
  return propagate_labels(items, groups, embedding);
}

TargetMap target_map(const std::vector<ItemTarget>& labels) {
  TargetMap out;
  for (const auto& l : labels) {
    auto [it, inserted] = out.emplace(l.group_id, l.point);
    if (!inserted && it->second != l.point) throw Error("target_map: group '" + l.group_id + "' has two targets");
  }
  return out;
}

}  // namespace simspace::augment
