#include <doctest.h>

#include <set>

#include "simspace/augment.hpp"
#include "simspace/image_io.hpp"
#include "support.hpp"

using namespace simspace;
using namespace simspace::augment;

namespace {

RasterImage noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(Seed{seed});
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w * h * 3));
  for (auto& p : px) p = static_cast<std::uint8_t>(rng.below(256));
  return RasterImage(w, h, std::move(px));
}

AugmentSpec only(double AugmentSpec::*prob) {
  auto s = AugmentSpec::identity();
  s.*prob = 1.0;
  return s;
}

}  // namespace

TEST_CASE("identity spec leaves pixels untouched") {
  const auto img = noise_image(17, 11, 1);
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(augment_image(img, AugmentSpec::identity(), Seed{s}) == img);
}

TEST_CASE("flip is a horizontal mirror and an involution") {
  const auto img = noise_image(9, 5, 2);
  const auto once = augment_image(img, only(&AugmentSpec::flip_prob), Seed{1});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 9; ++x) {
      for (int c = 0; c < 3; ++c) CHECK(once.at(x, y, c) == img.at(8 - x, y, c));
    }
  }
  CHECK(augment_image(once, only(&AugmentSpec::flip_prob), Seed{2}) == img);
  CHECK(flip_horizontal(flip_horizontal(img)) == img);
}

TEST_CASE("full salt-and-pepper saturates every pixel") {
  auto spec = only(&AugmentSpec::salt_pepper_prob);
  spec.salt_pepper_fraction = 1.0;
  const auto out = augment_image(noise_image(12, 12, 3), spec, Seed{4});
  std::set<std::uint8_t> values(out.pixels().begin(), out.pixels().end());
  CHECK(values == std::set<std::uint8_t>{0, 255});
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 12; ++x) {
      CHECK(out.at(x, y, 0) == out.at(x, y, 1));
      CHECK(out.at(x, y, 1) == out.at(x, y, 2));
    }
  }
}

TEST_CASE("every transform chain preserves size and is deterministic") {
  const auto img = noise_image(23, 14, 5);
  AugmentSpec all;
  all.flip_prob = all.affine_prob = all.crop_prob = all.blur_prob = all.color_prob = all.noise_prob =
      all.salt_pepper_prob = 1.0;
  for (const auto& spec : {AugmentSpec{}, all, only(&AugmentSpec::affine_prob), only(&AugmentSpec::crop_prob),
                           only(&AugmentSpec::blur_prob), only(&AugmentSpec::color_prob)}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto a = augment_image(img, spec, Seed{s});
      CHECK(a.width() == img.width());
      CHECK(a.height() == img.height());
      CHECK(a == augment_image(img, spec, Seed{s}));
    }
  }
  // Each transform actually changes a textured image.
  for (auto prob : {&AugmentSpec::affine_prob, &AugmentSpec::crop_prob, &AugmentSpec::noise_prob}) {
    auto spec = only(prob);
    if (prob == &AugmentSpec::crop_prob) spec.crop_fraction = {0.5, 0.6};
    CHECK_FALSE(augment_image(img, spec, Seed{9}) == img);
  }
}

TEST_CASE("blur with sigma zero and unit contrast are exact identities") {
  const auto img = noise_image(8, 8, 6);
  auto blur = only(&AugmentSpec::blur_prob);
  blur.blur_sigma = {0.0, 0.0};
  CHECK(augment_image(img, blur, Seed{1}) == img);
  auto color = only(&AugmentSpec::color_prob);
  color.contrast = {1.0, 1.0};
  color.brightness = {0.0, 0.0};
  CHECK(augment_image(img, color, Seed{1}) == img);
}

TEST_CASE("crop window of zero size is an error") {
  auto spec = only(&AugmentSpec::crop_prob);
  spec.crop_fraction = {0.01, 0.01};
  CHECK_THROWS_WITH_AS(augment_image(noise_image(10, 10, 7), spec, Seed{1}),
                       doctest::Contains("crop fraction yields zero-size window"), Error);
}

TEST_CASE("spec validation") {
  AugmentSpec s;
  s.flip_prob = 1.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s = AugmentSpec{};
  s.contrast = {1.2, 0.8};
  CHECK_THROWS_AS(s.validate(), Error);
  s = AugmentSpec{};
  s.crop_fraction = {0.0, 1.0};
  CHECK_THROWS_AS(s.validate(), Error);
  CHECK_NOTHROW(AugmentSpec{}.validate());
}

TEST_CASE("augment_dataset counting, ids and determinism") {
  const std::map<StimulusId, RasterImage> originals{{"cat", noise_image(6, 6, 1)}, {"dog", noise_image(6, 6, 2)}};
  const auto ds = augment_dataset(originals, 5, AugmentSpec{}, Seed{3});
  CHECK(ds.items.size() == 10);
  CHECK(ds.factor == 5);
  std::set<std::string> item_ids;
  std::map<std::string, int> per_group;
  for (const auto& item : ds.items) {
    item_ids.insert(item.item_id);
    ++per_group[item.group_id];
    CHECK(item.item_id.rfind(item.group_id + "#", 0) == 0);
  }
  CHECK(item_ids.size() == 10);
  CHECK(item_ids.count("cat#0") == 1);
  CHECK(item_ids.count("dog#4") == 1);
  CHECK(per_group == std::map<std::string, int>{{"cat", 5}, {"dog", 5}});

  const auto again = augment_dataset(originals, 5, AugmentSpec{}, Seed{3}, 4);
  REQUIRE(again.items.size() == ds.items.size());
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    CHECK(again.items[i].item_id == ds.items[i].item_id);
    CHECK(again.items[i].image.pixels() == ds.items[i].image.pixels());
  }
  CHECK_THROWS_AS(augment_dataset(originals, 0, AugmentSpec{}, Seed{3}), Error);
}

TEST_CASE("augment_dataset: factor 1 with identity spec equals the originals") {
  const std::map<StimulusId, RasterImage> originals{{"a", noise_image(4, 3, 1)}, {"b", noise_image(5, 2, 2)}};
  const auto ds = augment_dataset(originals, 1, AugmentSpec::identity(), Seed{0});
  REQUIRE(ds.items.size() == 2);
  for (const auto& item : ds.items) CHECK(item.image == originals.at(item.group_id));
}

TEST_CASE("64 originals x 1000 variants gives 64,000 labeled items with 64 distinct targets") {
  std::vector<std::string> items, groups;
  Eigen::MatrixXd coords(64, 2);
  std::vector<std::string> stimuli;
  for (int g = 0; g < 64; ++g) {
    stimuli.push_back("n" + std::to_string(g));
    coords.row(g) << g, -g;
    for (int k = 0; k < 1000; ++k) {
      items.push_back(variant_id(stimuli.back(), k));
      groups.push_back(stimuli.back());
    }
  }
  const Embedding e(stimuli, coords);
  const auto labels = propagate_labels(items, groups, e);
  CHECK(labels.size() == 64000);
  const auto targets = target_map(labels);
  CHECK(targets.size() == 64);
  for (const auto& l : labels) CHECK_UNARY(l.point == e.point(l.group_id));
}

TEST_CASE("propagate_labels copies each original's point to its variants") {
  const std::map<StimulusId, RasterImage> originals{{"p", RasterImage(2, 2, 10)}, {"q", RasterImage(2, 2, 20)}};
  const auto ds = augment_dataset(originals, 3, AugmentSpec::identity(), Seed{1});
  const Embedding e({"p", "q"}, (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished());
  const auto labels = propagate_labels(ds, e);
  REQUIRE(labels.size() == 6);
  for (const auto& l : labels) CHECK(l.point == e.point(l.group_id));

  const Embedding missing({"p", "r"}, Eigen::MatrixXd::Zero(2, 2));
  CHECK_THROWS_WITH_AS(propagate_labels(ds, missing), doctest::Contains("'q'"), Error);
}

TEST_CASE("png round-trip and directory loading") {
  const auto dir = testing::scratch("augment_png");
  const auto img = noise_image(13, 7, 8);
  write_png(img, dir / "alpha.png");
  write_png(flip_horizontal(img), dir / "beta.png");
  CHECK(read_png(dir / "alpha.png") == img);
  const auto all = load_image_directory(dir);
  REQUIRE(all.size() == 2);
  CHECK(all.at("beta") == flip_horizontal(img));
  CHECK_THROWS_AS(read_png(dir / "missing.png"), Error);
}
