#include "simspace/image_io.hpp"

#include <png.h>

#include <cstring>

namespace simspace::augment {

RasterImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error("cannot read PNG '" + path.string() + "': " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error("cannot decode PNG '" + path.string() + "': " + message);
  }
  return RasterImage(static_cast<int>(image.width), static_cast<int>(image.height), std::move(pixels));
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels().data(), 0, nullptr)) {
    throw Error("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

std::map<StimulusId, RasterImage> load_image_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("image directory '" + dir.string() + "' does not exist");
  std::map<StimulusId, RasterImage> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") continue;
    out.emplace(entry.path().stem().string(), read_png(entry.path()));
  }
  if (out.empty()) throw Error("image directory '" + dir.string() + "' contains no .png files");
  return out;
}

}  // namespace simspace::augment
