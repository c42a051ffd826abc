#pragma once

#include <filesystem>
#include <map>

#include "simspace/augment.hpp"

namespace simspace::augment {

/// 8-bit RGB PNG. Other PNG colour types are converted on read.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const RasterImage& img, const std::filesystem::path& path);

/// Every `*.png` in `dir`, keyed by file stem.
std::map<StimulusId, RasterImage> load_image_directory(const std::filesystem::path& dir);

}  // namespace simspace::augment
