#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simspace/core.hpp"

namespace simspace {

namespace csv {

/// Parsed CSV: comment lines (leading '#', without the '#') and data rows.
/// Blank lines are skipped. Fields are split on ',' and trimmed; quoting is
/// not supported.
struct Document {
  std::vector<std::string> comments;
  std::vector<std::vector<std::string>> rows;
};

Document read(const std::filesystem::path& path);
Document parse(std::string_view text);

double parse_double(std::string_view field, std::string_view context);

/// Shortest text that round-trips, capped at 17 significant digits.
std::string format_double(double value);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace csv

/// Asymmetry above this fails the load; anything below is averaged away.
inline constexpr double kLoadAsymmetryTolerance = 1e-6;

/// `id,<id1>,...,<idn>` header then `<idi>,v1,...,vn` rows.
DissimilarityMatrix load_dissimilarity_matrix(const std::filesystem::path& path);
SimilarityMatrix load_similarity_matrix(const std::filesystem::path& path);
void write_dissimilarity_matrix(const DissimilarityMatrix& m, const std::filesystem::path& path);

/// `id,dim_0,...,dim_{d-1}`.
Embedding load_embedding(const std::filesystem::path& path);
void write_embedding(const Embedding& e, const std::filesystem::path& path);
std::string embedding_csv(const Embedding& e);

/// `item_id,group_id,f_0,...,f_{k-1}`.
FeatureTable load_feature_table(const std::filesystem::path& path);
void write_feature_table(const FeatureTable& t, const std::filesystem::path& path);

/// One row of an augmented-dataset manifest: `item_id,group_id,file_path`.
struct ManifestEntry {
  std::string item_id;
  StimulusId group_id;
  std::string file_path;
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

}  // namespace simspace
