#include "simspace/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace simspace {
namespace csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Document parse(std::string_view text) {
  Document doc;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      doc.comments.emplace_back(line.substr(1));
      continue;
    }
    std::vector<std::string> row;
    for (;;) {
      const auto comma = line.find(',');
      row.emplace_back(trim(line.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

Document read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

double parse_double(std::string_view field, std::string_view context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error("malformed CSV: " + std::string(context) + ": not a number '" + std::string(field) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  // Shortest round-trip representation (never more than 17 significant digits).
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace csv

namespace {

struct SquareTable {
  std::vector<StimulusId> ids;
  Eigen::MatrixXd values;
};

SquareTable read_square_table(const std::filesystem::path& path) {
  const auto doc = csv::read(path);
  if (doc.rows.empty()) throw Error("malformed CSV: '" + path.string() + "' is empty");
  const auto& header = doc.rows.front();
  if (header.size() < 2 || header.front() != "id") {
    throw Error("malformed CSV: header must be 'id,<id1>,...,<idn>'");
  }
  const std::size_t n = header.size() - 1;
  if (doc.rows.size() - 1 != n) throw Error("malformed CSV: non-square matrix");
  SquareTable t{std::vector<StimulusId>(header.begin() + 1, header.end()), Eigen::MatrixXd(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = doc.rows[i + 1];
    if (row.size() != n + 1) throw Error("malformed CSV: non-square matrix (row " + std::to_string(i + 1) + ")");
    if (row.front() != t.ids[i]) {
      throw Error("malformed CSV: row id '" + row.front() + "' does not match column id '" + t.ids[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          csv::parse_double(row[j + 1], "row '" + row.front() + "'");
    }
  }
  return t;
}

std::string square_table_csv(const std::vector<StimulusId>& ids, const Eigen::MatrixXd& values) {
  std::string out = "id";
  for (const auto& id : ids) out += "," + id;
  out += "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += ids[i];
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += "," + csv::format_double(values(i, j));
    out += "\n";
  }
  return out;
}

void expect_header(const std::vector<std::string>& header, const std::vector<std::string>& fixed,
                   const std::string& prefix, const char* format) {
  bool ok = header.size() > fixed.size();
  for (std::size_t i = 0; ok && i < fixed.size(); ++i) ok = header[i] == fixed[i];
  for (std::size_t i = fixed.size(); ok && i < header.size(); ++i) {
    ok = header[i] == prefix + std::to_string(i - fixed.size());
  }
  if (!ok) throw Error(std::string("malformed CSV: header must be '") + format + "'");
}

}  // namespace

DissimilarityMatrix load_dissimilarity_matrix(const std::filesystem::path& path) {
  auto t = read_square_table(path);
  if (t.values.rows() < 3) throw Error("dissimilarity matrix: need at least 3 stimuli");
  if ((t.values - t.values.transpose()).cwiseAbs().maxCoeff() > kLoadAsymmetryTolerance) {
    throw Error("dissimilarity matrix: asymmetry > 1e-6");
  }
  if (t.values.minCoeff() < 0.0) throw Error("dissimilarity matrix: negative entries");
  if (t.values.diagonal().cwiseAbs().maxCoeff() > DissimilarityMatrix::kSymmetryTolerance) {
    throw Error("dissimilarity matrix: nonzero diagonal");
  }
  Eigen::MatrixXd sym = 0.5 * (t.values + t.values.transpose());
  return DissimilarityMatrix(std::move(t.ids), std::move(sym));
}

SimilarityMatrix load_similarity_matrix(const std::filesystem::path& path) {
  auto t = read_square_table(path);
  if ((t.values - t.values.transpose()).cwiseAbs().maxCoeff() > kLoadAsymmetryTolerance) {
    throw Error("similarity matrix: asymmetry > 1e-6");
  }
  Eigen::MatrixXd sym = 0.5 * (t.values + t.values.transpose());
  return SimilarityMatrix(std::move(t.ids), std::move(sym));
}

void write_dissimilarity_matrix(const DissimilarityMatrix& m, const std::filesystem::path& path) {
  csv::write_file(path, square_table_csv(m.ids(), m.values()));
}

Embedding load_embedding(const std::filesystem::path& path) {
  const auto doc = csv::read(path);
  if (doc.rows.empty()) throw Error("malformed CSV: '" + path.string() + "' is empty");
  expect_header(doc.rows.front(), {"id"}, "dim_", "id,dim_0,...,dim_{d-1}");
  const auto d = static_cast<Eigen::Index>(doc.rows.front().size() - 1);
  const auto n = static_cast<Eigen::Index>(doc.rows.size() - 1);
  if (n == 0) throw Error("embedding: no points");
  std::vector<StimulusId> ids;
  Eigen::MatrixXd coords(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = doc.rows[i + 1];
    if (static_cast<Eigen::Index>(row.size()) != d + 1) throw Error("malformed CSV: ragged embedding row");
    ids.push_back(row.front());
    for (Eigen::Index j = 0; j < d; ++j) coords(i, j) = csv::parse_double(row[j + 1], "point '" + row.front() + "'");
  }
  return Embedding(std::move(ids), std::move(coords));
}

std::string embedding_csv(const Embedding& e) {
  std::string out = "id";
  for (int j = 0; j < e.dims(); ++j) out += ",dim_" + std::to_string(j);
  out += "\n";
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    out += e.ids()[i];
    for (int j = 0; j < e.dims(); ++j) out += "," + csv::format_double(e.coords()(i, j));
    out += "\n";
  }
  return out;
}

void write_embedding(const Embedding& e, const std::filesystem::path& path) {
  csv::write_file(path, embedding_csv(e));
}

FeatureTable load_feature_table(const std::filesystem::path& path) {
  const auto doc = csv::read(path);
  if (doc.rows.size() < 2) throw Error("feature table: no items");
  const auto& header = doc.rows.front();
  const auto k = static_cast<Eigen::Index>(header.size()) - 2;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    if (static_cast<Eigen::Index>(doc.rows[r].size()) != k + 2) {
      throw Error("feature table: ragged feature width (row " + std::to_string(r) + ")");
    }
  }
  expect_header(header, {"item_id", "group_id"}, "f_", "item_id,group_id,f_0,...,f_{k-1}");
  const auto n = static_cast<Eigen::Index>(doc.rows.size() - 1);
  std::vector<std::string> items;
  std::vector<StimulusId> groups;
  items.reserve(n);
  groups.reserve(n);
  Eigen::MatrixXd features(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = doc.rows[i + 1];
    items.push_back(row[0]);
    groups.push_back(row[1]);
    for (Eigen::Index j = 0; j < k; ++j) features(i, j) = csv::parse_double(row[j + 2], "item '" + row[0] + "'");
  }
  return FeatureTable(std::move(items), std::move(groups), std::move(features));
}

void write_feature_table(const FeatureTable& t, const std::filesystem::path& path) {
  std::string out = "item_id,group_id";
  for (Eigen::Index j = 0; j < t.width(); ++j) out += ",f_" + std::to_string(j);
  out += "\n";
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    out += t.item_ids()[i] + "," + t.group_ids()[i];
    for (Eigen::Index j = 0; j < t.width(); ++j) out += "," + csv::format_double(t.features()(i, j));
    out += "\n";
  }
  csv::write_file(path, out);
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  const auto doc = csv::read(path);
  if (doc.rows.empty() || doc.rows.front() != std::vector<std::string>{"item_id", "group_id", "file_path"}) {
    throw Error("malformed CSV: manifest header must be 'item_id,group_id,file_path'");
  }
  std::vector<ManifestEntry> out;
  for (std::size_t r = 1; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    if (row.size() != 3) throw Error("malformed CSV: manifest row " + std::to_string(r) + " needs 3 fields");
    out.push_back({row[0], row[1], row[2]});
  }
  if (out.empty()) throw Error("manifest: no items");
  return out;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  std::string out = "item_id,group_id,file_path\n";
  for (const auto& e : entries) out += e.item_id + "," + e.group_id + "," + e.file_path + "\n";
  csv::write_file(path, out);
}

}  // namespace simspace
