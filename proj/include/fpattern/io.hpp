#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "fpattern/fields.hpp"

namespace fpattern {

/// Shortest text that reads back to v with 17 significant digits.
std::string format_double(double v);

using NamedScalar = std::pair<std::string, const ScalarField2D*>;
using NamedVector = std::pair<std::string, const VectorField2D*>;

/// Header "x,y,<names...>", one row per node, x fastest. Vector fields
/// contribute two columns, <name>_x and <name>_y.
std::string fields_csv(const std::vector<NamedScalar>& scalars,
                       const std::vector<NamedVector>& vectors = {});

/// Legacy ASCII STRUCTURED_POINTS with one SCALARS or VECTORS block per field.
std::string fields_vtk(const std::vector<NamedScalar>& scalars,
                       const std::vector<NamedVector>& vectors = {},
                       const std::string& title = "fpattern");

/// Row table with a header; every value is written through format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  /// Mixed rows: text cells are written verbatim.
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

struct HeatmapOptions {
  /// Arrows drawn every `arrow_stride` nodes; 0 disables them.
  int arrow_stride = 0;
  const VectorField2D* arrows = nullptr;
  /// Minimum image side in pixels; nodes are upscaled to reach it.
  int min_side = 512;
  /// Segments (x0, y0, x1, y1) in grid coordinates drawn as overlays.
  std::vector<std::pair<Vec2, Vec2>> lines;
};

bool png_supported();

/// Diverging colour map over [min, max] with optional arrows. Rows are
/// flipped so +y points up. Throws IoError when built without libpng.
void write_heatmap_png(const std::filesystem::path& path, const ScalarField2D& f,
                       const HeatmapOptions& options = {});

/// Writes files into a directory and records one manifest line per file:
/// "<command> <name> <bytes> fnv1a64=<config hash> <UTC timestamp>". Data files carry
/// no timestamps; only manifest.txt does.
class OutputSink {
 public:
  OutputSink(std::filesystem::path directory, std::uint64_t config_hash, std::string command);

  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  void write_text(const std::string& name, const std::string& content);
  /// Records a file written by another writer (e.g. PNG).
  void record(const std::string& name);
  /// Appends the manifest lines of this run to manifest.txt.
  void finish();

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::uint64_t hash_;
  std::string command_;
  std::vector<std::string> files_;
  std::vector<std::string> lines_;
};

std::string hex64(std::uint64_t v);

}  // namespace fpattern
