#include "fpattern/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fpattern/errors.hpp"

#ifdef FPATTERN_HAVE_PNG
#include <png.h>
#endif

namespace fpattern {

std::string format_double(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
  return buf.data();
}

namespace {

void require_grid(const Grid2D& a, const Grid2D& b, const std::string& name) {
  if (!(a == b)) throw ConfigError("field writer: field '" + name + "' is on a different grid");
}

const Grid2D& common_grid(const std::vector<NamedScalar>& scalars,
                          const std::vector<NamedVector>& vectors) {
  const Grid2D* g = nullptr;
  for (const auto& [name, f] : scalars) {
    if (!g) g = &f->grid();
    require_grid(*g, f->grid(), name);
  }
  for (const auto& [name, v] : vectors) {
    if (!g) g = &v->grid();
    require_grid(*g, v->grid(), name);
  }
  if (!g) throw ConfigError("field writer: no fields given");
  return *g;
}

}  // namespace

std::string fields_csv(const std::vector<NamedScalar>& scalars,
                       const std::vector<NamedVector>& vectors) {
  const Grid2D& g = common_grid(scalars, vectors);
  std::string out = "x,y";
  for (const auto& s : scalars) out += "," + s.first;
  for (const auto& v : vectors) out += "," + v.first + "_x," + v.first + "_y";
  out += '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out += format_double(g.x(i));
      out += ',';
      out += format_double(g.y(j));
      for (const auto& s : scalars) {
        out += ',';
        out += format_double((*s.second)(i, j));
      }
      for (const auto& v : vectors) {
        out += ',';
        out += format_double(v.second->x(i, j));
        out += ',';
        out += format_double(v.second->y(i, j));
      }
      out += '\n';
    }
  }
  return out;
}

std::string fields_vtk(const std::vector<NamedScalar>& scalars,
                       const std::vector<NamedVector>& vectors, const std::string& title) {
  const Grid2D& g = common_grid(scalars, vectors);
  std::string out = "# vtk DataFile Version 3.0\n" + title + "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + " 1\n";
  out += "ORIGIN " + format_double(g.xmin()) + " " + format_double(g.ymin()) + " 0\n";
  out += "SPACING " + format_double(g.hx()) + " " + format_double(g.hy()) + " 1\n";
  out += "POINT_DATA " + std::to_string(g.size()) + "\n";
  for (const auto& [name, f] : scalars) {
    out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
      out += format_double((*f)[k]);
      out += '\n';
    }
  }
  for (const auto& [name, v] : vectors) {
    out += "VECTORS " + name + " double\n";
    for (std::size_t k = 0; k < g.size(); ++k) {
      out += format_double(v->x[k]);
      out += ' ';
      out += format_double(v->y[k]);
      out += " 0\n";
    }
  }
  return out;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(columns.size()) {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) text_ += ',';
    text_ += columns[c];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ConfigError("CsvTable: row width does not match the header");
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c) text_ += ',';
    text_ += cells[c];
  }
  text_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return text_; }

#ifdef FPATTERN_HAVE_PNG

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

// Blue (low) through white to red (high).
Rgb diverging(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto mix = [](double a, double b, double s) {
    return static_cast<std::uint8_t>(std::lround(a + (b - a) * s));
  };
  if (t < 0.5) {
    const double s = t / 0.5;
    return {mix(40, 255, s), mix(70, 255, s), mix(170, 255, s)};
  }
  const double s = (t - 0.5) / 0.5;
  return {mix(255, 180, s), mix(255, 30, s), mix(255, 40, s)};
}

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h * 3, 255) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    const std::size_t k = (static_cast<std::size_t>(y) * w_ + x) * 3;
    px_[k] = c.r;
    px_[k + 1] = c.g;
    px_[k + 2] = c.b;
  }

  void line(double x0, double y0, double x1, double y1, Rgb c) {
    const int n = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
    for (int s = 0; s <= n; ++s) {
      const double t = static_cast<double>(s) / n;
      set(static_cast<int>(std::lround(x0 + t * (x1 - x0))),
          static_cast<int>(std::lround(y0 + t * (y1 - y0))), c);
    }
  }

  int width() const { return w_; }
  int height() const { return h_; }
  const std::uint8_t* row(int y) const { return px_.data() + static_cast<std::size_t>(y) * w_ * 3; }

 private:
  int w_;
  int h_;
  std::vector<std::uint8_t> px_;
};

void save(const std::filesystem::path& path, const Canvas& c) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, c.width(), c.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < c.height(); ++y) png_write_row(png, const_cast<png_bytep>(c.row(y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fclose(fp) != 0) throw IoError("cannot close " + path.string());
}

}  // namespace

bool png_supported() { return true; }

void write_heatmap_png(const std::filesystem::path& path, const ScalarField2D& f,
                       const HeatmapOptions& options) {
  const Grid2D& g = f.grid();
  const int scale = std::max(1, (options.min_side + std::max(g.nx(), g.ny()) - 1) /
                                    std::max(g.nx(), g.ny()));
  Canvas canvas(g.nx() * scale, g.ny() * scale);

  // Symmetric range about zero when the field changes sign.
  double lo = f.min();
  double hi = f.max();
  if (lo < 0.0 && hi > 0.0) hi = std::max(-lo, hi), lo = -hi;
  const double span = hi > lo ? hi - lo : 1.0;

  const int H = canvas.height();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const Rgb c = diverging((f(i, j) - lo) / span);
      for (int dy = 0; dy < scale; ++dy)
        for (int dx = 0; dx < scale; ++dx) canvas.set(i * scale + dx, H - 1 - (j * scale + dy), c);
    }

  // Grid coordinates to pixel centres.
  auto px = [&](Vec2 p) {
    return Vec2{((p.x - g.xmin()) / g.hx() + 0.5) * scale,
                H - 1 - ((p.y - g.ymin()) / g.hy() + 0.5) * scale};
  };
  const Rgb ink{20, 20, 20};
  for (const auto& [a, b] : options.lines) {
    const Vec2 pa = px(a);
    const Vec2 pb = px(b);
    canvas.line(pa.x, pa.y, pb.x, pb.y, Rgb{0, 120, 0});
  }

  if (options.arrows && options.arrow_stride > 0) {
    const VectorField2D& u = *options.arrows;
    double umax = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) umax = std::max(umax, std::hypot(u.x[k], u.y[k]));
    const double cell = options.arrow_stride * scale;
    const int s = options.arrow_stride;
    for (int j = s / 2; j < g.ny(); j += s)
      for (int i = s / 2; i < g.nx(); i += s) {
        const Vec2 v = u.at(i, j);
        const double mag = std::hypot(v.x, v.y);
        if (umax == 0.0 || mag < 1e-3 * umax) continue;
        const double len = 0.9 * cell * mag / umax;
        // Pixel y grows downwards.
        const Vec2 d{v.x / mag, -v.y / mag};
        const Vec2 tail = px(g.node(i, j));
        const Vec2 tip = tail + len * d;
        canvas.line(tail.x, tail.y, tip.x, tip.y, ink);
        const double head = std::max(2.0, 0.35 * len);
        const Vec2 back = -1.0 * d;
        const Vec2 side{-d.y, d.x};
        canvas.line(tip.x, tip.y, tip.x + head * (back.x + 0.5 * side.x),
                    tip.y + head * (back.y + 0.5 * side.y), ink);
        canvas.line(tip.x, tip.y, tip.x + head * (back.x - 0.5 * side.x),
                    tip.y + head * (back.y - 0.5 * side.y), ink);
      }
  }
  save(path, canvas);
}

#else

bool png_supported() { return false; }

void write_heatmap_png(const std::filesystem::path& path, const ScalarField2D&,
                       const HeatmapOptions&) {
  throw IoError("cannot write " + path.string() + ": built without libpng");
}

#endif

OutputSink::OutputSink(std::filesystem::path directory, std::uint64_t config_hash,
                       std::string command)
    : dir_(std::move(directory)), hash_(config_hash), command_(std::move(command)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputSink::write_text(const std::string& name, const std::string& content) {
  const auto p = path(name);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed for " + p.string());
  record(name);
}

void OutputSink::record(const std::string& name) {
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(path(name), ec);
  if (ec) throw IoError("missing output file " + path(name).string());
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> stamp{};
  std::strftime(stamp.data(), stamp.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  std::ostringstream line;
  line << command_ << ' ' << name << ' ' << bytes << " fnv1a64=" << hex64(hash_) << ' '
       << stamp.data();
  files_.push_back(name);
  lines_.push_back(line.str());
}

void OutputSink::finish() {
  const auto p = path("manifest.txt");
  std::ofstream out(p, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  for (const auto& l : lines_) out << l << '\n';
  out.close();
  if (!out) throw IoError("write failed for " + p.string());
  lines_.clear();
}

}  // namespace fpattern
