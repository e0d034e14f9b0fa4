#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "siegel/classify.hpp"

namespace siegel {

struct PixelIndex {
  int col = 0;
  int row = 0;
  bool operator==(const PixelIndex&) const = default;
};

/// Rectangle of the complex plane sampled at pixel centers.
struct Viewport {
  cplx upper_left;
  cplx lower_right;
  int width_px = 0;
  int height_px = 0;

  /// Throws DomainError if the corners are not ordered or a pixel count is
  /// outside [1, 16384].
  void validate() const;
  cplx pixel_center(int col, int row) const;
  /// Pixel containing z; empty when z is outside the rectangle.
  std::optional<PixelIndex> pixel_of(cplx z) const;
  bool operator==(const Viewport&) const = default;
};

enum class ClassCode : std::uint8_t {
  EscV,
  EscC,
  Hv,
  Hc,
  Cv,
  Cc,
  Undecided,
  Singular,
  // dynamical plane
  Escaped,
  Basin,
  CapturedOrbit,
};

std::string_view to_string(ClassCode c) noexcept;
std::optional<ClassCode> parse_class_code(std::string_view s) noexcept;

struct Cell {
  ClassCode code = ClassCode::Undecided;
  /// Period (HV, HC, BASIN) or capture time (CV, CC, CAPTURED); 0 otherwise.
  int period_or_entry = 0;
  /// Iteration at which the pixel was decided (max_iter when undecided).
  int iter = 0;
  bool operator==(const Cell&) const = default;
};

struct ClassGrid {
  Viewport viewport;
  /// Row-major, top row first.
  std::vector<Cell> cells;

  const Cell& at(int col, int row) const { return cells[static_cast<std::size_t>(row) * viewport.width_px + col]; }
  bool operator==(const ClassGrid&) const = default;
};

using Rgb = std::array<std::uint8_t, 3>;

struct ImageBuffer {
  int width = 0;
  int height = 0;
  /// width * height RGB triples, row-major, top row first.
  std::vector<std::uint8_t> rgb;
};

enum class PaletteStyle { Escape, Capture, Dynamical };

/// Class code (and iteration band) -> color.
class Palette {
 public:
  explicit Palette(PaletteStyle style = PaletteStyle::Escape) : style_(style) {}
  static Palette escape() { return Palette(PaletteStyle::Escape); }
  static Palette capture() { return Palette(PaletteStyle::Capture); }
  static Palette dynamical() { return Palette(PaletteStyle::Dynamical); }

  PaletteStyle style() const noexcept { return style_; }
  Rgb color(const Cell& cell) const;

 private:
  PaletteStyle style_;
};

ClassCode code_of(const Label& label);
Cell cell_of(const ParameterClass& pc, int max_iter);

struct RenderOptions {
  /// 0 means available parallelism.
  int workers = 0;
  /// Subsamples per axis for the image only; the grid is always sampled at
  /// pixel centers.
  int supersample = 1;
};

struct Render {
  ClassGrid grid;
  ImageBuffer image;
};

Render render_parameter_plane(const Viewport& viewport, const RotationNumber& rn, const IterationPolicy& policy,
                              const Palette& palette, const RenderOptions& options = {});

/// Dynamical plane of a single map. The attracting cycle, if one of the
/// free singular orbits finds it, is located once and reused for the basin
/// test.
Render render_dynamical_plane(const HolomorphicMap& map, std::span<const cplx> singular_values,
                              const Viewport& viewport, const IterationPolicy& policy, const Palette& palette,
                              const RenderOptions& options = {});
Render render_dynamical_plane(cplx a, const Viewport& viewport, const RotationNumber& rn,
                              const IterationPolicy& policy, const Palette& palette,
                              const RenderOptions& options = {});

/// Class of a single dynamical-plane point; the render uses the same path.
Cell classify_point(const HolomorphicMap& map, cplx z, const IterationPolicy& policy,
                    std::optional<double> trap_radius, const std::vector<cplx>& cycle, int cycle_period);

void write_ppm(const ImageBuffer& img, std::ostream& out);
void write_ppm(const ImageBuffer& img, const std::filesystem::path& destination);

void write_grid_csv(const ClassGrid& grid, std::ostream& out);
void write_grid_csv(const ClassGrid& grid, const std::filesystem::path& destination);
/// Parses a CSV produced by write_grid_csv. The coordinates must match the
/// pixel centers of `viewport` exactly.
ClassGrid read_grid_csv(std::istream& in, const Viewport& viewport);

int resolve_workers(int requested);

}  // namespace siegel
