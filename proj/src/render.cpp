#include "siegel/render.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "siegel/errors.hpp"
#include "siegel/linearize.hpp"

namespace siegel {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Runs fn(row) for every row on a pool of workers. Each row writes only its
// own slot, so the result does not depend on scheduling.
void for_each_row(int rows, int workers, const std::function<void(int)>& fn) {
  workers = std::clamp(workers, 1, rows);
  if (workers == 1) {
    for (int r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < rows && !failed; r = next++) {
        try {
          fn(r);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

Rgb shade(Rgb base, int band) {
  // lighten toward white in eight steps
  const int step = std::min(band, 7);
  Rgb out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = static_cast<std::uint8_t>(base[i] + (255 - base[i]) * step / 9);
  return out;
}

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kLightGrey{192, 192, 192};
constexpr Rgb kDarkGrey{96, 96, 96};
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kIvory{255, 255, 235};

ImageBuffer paint(const ClassGrid& grid, const Palette& palette) {
  ImageBuffer img{grid.viewport.width_px, grid.viewport.height_px, {}};
  img.rgb.reserve(grid.cells.size() * 3);
  for (const Cell& c : grid.cells) {
    const Rgb rgb = palette.color(c);
    img.rgb.insert(img.rgb.end(), rgb.begin(), rgb.end());
  }
  return img;
}

// Image from s x s subsamples per pixel; cell_at classifies one point.
ImageBuffer paint_supersampled(const Viewport& vp, int s, int workers, const Palette& palette,
                               const std::function<Cell(cplx)>& cell_at) {
  ImageBuffer img{vp.width_px, vp.height_px, std::vector<std::uint8_t>(static_cast<std::size_t>(vp.width_px) * vp.height_px * 3)};
  const double dx = (vp.lower_right.real() - vp.upper_left.real()) / vp.width_px;
  const double dy = (vp.upper_left.imag() - vp.lower_right.imag()) / vp.height_px;
  for_each_row(vp.height_px, workers, [&](int row) {
    for (int col = 0; col < vp.width_px; ++col) {
      std::array<int, 3> sum{};
      for (int sy = 0; sy < s; ++sy) {
        for (int sx = 0; sx < s; ++sx) {
          const cplx z{vp.upper_left.real() + (col + (sx + 0.5) / s) * dx,
                       vp.upper_left.imag() - (row + (sy + 0.5) / s) * dy};
          const Rgb c = palette.color(cell_at(z));
          for (std::size_t i = 0; i < 3; ++i) sum[i] += c[i];
        }
      }
      const int n = s * s;
      const std::size_t base = (static_cast<std::size_t>(row) * vp.width_px + col) * 3;
      for (std::size_t i = 0; i < 3; ++i) img.rgb[base + i] = static_cast<std::uint8_t>((sum[i] + n / 2) / n);
    }
  });
  return img;
}

std::optional<double> resolve_trap(const HolomorphicMap& map, const IterationPolicy& policy) {
  if (const auto* fixed = std::get_if<FixedTrap>(&policy.trap_source)) return fixed->radius;
  try {
    return trap_disc(map).radius;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

void Viewport::validate() const {
  if (!(upper_left.real() < lower_right.real())) throw DomainError("viewport: Re(upper_left) must be < Re(lower_right)");
  if (!(upper_left.imag() > lower_right.imag())) throw DomainError("viewport: Im(upper_left) must be > Im(lower_right)");
  if (width_px < 1 || width_px > 16384 || height_px < 1 || height_px > 16384) {
    throw DomainError("viewport: pixel counts must be in [1, 16384]");
  }
}

cplx Viewport::pixel_center(int col, int row) const {
  const double dx = (lower_right.real() - upper_left.real()) / width_px;
  const double dy = (upper_left.imag() - lower_right.imag()) / height_px;
  return {upper_left.real() + (col + 0.5) * dx, upper_left.imag() - (row + 0.5) * dy};
}

std::optional<PixelIndex> Viewport::pixel_of(cplx z) const {
  const double fx = (z.real() - upper_left.real()) / (lower_right.real() - upper_left.real()) * width_px;
  const double fy = (upper_left.imag() - z.imag()) / (upper_left.imag() - lower_right.imag()) * height_px;
  if (!(fx >= 0.0 && fx < width_px && fy >= 0.0 && fy < height_px)) return std::nullopt;
  return PixelIndex{static_cast<int>(std::floor(fx)), static_cast<int>(std::floor(fy))};
}

std::string_view to_string(ClassCode c) noexcept {
  switch (c) {
    case ClassCode::EscV:
      return "ESC_V";
    case ClassCode::EscC:
      return "ESC_C";
    case ClassCode::Hv:
      return "HV";
    case ClassCode::Hc:
      return "HC";
    case ClassCode::Cv:
      return "CV";
    case ClassCode::Cc:
      return "CC";
    case ClassCode::Undecided:
      return "UNDECIDED";
    case ClassCode::Singular:
      return "SINGULAR";
    case ClassCode::Escaped:
      return "ESCAPED";
    case ClassCode::Basin:
      return "BASIN";
    case ClassCode::CapturedOrbit:
      return "CAPTURED";
  }
  return "?";
}

std::optional<ClassCode> parse_class_code(std::string_view s) noexcept {
  for (int i = 0; i <= static_cast<int>(ClassCode::CapturedOrbit); ++i) {
    const auto c = static_cast<ClassCode>(i);
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

Rgb Palette::color(const Cell& cell) const {
  const int band = cell.period_or_entry;
  switch (style_) {
    case PaletteStyle::Escape:
      switch (cell.code) {
        case ClassCode::EscV:
          return kLightGrey;
        case ClassCode::EscC:
          return kDarkGrey;
        case ClassCode::Undecided:
          return kIvory;
        case ClassCode::Singular:
          return kBlack;
        default:
          return kWhite;
      }
    case PaletteStyle::Capture:
      // capture components shaded by capture time, cycles by period
      switch (cell.code) {
        case ClassCode::EscV:
          return kLightGrey;
        case ClassCode::EscC:
          return kDarkGrey;
        case ClassCode::Cv:
          return shade({30, 70, 200}, band);
        case ClassCode::Cc:
          return shade({220, 110, 20}, band - 1);
        case ClassCode::Hv:
          return shade({40, 150, 60}, band - 1);
        case ClassCode::Hc:
          return shade({140, 50, 160}, band - 1);
        case ClassCode::Singular:
          return kBlack;
        default:
          return kWhite;
      }
    case PaletteStyle::Dynamical:
      switch (cell.code) {
        case ClassCode::Escaped:
        case ClassCode::EscV:
        case ClassCode::EscC:
          return kDarkGrey;
        case ClassCode::Basin:
          return kLightGrey;
        case ClassCode::CapturedOrbit:
          return kWhite;
        case ClassCode::Singular:
          return kBlack;
        default:
          return kIvory;
      }
  }
  return kWhite;
}

ClassCode code_of(const Label& label) {
  switch (label.kind) {
    case LabelKind::Hv:
      return ClassCode::Hv;
    case LabelKind::Hc:
      return ClassCode::Hc;
    case LabelKind::Cv:
      return ClassCode::Cv;
    case LabelKind::Cc:
      return ClassCode::Cc;
    case LabelKind::EscapeV:
      return ClassCode::EscV;
    case LabelKind::EscapeC:
      return ClassCode::EscC;
    case LabelKind::BothAccumulate:
    case LabelKind::Unknown:
      return ClassCode::Undecided;
  }
  return ClassCode::Undecided;
}

Cell cell_of(const ParameterClass& pc, int max_iter) {
  Cell cell{code_of(pc.label), 0, max_iter};
  auto iter_of = [&](const OrbitClass& oc) {
    return std::visit(
        [&](const auto& v) -> int {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Escaped>) return v.first_exit_iter;
          if constexpr (std::is_same_v<T, Cycle>) return v.detected_iter;
          if constexpr (std::is_same_v<T, Captured>) return v.entry_iter;
          return max_iter;
        },
        oc);
  };
  switch (pc.label.kind) {
    case LabelKind::Hv:
    case LabelKind::Cv:
      cell.period_or_entry = pc.label.p;
      cell.iter = iter_of(pc.asymptotic_class);
      break;
    case LabelKind::Hc:
    case LabelKind::Cc:
      cell.period_or_entry = pc.label.p;
      cell.iter = iter_of(pc.critical_class);
      break;
    case LabelKind::EscapeV:
      cell.iter = iter_of(pc.asymptotic_class);
      break;
    case LabelKind::EscapeC:
      cell.iter = iter_of(pc.critical_class);
      break;
    default:
      break;
  }
  return cell;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIEGELLAB_WORKERS")) {
    int n = 0;
    const auto* end = env + std::char_traits<char>::length(env);
    if (std::from_chars(env, end, n).ec == std::errc{} && n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Render render_parameter_plane(const Viewport& viewport, const RotationNumber& rn, const IterationPolicy& policy,
                              const Palette& palette, const RenderOptions& options) {
  viewport.validate();
  policy.validate();
  const int workers = resolve_workers(options.workers);
  auto cell_at = [&](cplx a) -> Cell {
    if (a == cplx{}) return {ClassCode::Singular, 0, 0};
    return cell_of(classify_parameter(a, rn, policy), policy.max_iter);
  };

  Render out;
  out.grid.viewport = viewport;
  out.grid.cells.resize(static_cast<std::size_t>(viewport.width_px) * viewport.height_px);
  for_each_row(viewport.height_px, workers, [&](int row) {
    for (int col = 0; col < viewport.width_px; ++col) {
      out.grid.cells[static_cast<std::size_t>(row) * viewport.width_px + col] = cell_at(viewport.pixel_center(col, row));
    }
  });
  out.image = options.supersample > 1 ? paint_supersampled(viewport, options.supersample, workers, palette, cell_at)
                                      : paint(out.grid, palette);
  return out;
}

Cell classify_point(const HolomorphicMap& map, cplx z, const IterationPolicy& policy, std::optional<double> trap_radius,
                    const std::vector<cplx>& cycle, int cycle_period) {
  int rejections = 0;
  for (int n = 0; n <= policy.max_iter; ++n) {
    if (!finite(z) || std::abs(z) > policy.escape_radius) return {ClassCode::Escaped, 0, n};
    if (trap_radius && rejections < 3 && std::abs(z) < *trap_radius) {
      if (z == cplx{} || rotation_check(map, z, 10.0 * *trap_radius).passed) return {ClassCode::CapturedOrbit, n, n};
      ++rejections;
    }
    for (const cplx& zj : cycle) {
      if (std::abs(z - zj) < 1e-6 * (1.0 + std::abs(zj))) return {ClassCode::Basin, cycle_period, n};
    }
    if (n == policy.max_iter) break;
    const MapValue next = map.value(z);
    if (!next) return {ClassCode::Escaped, 0, n + 1};
    z = *next;
  }
  return {ClassCode::Undecided, 0, policy.max_iter};
}

Render render_dynamical_plane(const HolomorphicMap& map, std::span<const cplx> singular_values,
                              const Viewport& viewport, const IterationPolicy& policy, const Palette& palette,
                              const RenderOptions& options) {
  viewport.validate();
  policy.validate();
  const int workers = resolve_workers(options.workers);
  const std::optional<double> trap = resolve_trap(map, policy);

  std::vector<cplx> cycle;
  int period = 0;
  for (const cplx& s : singular_values) {
    const OrbitClass oc = classify_orbit(map, s, policy, trap);
    if (const auto* c = std::get_if<Cycle>(&oc)) {
      cycle = c->points;
      period = c->period;
      break;
    }
  }

  auto cell_at = [&](cplx z) { return classify_point(map, z, policy, trap, cycle, period); };
  Render out;
  out.grid.viewport = viewport;
  out.grid.cells.resize(static_cast<std::size_t>(viewport.width_px) * viewport.height_px);
  for_each_row(viewport.height_px, workers, [&](int row) {
    for (int col = 0; col < viewport.width_px; ++col) {
      out.grid.cells[static_cast<std::size_t>(row) * viewport.width_px + col] = cell_at(viewport.pixel_center(col, row));
    }
  });
  out.image = options.supersample > 1 ? paint_supersampled(viewport, options.supersample, workers, palette, cell_at)
                                      : paint(out.grid, palette);
  return out;
}

Render render_dynamical_plane(cplx a, const Viewport& viewport, const RotationNumber& rn,
                              const IterationPolicy& policy, const Palette& palette, const RenderOptions& options) {
  const ParameterPoint pp(a, rn);
  const FamilyMap map(pp, rn);
  const std::array<cplx, 2> singular{pp.asymptotic_value(), pp.critical_value()};
  return render_dynamical_plane(map, singular, viewport, policy, palette, options);
}

void write_ppm(const ImageBuffer& img, std::ostream& out) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

void write_ppm(const ImageBuffer& img, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + destination.string() + " for writing");
  write_ppm(img, out);
  if (!out) throw std::runtime_error("write failed: " + destination.string());
}

void write_grid_csv(const ClassGrid& grid, std::ostream& out) {
  out << "re,im,class,period_or_entry,iter\n";
  const Viewport& vp = grid.viewport;
  char buf[96];
  for (int row = 0; row < vp.height_px; ++row) {
    for (int col = 0; col < vp.width_px; ++col) {
      const cplx z = vp.pixel_center(col, row);
      const Cell& c = grid.at(col, row);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", z.real(), z.imag());
      out << buf << to_string(c.code) << ',' << c.period_or_entry << ',' << c.iter << '\n';
    }
  }
}

void write_grid_csv(const ClassGrid& grid, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + destination.string() + " for writing");
  write_grid_csv(grid, out);
  if (!out) throw std::runtime_error("write failed: " + destination.string());
}

ClassGrid read_grid_csv(std::istream& in, const Viewport& viewport) {
  viewport.validate();
  std::string line;
  if (!std::getline(in, line) || line != "re,im,class,period_or_entry,iter") {
    throw std::runtime_error("grid csv: missing header");
  }
  ClassGrid grid;
  grid.viewport = viewport;
  const auto expected = static_cast<std::size_t>(viewport.width_px) * viewport.height_px;
  grid.cells.reserve(expected);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string re, im, code, p, it;
    if (!std::getline(fields, re, ',') || !std::getline(fields, im, ',') || !std::getline(fields, code, ',') ||
        !std::getline(fields, p, ',') || !std::getline(fields, it)) {
      throw std::runtime_error("grid csv: malformed line: " + line);
    }
    const std::size_t idx = grid.cells.size();
    if (idx >= expected) throw std::runtime_error("grid csv: more rows than viewport pixels");
    const cplx center =
        viewport.pixel_center(static_cast<int>(idx % viewport.width_px), static_cast<int>(idx / viewport.width_px));
    if (std::strtod(re.c_str(), nullptr) != center.real() || std::strtod(im.c_str(), nullptr) != center.imag()) {
      throw std::runtime_error("grid csv: coordinates do not match the viewport at row " + std::to_string(idx));
    }
    const auto cc = parse_class_code(code);
    if (!cc) throw std::runtime_error("grid csv: unknown class code " + code);
    grid.cells.push_back({*cc, std::stoi(p), std::stoi(it)});
  }
  if (grid.cells.size() != expected) throw std::runtime_error("grid csv: pixel count mismatch");
  return grid;
}

}  // namespace siegel
