#include "siegel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "siegel/errors.hpp"

namespace siegel {

double rouche_gap(double radius) {
  if (!(radius > 4.0)) throw DomainError("rouche_gap requires R > 4");
  return (radius + 4.0 * radius * radius) / (radius - 4.0);
}

GapMinimum minimize_rouche_gap(double lo, double hi, double bracket, int max_iterations) {
  if (!(lo > 4.0) || !(hi > lo)) throw DomainError("search interval must satisfy 4 < lo < hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = rouche_gap(c);
  double fd = rouche_gap(d);
  GapMinimum out;
  while (b - a > bracket && out.iterations < max_iterations) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rouche_gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rouche_gap(d);
    }
    ++out.iterations;
  }
  out.radius = 0.5 * (a + b);
  out.value = rouche_gap(out.radius);
  return out;
}

RoucheReport polylike_sample_check(const ParameterPoint& pp, const RotationNumber& rn, double radius, int samples) {
  if (!(radius > 4.0)) throw DomainError("polylike check requires R > 4");
  if (samples < 256) throw DomainError("polylike check requires at least 256 samples");
  const double b = std::abs(pp.a());
  RoucheReport r;
  r.R = radius;
  r.S = radius * radius / 2.0 - 2.0 * radius;
  r.analytic_bound = radius * radius / (2.0 * b) * (1.0 + 4.0 * radius);
  r.samples = samples;
  r.applicable = b > radius && radius / b <= kOverflowExponent;
  if (radius / b > kOverflowExponent) {
    r.max_diff = std::numeric_limits<double>::infinity();
    r.margin = -std::numeric_limits<double>::infinity();
    return r;
  }

  std::vector<double> diff(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const cplx z = std::polar(radius, 2.0 * std::numbers::pi * k / samples);
    const MapValue f = eval(pp, rn, z);
    diff[static_cast<std::size_t>(k)] =
        f ? std::abs(*f - quadratic_limit(rn, z)) : std::numeric_limits<double>::infinity();
  }
  r.max_diff = *std::max_element(diff.begin(), diff.end());
  for (std::size_t k = 0; k < diff.size(); ++k) {
    r.sample_variation = std::max(r.sample_variation, std::abs(diff[(k + 1) % diff.size()] - diff[k]));
  }
  r.margin = r.S - r.max_diff;
  r.polynomial_like = r.margin > 0.0;
  r.evidence = r.margin > 10.0 * r.sample_variation;
  return r;
}

int winding_number(const HolomorphicMap& map, double radius, cplx w, int samples) {
  for (int m = std::max(samples, 8); m <= kMaxContourSamples; m *= 2) {
    std::vector<cplx> values(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const MapValue f = map.value(std::polar(radius, 2.0 * std::numbers::pi * k / m));
      if (!f) throw DomainError("contour meets the overflow region");
      if (*f == w) throw DomainError("contour passes through a solution of f(z) = w");
      values[static_cast<std::size_t>(k)] = *f - w;
    }
    double total = 0.0;
    bool fine = true;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double step = std::arg(values[(k + 1) % values.size()] / values[k]);
      if (!(std::abs(step) < std::numbers::pi / 2.0)) {
        fine = false;
        break;
      }
      total += step;
    }
    if (fine) return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  }
  throw ContourTooCoarse("argument increments stay above pi/2 at 2^20 samples");
}

int degree_by_argument_principle(const ParameterPoint& pp, const RotationNumber& rn, double radius, cplx w,
                                 int samples) {
  if (!(std::abs(w) < radius)) throw DomainError("w must lie inside D(0, R)");
  if (samples < 4096) throw DomainError("degree count requires at least 4096 samples");
  const RoucheReport report = polylike_sample_check(pp, rn, radius, samples);
  if (!(report.margin > 0.0)) throw DomainError("no positive Rouche margin on |z| = R");
  return winding_number(FamilyMap(pp, rn), radius, w, samples);
}

namespace {

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

struct Geometry {
  double l1, l2, L, B, K;
  int sigma, rho;
};

Geometry geometry(cplx lambda, double b) {
  Geometry g{};
  g.l1 = lambda.real();
  g.l2 = lambda.imag();
  g.sigma = sign_of(g.l1);
  g.rho = sign_of(g.l2);
  g.L = std::abs(g.l1) + std::abs(g.l2);
  g.B = b * b + g.sigma * b;
  g.K = b + g.sigma + g.L * g.B;
  return g;
}

}  // namespace

H1vReport h1v_check(cplx lambda, double b, int samples_per_curve) {
  if (std::abs(lambda.real()) < 1e-15) throw DomainError("lambda = +-i is excluded");
  if (!(b > 1.0)) throw DomainError("h1v check requires b > 1");
  if (samples_per_curve < 1000) throw DomainError("at least 1000 samples per curve are required");
  const Geometry g = geometry(lambda, b);

  H1vReport r;
  r.lambda1 = g.l1;
  r.lambda2 = g.l2;
  r.sigma = g.sigma;
  r.rho = g.rho;
  r.b = b;
  r.L = g.L;
  r.samples_per_curve = samples_per_curve;
  if (!(g.K > 0.0)) {
    r.s_star = r.h_at_s_star = std::numeric_limits<double>::quiet_NaN();
    r.boundary_margins.fill(-std::numeric_limits<double>::infinity());
    return r;
  }
  r.s_star = b * std::log(g.K);
  r.h_at_s_star = b + b * std::log(g.K) - std::abs(g.l1) * g.B;
  r.target = std::abs(g.l1) * g.B - r.s_star;
  r.y = g.L * g.B - r.s_star;

  // f_a = v_a + g_a with g_a(z) = a lambda exp(z/a) (z + 1 - a), a = -sigma b.
  const double a = -g.sigma * b;
  auto g_abs = [&](cplx z) { return std::abs(a * lambda * std::exp(z / a) * (z + 1.0 - a)); };

  const int n = samples_per_curve;
  const double sig = g.sigma;
  const double rho = g.rho;
  double max1 = 0.0, max2 = 0.0, max3 = 0.0;
  // g_a decays like exp(-t/b) along C_2, C_3; 50 b covers every relevant t.
  const double span = 50.0 * b;
  for (int k = 0; k < n; ++k) {
    const double frac = static_cast<double>(k) / (n - 1);
    const double t1 = r.y * (2.0 * frac - 1.0);
    max1 = std::max(max1, g_abs({sig * r.s_star, t1}));
    const double t = r.s_star + span * frac;
    max2 = std::max(max2, g_abs({sig * t, rho * r.y}));
    max3 = std::max(max3, g_abs({sig * t, -rho * r.y}));
  }
  r.boundary_margins = {r.target - max1, r.target - max2, r.target - max3};
  r.pass = r.h_at_s_star < 0.0 && r.y > 0.0 &&
           std::all_of(r.boundary_margins.begin(), r.boundary_margins.end(), [](double m) { return m > 0.0; });
  return r;
}

H1vReport h1v_check(const RotationNumber& rn, double b, int samples_per_curve) {
  return h1v_check(rn.lambda(), b, samples_per_curve);
}

H1vBound h1v_bound(cplx lambda) {
  if (std::abs(lambda.real()) < 1e-15) throw DomainError("h1v bound requires lambda1 != 0");
  const double l1 = std::abs(lambda.real());

  // gap(b) >= 0  <=>  b log(K) <= -b + |lambda1|(b^2 + sigma b), with K > 0
  auto gap = [&](double b) {
    const Geometry g = geometry(lambda, b);
    if (!(g.K > 0.0)) return -std::numeric_limits<double>::infinity();
    return -b + l1 * g.B - b * std::log(g.K);
  };

  // Near b = 1 the inequality holds vacuously (K < 1, s* < 0); take the
  // threshold above the last sampled failure instead.
  H1vBound out;
  double last_fail = 0.0;
  for (double b = 1.0 + 1e-9; b < 1e6; b *= 1.01) {
    if (gap(b) < 0.0) last_fail = b;
  }
  if (last_fail == 0.0) last_fail = 1.0 + 1e-9;
  if (gap(last_fail * 1.01) < 0.0) throw DomainError("no b satisfies the H1v inequality below 1e6");
  double lo = last_fail;
  double hi = last_fail * 1.01;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? hi : lo) = mid;
  }
  out.b_min = hi;

  // K0 (1 + x + x^2/2 + x^3/6) - (b + sigma + L(b^2 + sigma b)), x = |lambda1| b
  const Geometry g = geometry(lambda, 2.0);
  const double sigma = g.sigma;
  const double K0 = std::exp(sigma * l1 - 1.0);
  const double c3 = K0 * l1 * l1 * l1 / 6.0;
  const double c2 = K0 * l1 * l1 / 2.0 - g.L;
  const double c1 = K0 * l1 - 1.0 - g.L * sigma;
  const double c0 = K0 - sigma;
  out.cubic_cauchy_bound = std::max(1.0, (std::abs(c2) + std::abs(c1) + std::abs(c0)) / c3);
  // Newton from the root bound descends monotonically onto the largest root.
  double x = out.cubic_cauchy_bound;
  for (int i = 0; i < 200; ++i) {
    const double p = ((c3 * x + c2) * x + c1) * x + c0;
    const double dp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
    if (dp == 0.0) break;
    const double step = p / dp;
    x -= step;
    if (std::abs(step) < 1e-12 * (1.0 + std::abs(x))) break;
  }
  out.cubic_root = x;
  return out;
}

H1vBound h1v_bound(const RotationNumber& rn) { return h1v_bound(rn.lambda()); }

}  // namespace siegel
