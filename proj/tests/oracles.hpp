#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. None of these call into the library's numerics.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

namespace bmp = boost::multiprecision;
using mpf = bmp::cpp_bin_float_50;
using mpc = bmp::cpp_complex_50;
using cplx = std::complex<double>;

inline cplx to_double(const mpc& z) { return {z.real().convert_to<double>(), z.imag().convert_to<double>()}; }

inline mpc golden_lambda() {
  const mpf theta = (bmp::sqrt(mpf(5)) - 1) / 2;
  const mpf angle = 2 * boost::math::constants::pi<mpf>() * theta;
  return {bmp::cos(angle), bmp::sin(angle)};
}

/// f_a(z) = lambda a (e^{z/a}(z + 1 - a) + a - 1) in 50-digit arithmetic.
inline mpc family(const mpc& lambda, const mpc& a, const mpc& z) {
  return lambda * a * (bmp::exp(z / a) * (z + mpc(1) - a) - mpc(1) + a);
}

/// Central difference of the family at 50 digits. The additive constant
/// lambda a (a - 1) is dropped before differencing: it does not change the
/// derivative but dominates f wherever e^{z/a} is tiny.
inline mpc family_central_difference(const mpc& lambda, cplx a, cplx z) {
  const mpc A(a.real(), a.imag()), Z(z.real(), z.imag());
  const auto g = [&](const mpc& w) { return lambda * A * bmp::exp(w / A) * (w + mpc(1) - A); };
  const mpc H(mpf("1e-20"), 0);
  return (g(Z + H) - g(Z - H)) / (2 * H);
}

/// Brjuno sum of the golden mean over Fibonacci denominators, summed until
/// terms drop below 1e-30.
inline double golden_brjuno_sum() {
  mpf q0 = 1, q1 = 1, sum = 0;
  for (int n = 0; n < 400; ++n) {
    const mpf term = log(q1) / q0;
    sum += term;
    if (n > 5 && term < mpf("1e-30")) break;
    const mpf next = q0 + q1;
    q0 = q1;
    q1 = next;
  }
  return sum.convert_to<double>();
}

using Poly = std::vector<cplx>;  // p[k] = coefficient of w^k

inline Poly mul_trunc(const Poly& x, const Poly& y, std::size_t deg) {
  Poly out(deg + 1, cplx{});
  for (std::size_t i = 0; i < x.size() && i <= deg; ++i) {
    for (std::size_t j = 0; j < y.size() && i + j <= deg; ++j) out[i + j] += x[i] * y[j];
  }
  return out;
}

/// F(h(w)) truncated at degree deg, Horner over polynomials. c[k] is the
/// coefficient of z^{k+1} in F.
inline Poly compose(const std::vector<cplx>& c, const Poly& h, std::size_t deg) {
  Poly acc(deg + 1, cplx{});
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc[0] += *it;
    acc = mul_trunc(acc, h, deg);
  }
  return acc;
}

/// Brute-force solve of F(h(w)) = h(lambda w) order by order. Returns
/// h_1..h_n.
inline std::vector<cplx> composition_solve(const std::vector<cplx>& c, cplx lambda, int n) {
  Poly h(static_cast<std::size_t>(n) + 1, cplx{});
  h[1] = 1.0;
  for (int m = 2; m <= n; ++m) {
    const Poly lhs = compose(c, h, static_cast<std::size_t>(m));
    // with h_m = 0 the w^m coefficient of F(h) - h(lambda w) is rest; the
    // unknown enters as (lambda - lambda^m) h_m
    const cplx rest = lhs[static_cast<std::size_t>(m)];
    h[static_cast<std::size_t>(m)] = rest / (std::pow(lambda, m) - lambda);
  }
  return {h.begin() + 1, h.end()};
}

}  // namespace oracle
