#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "elliptope/matrix.hpp"
#include "elliptope/matrix_sampler.hpp"
#include "elliptope/rng.hpp"
#include "elliptope/special_functions.hpp"

namespace elliptope {

enum class BaselineMethod { vine, onion, polar };

inline const char* to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::vine: return "vine";
    case BaselineMethod::onion: return "onion";
    case BaselineMethod::polar: return "polar";
  }
  return "?";
}

// C-vine construction: partial correlations at tree level k (1-based) are
// 2 Beta(beta_k, beta_k) - 1 with beta_k = 1 + (p - 1 - k)/2, then converted
// to plain correlations by the standard partial-correlation recursion.
inline CorrelationMatrix vine_sample(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("vine_sample: dim must be >= 1");
  CorrelationMatrix result(dim);
  if (dim == 1) return result;
  std::vector<double> partial(std::size_t(dim) * dim, 0.0);
  auto pc = [&](int a, int b) -> double& { return partial[std::size_t(a) * dim + b]; };
  for (int k = 0; k < dim - 1; ++k) {
    const double beta_k = 1.0 + 0.5 * (dim - 2 - k);
    for (int j = k + 1; j < dim; ++j) pc(k, j) = 2.0 * rng.beta(beta_k, beta_k) - 1.0;
  }
  for (int k = 0; k < dim - 1; ++k) {
    for (int j = k + 1; j < dim; ++j) {
      double rho = pc(k, j);
      for (int l = k - 1; l >= 0; --l) {
        rho = rho * std::sqrt((1.0 - pc(l, k) * pc(l, k)) * (1.0 - pc(l, j) * pc(l, j))) +
              pc(l, k) * pc(l, j);
      }
      if (!(rho > -1.0 && rho < 1.0))
        throw std::logic_error("vine_sample: recursion left (-1,1), implementation bug");
      result.set(k, j, rho);
    }
  }
  return result;
}

// Onion-style draw: the direct Cholesky-row sampler is mathematically the
// onion construction in these coordinates, so it delegates outright.
inline CorrelationMatrix onion_sample(int dim, Rng& rng) {
  return exact_elliptope_sample(dim, rng);
}

namespace detail {

// Inverse-transform draw by bisection on a monotone CDF over [lo, hi].
template <typename Cdf>
double invert_cdf_bisect(Cdf&& cdf, double lo, double hi, double u, double tol = 1e-10,
                         int max_iter = 200) {
  int iter = 0;
  while (hi - lo > tol) {
    if (++iter > max_iter)
      throw std::runtime_error("polar_sample: bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// CDF of the first polar angle, density ~ cos^i(t) sin^{d-1}(t) on (0, pi/2).
inline double polar_theta1_cdf(double theta, int i, int d) {
  const double s = std::sin(theta);
  return regularized_incomplete_beta(s * s, 0.5 * d, 0.5 * (i + 1));
}

// CDF of an interior angle, density ~ sin^k(t) on (0, pi).
inline double polar_sine_power_cdf(double theta, int k) {
  const double s = std::sin(theta);
  const double half = 0.5 * regularized_incomplete_beta(s * s, 0.5 * (k + 1), 0.5);
  return theta <= 0.5 * M_PI ? half : 1.0 - half;
}

}  // namespace detail

// Spherical-coordinate construction of the factor rows. Every non-uniform
// angle is drawn by numeric inversion of its CDF; this is what makes the
// method slow, and the cost is kept on purpose for the benchmark comparison.
inline CorrelationMatrix polar_sample(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("polar_sample: dim must be >= 1");
  UpperCholeskyFactor factor(dim);
  for (int k = 0; k < dim - 1; ++k) {
    const int i = k + 1;    // target exponent for this row
    const int d = dim - i;  // number of angles; ambient dimension is d + 1
    auto row = factor.row(k);
    const double theta1 = detail::invert_cdf_bisect(
        [&](double t) { return detail::polar_theta1_cdf(t, i, d); }, 0.0, 0.5 * M_PI,
        rng.uniform());
    if (d == 1) {
      row[0] = std::cos(theta1);
      row[1] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sin(theta1);
      continue;
    }
    std::vector<double> angles(static_cast<std::size_t>(d));
    angles[0] = theta1;
    for (int a = 1; a < d - 1; ++a) {
      const int power = d - (a + 1);
      angles[std::size_t(a)] = detail::invert_cdf_bisect(
          [&](double t) { return detail::polar_sine_power_cdf(t, power); }, 0.0, M_PI,
          rng.uniform());
    }
    angles[std::size_t(d - 1)] = rng.uniform(0.0, 2.0 * M_PI);
    double prod = 1.0;
    for (int a = 0; a < d; ++a) {
      row[a] = prod * std::cos(angles[std::size_t(a)]);
      prod *= std::sin(angles[std::size_t(a)]);
    }
    row[d] = prod;
  }
  return build_correlation(factor);
}

inline CorrelationMatrix baseline_sample(BaselineMethod method, int dim, Rng& rng) {
  switch (method) {
    case BaselineMethod::vine: return vine_sample(dim, rng);
    case BaselineMethod::onion: return onion_sample(dim, rng);
    case BaselineMethod::polar: return polar_sample(dim, rng);
  }
  throw std::logic_error("baseline_sample: unknown method");
}

}  // namespace elliptope
