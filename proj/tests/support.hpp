#pragma once

// Test-side oracles, kept independent of the library paths they check.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "elliptope/matrix.hpp"
#include "elliptope/rng.hpp"

namespace test_support {

// Cyclic Jacobi eigensolver for small symmetric matrices; only the
// spectrum is needed.
inline std::vector<double> symmetric_eigenvalues(const elliptope::CorrelationMatrix& m) {
  const int p = m.dim();
  std::vector<double> a(std::size_t(p) * p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a[std::size_t(i) * p + j] = m(i, j);
  auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * p + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-24) break;
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) {
        if (std::fabs(at(i, j)) < 1e-300) continue;
        const double theta = 0.5 * (at(j, j) - at(i, i)) / at(i, j);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < p; ++k) {
          const double aik = at(i, k), ajk = at(j, k);
          at(i, k) = c * aik - s * ajk;
          at(j, k) = s * aik + c * ajk;
        }
        for (int k = 0; k < p; ++k) {
          const double aki = at(k, i), akj = at(k, j);
          at(k, i) = c * aki - s * akj;
          at(k, j) = s * aki + c * akj;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) eig[std::size_t(i)] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

// Random valid factor: each row uniform on its hemisphere.
inline elliptope::UpperCholeskyFactor random_factor(int dim, elliptope::Rng& rng) {
  elliptope::UpperCholeskyFactor u(dim);
  for (int i = 0; i < dim - 1; ++i) {
    auto row = u.row(i);
    double sq = 0.0;
    do {
      sq = 0.0;
      for (auto& v : row) {
        v = rng.normal();
        sq += v * v;
      }
    } while (sq < 1e-300);
    const double norm = std::sqrt(sq);
    for (auto& v : row) v /= norm;
    if (row[0] < 0) row[0] = -row[0];
    if (row[0] == 0.0) row[0] = 1e-8;  // measure-zero guard for the test generator
  }
  return u;
}

// sup_x |weighted ECDF(x) - cdf(x)| over the sample points.
template <typename Cdf>
double weighted_ecdf_sup_distance(std::vector<double> values, std::vector<double> weights,
                                  Cdf&& cdf) {
  if (values.size() != weights.size() || values.empty())
    throw std::invalid_argument("weighted_ecdf_sup_distance: bad input");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cum = 0.0;
  double sup = 0.0;
  for (std::size_t k : order) {
    const double f = cdf(values[k]);
    sup = std::max(sup, std::fabs(cum / total - f));
    cum += weights[k];
    sup = std::max(sup, std::fabs(cum / total - f));
  }
  return sup;
}

}  // namespace test_support
