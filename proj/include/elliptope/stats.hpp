#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "elliptope/matrix.hpp"
#include "elliptope/rng.hpp"
#include "elliptope/special_functions.hpp"

namespace elliptope {

struct KsResult {
  double statistic;    // sup ECDF deviation, in [0,1]
  double p_value;      // asymptotic Kolmogorov p-value, in [0,1]
  double n_effective;  // n for one-sample, n1 n2 / (n1 + n2) for two-sample
};

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2),
// truncated when a term drops below 1e-10. Small lambda returns 1.
inline double kolmogorov_pvalue(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = 2.0 * std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
    sum += sign * term;
    if (term < 1e-10) return std::clamp(sum, 0.0, 1.0);
    sign = -sign;
  }
  return 1.0;  // series effectively divergent: no evidence against the null
}

namespace detail {

inline double ks_lambda(double n_effective, double statistic) {
  const double sn = std::sqrt(n_effective);
  return (sn + 0.12 + 0.11 / sn) * statistic;
}

}  // namespace detail

template <typename Cdf>
KsResult ks_one_sample(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
  }
  return {d, kolmogorov_pvalue(detail::ks_lambda(n, d)), n};
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  const double n_eff = double(a.size()) * double(b.size()) / double(a.size() + b.size());
  return {d, kolmogorov_pvalue(detail::ks_lambda(n_eff, d)), n_eff};
}

// CDF of one off-diagonal entry under the uniform distribution on the set of
// dim x dim correlation matrices: (r+1)/2 follows Beta(dim/2, dim/2).
inline double elliptope_marginal_cdf(double r, int dim) {
  if (dim < 2) throw std::invalid_argument("elliptope_marginal_cdf: dim must be >= 2");
  if (r <= -1.0) return 0.0;
  if (r >= 1.0) return 1.0;
  return regularized_incomplete_beta(0.5 * (r + 1.0), 0.5 * dim, 0.5 * dim);
}

// Rejection oracle: strictly-upper entries i.i.d. uniform(-1,1), accept iff
// positive definite. Exact uniformity by construction, so it anchors the
// chain of trust for the marginal CDF. Only viable at small dimension.
class BruteForceElliptopeSampler {
 public:
  explicit BruteForceElliptopeSampler(int dim) : dim_(dim) {
    if (dim < 2 || dim > 4)
      throw std::invalid_argument("BruteForceElliptopeSampler: dim must be in [2,4]");
  }

  CorrelationMatrix sample(Rng& rng) {
    CorrelationMatrix m(dim_);
    for (;;) {
      ++attempts_;
      for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j) m.set(i, j, rng.uniform(-1.0, 1.0));
      if (is_positive_definite(m)) {
        ++accepts_;
        return m;
      }
    }
  }

  std::uint64_t attempts() const noexcept { return attempts_; }
  std::uint64_t accepts() const noexcept { return accepts_; }
  double acceptance_rate() const noexcept {
    return attempts_ == 0 ? 0.0 : double(accepts_) / double(attempts_);
  }

 private:
  int dim_;
  std::uint64_t attempts_ = 0;
  std::uint64_t accepts_ = 0;
};

// Max absolute residual of the best non-increasing least-squares fit
// (pool-adjacent-violators). Used to test monotone acceptance trends
// without flaky pointwise assertions.
inline double isotonic_nonincreasing_max_residual(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n == 0) return 0.0;
  // PAVA on the negated sequence fits non-decreasing; negate back.
  std::vector<double> level;
  std::vector<std::size_t> count;
  for (std::size_t k = 0; k < n; ++k) {
    level.push_back(-y[k]);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const double merged = (level[level.size() - 2] * count[count.size() - 2] +
                             level.back() * count.back()) /
                            double(count[count.size() - 2] + count.back());
      count[count.size() - 2] += count.back();
      level[level.size() - 2] = merged;
      level.pop_back();
      count.pop_back();
    }
  }
  double residual = 0.0;
  std::size_t pos = 0;
  for (std::size_t blocks = 0; blocks < level.size(); ++blocks) {
    for (std::size_t k = 0; k < count[blocks]; ++k, ++pos)
      residual = std::max(residual, std::fabs(-level[blocks] - y[pos]));
  }
  return residual;
}

}  // namespace elliptope
