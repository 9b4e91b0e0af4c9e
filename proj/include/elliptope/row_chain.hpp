#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "elliptope/matrix.hpp"
#include "elliptope/rng.hpp"

namespace elliptope {

// Target density f(v) proportional to v_1^i on the hemisphere S_+^{p-i},
// where i is the 1-based row index of the factor row being sampled.
struct RowTarget {
  int matrix_dim;  // p
  int row_index;   // i, 1-based, 1 <= i <= p
  int exponent;    // equals row_index except under fault injection

  RowTarget(int p, int i) : matrix_dim(p), row_index(i), exponent(i) {
    if (p < 1 || i < 1 || i > p)
      throw std::invalid_argument("RowTarget: need 1 <= row_index <= matrix_dim");
  }

  // Fault-injection hook for verification suites; breaks the exponent ==
  // row_index invariant on purpose so downstream gates can prove they catch it.
  static RowTarget with_exponent(int p, int i, int e) {
    RowTarget t(p, i);
    t.exponent = e;
    return t;
  }

  int ambient_dim() const noexcept { return matrix_dim - row_index + 1; }
};

struct RowChainConfig {
  double sigma_eps = 0.01;    // std. deviation of each perturbation component
  long long burn_in = 1000;   // discarded leading iterations
  long long thin = 1;         // keep every thin-th post-burn-in state
  std::uint64_t seed = 0;

  void validate() const {
    if (!(sigma_eps > 0.0)) throw std::invalid_argument("RowChainConfig: sigma_eps must be > 0");
    if (burn_in < 0) throw std::invalid_argument("RowChainConfig: burn_in must be >= 0");
    if (thin < 1) throw std::invalid_argument("RowChainConfig: thin must be >= 1");
  }
};

struct RowChainState {
  HemisphereVector current;
  std::uint64_t steps_taken = 0;
  std::uint64_t accepts = 0;
  std::uint64_t degenerate_redraws = 0;

  double acceptance_ratio() const noexcept {
    return steps_taken == 0 ? 0.0 : double(accepts) / double(steps_taken);
  }
};

// Normalized Gaussian perturbation of the current vector. The result is a
// unit vector whose first coordinate may have either sign; it only becomes
// a HemisphereVector if accepted.
inline std::vector<double> propose(const HemisphereVector& v, double sigma_eps, Rng& rng,
                                   std::uint64_t* degenerate_redraws = nullptr) {
  const int m = v.ambient_dim();
  std::vector<double> cand(static_cast<std::size_t>(m));
  for (;;) {
    double sq = 0.0;
    for (int j = 0; j < m; ++j) {
      cand[j] = v.coords[j] + rng.normal(sigma_eps);
      sq += cand[j] * cand[j];
    }
    const double norm = std::sqrt(sq);
    if (norm >= 1e-300) {
      for (double& c : cand) c /= norm;
      return cand;
    }
    if (degenerate_redraws) ++*degenerate_redraws;  // measure-zero event, redraw
  }
}

// min(1, (v1_tilde / v1)^exponent) with the positivity indicator, in log
// space: a direct power overflows long before the exponent reaches its
// large-dimension range.
inline double acceptance_probability(double v1, double v1_tilde, int exponent) {
  if (!(v1_tilde > 0.0)) return 0.0;
  const double log_ratio = double(exponent) * (std::log(v1_tilde) - std::log(v1));
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

// Initial state: standard Gaussian vector, first coordinate folded positive,
// normalized. Ambient dimension 1 is the single-point space {(1)}.
inline RowChainState chain_init(const RowTarget& target, Rng& rng) {
  const int m = target.ambient_dim();
  RowChainState state;
  if (m == 1) {
    state.current.coords = {1.0};
    return state;
  }
  std::vector<double> v(static_cast<std::size_t>(m));
  for (;;) {
    double sq = 0.0;
    for (int j = 0; j < m; ++j) {
      v[j] = rng.normal();
      sq += v[j] * v[j];
    }
    v[0] = std::fabs(v[0]);
    const double norm = std::sqrt(sq);
    if (v[0] > 0.0 && norm >= 1e-300) {
      for (double& c : v) c /= norm;
      break;
    }
  }
  state.current.coords = std::move(v);
  return state;
}

// One Metropolis transition. The proposal is symmetric, so no Hastings
// correction appears in the acceptance probability.
inline void chain_step(RowChainState& state, const RowTarget& target,
                       const RowChainConfig& config, Rng& rng) {
  auto cand = propose(state.current, config.sigma_eps, rng, &state.degenerate_redraws);
  const double accept_prob =
      acceptance_probability(state.current.coords[0], cand[0], target.exponent);
  const double u = rng.uniform();
  if (u < accept_prob) {
    state.current.coords = std::move(cand);
    ++state.accepts;
  }
  ++state.steps_taken;
}

// Runs burn_in steps, then collects every thin-th state until n are taken.
// With thin = 1 the output is the consecutive post-burn-in trajectory.
inline std::vector<HemisphereVector> sample_row(const RowTarget& target,
                                                const RowChainConfig& config, long long n,
                                                Rng& rng) {
  config.validate();
  if (n < 1) throw std::invalid_argument("sample_row: n must be >= 1");
  RowChainState state = chain_init(target, rng);
  for (long long t = 0; t < config.burn_in; ++t) chain_step(state, target, config, rng);
  std::vector<HemisphereVector> out;
  out.reserve(std::size_t(n));
  for (long long k = 0; k < n; ++k) {
    for (long long t = 0; t < config.thin; ++t) chain_step(state, target, config, rng);
    out.push_back(state.current);
  }
  return out;
}

// Direct sampler for f(v) ~ v_1^i on the hemisphere: v_1^2 follows
// Beta((i+1)/2, (p-i)/2) under the surface measure, and the remaining
// coordinates form an independent uniform direction.
inline HemisphereVector exact_row_sample(const RowTarget& target, Rng& rng) {
  const int m = target.ambient_dim();
  if (m == 1) return HemisphereVector{{1.0}};
  double s;
  do {
    s = rng.beta((target.exponent + 1) / 2.0, (m - 1) / 2.0);
  } while (!(s > 0.0));
  HemisphereVector v;
  v.coords.resize(std::size_t(m));
  v.coords[0] = std::sqrt(s);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (int j = 1; j < m; ++j) {
      v.coords[j] = rng.normal();
      sq += v.coords[j] * v.coords[j];
    }
  } while (sq < 1e-300);
  const double scale = std::sqrt(1.0 - s) / std::sqrt(sq);
  for (int j = 1; j < m; ++j) v.coords[j] *= scale;
  return v;
}

}  // namespace elliptope
