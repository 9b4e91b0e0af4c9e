#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "elliptope/matrix.hpp"
#include "elliptope/parallel.hpp"
#include "elliptope/row_chain.hpp"

namespace elliptope {

// chain_reuse keeps one persistent Metropolis chain per row: burn-in is paid
// once and successive matrices are correlated (the consecutive-state return
// of the row algorithm). restart_per_matrix pays a fresh burn-in per matrix
// and yields independent draws.
enum class SamplerMode { chain_reuse, restart_per_matrix };

struct MatrixSamplerConfig {
  int dim = 2;
  long long count = 1;
  RowChainConfig row;
  SamplerMode mode = SamplerMode::chain_reuse;
  int threads = 0;  // <= 0: hardware concurrency

  void validate() const {
    if (dim < 1) throw std::invalid_argument("MatrixSamplerConfig: dim must be >= 1");
    if (count < 1) throw std::invalid_argument("MatrixSamplerConfig: count must be >= 1");
    row.validate();
  }
};

namespace detail {

// Matrices are produced in blocks so memory stays bounded at large dimension
// while rows still advance in parallel.
inline long long sampler_block_size(int dim, long long count) {
  const long long cap =
      std::max<long long>(1, 8'000'000 / (static_cast<long long>(dim) * dim + 1));
  return std::min<long long>(count, std::min<long long>(cap, 256));
}

template <typename Sink>
void emit_factor_rows(const std::vector<std::vector<double>>& buffers, long long block_index,
                      int dim, long long emitted, Sink& sink) {
  UpperCholeskyFactor factor(dim);
  for (int k = 0; k < dim - 1; ++k) {
    const int len = dim - k;
    auto row = factor.row(k);
    const double* src = buffers[std::size_t(k)].data() + block_index * len;
    std::copy(src, src + len, row.begin());
  }
  CorrelationMatrix matrix = build_correlation(factor);
#ifdef NDEBUG
  if (emitted % 100 == 0) matrix.validate();  // 1% sample in release
#else
  (void)emitted;
  matrix.validate();
#endif
  sink(matrix);
}

}  // namespace detail

// Streams `count` matrices Phi(U) built from one Metropolis row chain per
// row index. Rows run in parallel on private RNG substreams keyed by
// (seed, row, replica), so output is bit-identical for any thread count.
template <typename Sink>
void sample_matrices(const MatrixSamplerConfig& config, Sink&& sink) {
  config.validate();
  const int p = config.dim;
  const long long n_total = config.count;
  if (p == 1) {
    const CorrelationMatrix unit(1);
    for (long long n = 0; n < n_total; ++n) sink(unit);
    return;
  }

  const int n_rows = p - 1;  // the last factor row is the constant (1)
  const long long block = detail::sampler_block_size(p, n_total);
  std::vector<std::vector<double>> buffers(static_cast<std::size_t>(n_rows));
  for (int k = 0; k < n_rows; ++k)
    buffers[std::size_t(k)].resize(std::size_t(block) * (p - k));

  if (config.mode == SamplerMode::chain_reuse) {
    std::vector<Rng> rngs;
    std::vector<RowChainState> states(static_cast<std::size_t>(n_rows));
    rngs.reserve(std::size_t(n_rows));
    for (int k = 0; k < n_rows; ++k)
      rngs.push_back(Rng::substream(config.row.seed, std::uint64_t(k + 1), 0));

    parallel_for(n_rows, config.threads, [&](long long k) {
      const RowTarget target(p, int(k) + 1);
      states[std::size_t(k)] = chain_init(target, rngs[std::size_t(k)]);
      for (long long t = 0; t < config.row.burn_in; ++t)
        chain_step(states[std::size_t(k)], target, config.row, rngs[std::size_t(k)]);
    });

    long long emitted = 0;
    while (emitted < n_total) {
      const long long b = std::min(block, n_total - emitted);
      parallel_for(n_rows, config.threads, [&](long long k) {
        const RowTarget target(p, int(k) + 1);
        const int len = p - int(k);
        auto& state = states[std::size_t(k)];
        auto& rng = rngs[std::size_t(k)];
        for (long long j = 0; j < b; ++j) {
          for (long long t = 0; t < config.row.thin; ++t)
            chain_step(state, target, config.row, rng);
          std::copy(state.current.coords.begin(), state.current.coords.end(),
                    buffers[std::size_t(k)].begin() + j * len);
        }
      });
      for (long long j = 0; j < b; ++j)
        detail::emit_factor_rows(buffers, j, p, emitted + j, sink);
      emitted += b;
    }
    return;
  }

  // restart_per_matrix: replica index = matrix index
  long long emitted = 0;
  while (emitted < n_total) {
    const long long b = std::min(block, n_total - emitted);
    parallel_for(n_rows, config.threads, [&](long long k) {
      const RowTarget target(p, int(k) + 1);
      const int len = p - int(k);
      for (long long j = 0; j < b; ++j) {
        Rng rng = Rng::substream(config.row.seed, std::uint64_t(k + 1),
                                 std::uint64_t(emitted + j + 1));
        RowChainState state = chain_init(target, rng);
        for (long long t = 0; t < config.row.burn_in + 1; ++t)
          chain_step(state, target, config.row, rng);
        std::copy(state.current.coords.begin(), state.current.coords.end(),
                  buffers[std::size_t(k)].begin() + j * len);
      }
    });
    for (long long j = 0; j < b; ++j)
      detail::emit_factor_rows(buffers, j, p, emitted + j, sink);
    emitted += b;
  }
}

// One exact draw from the uniform distribution on correlation matrices,
// assembled row-wise from the direct hemisphere sampler. Serves as the
// verification reference and as the onion-style baseline.
inline CorrelationMatrix exact_elliptope_sample(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("exact_elliptope_sample: dim must be >= 1");
  UpperCholeskyFactor factor(dim);
  for (int k = 0; k < dim - 1; ++k) {
    const HemisphereVector v = exact_row_sample(RowTarget(dim, k + 1), rng);
    auto row = factor.row(k);
    std::copy(v.coords.begin(), v.coords.end(), row.begin());
  }
  return build_correlation(factor);
}

// i.i.d. stream of exact uniform draws.
template <typename Sink>
void sample_matrices_oracle(int dim, long long count, Rng& rng, Sink&& sink) {
  if (count < 1) throw std::invalid_argument("sample_matrices_oracle: count must be >= 1");
  for (long long n = 0; n < count; ++n) sink(exact_elliptope_sample(dim, rng));
}

}  // namespace elliptope
