#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "elliptope/parallel.hpp"
#include "elliptope/row_chain.hpp"
#include "elliptope/stats.hpp"

namespace elliptope {

// Acceptance-ratio surface over (row index, sigma_eps) cells.
struct DiagnosticsGrid {
  int dim = 0;
  std::vector<int> rows;
  std::vector<double> sigmas;
  std::vector<double> acceptance;  // rows-major: [r * sigmas.size() + s]
  long long steps_per_cell = 0;
  long long burn_in = 0;

  double at(std::size_t row_pos, std::size_t sigma_pos) const {
    return acceptance[row_pos * sigmas.size() + sigma_pos];
  }

  // Acceptance ratios for one row across all sigmas, in grid order.
  std::vector<double> row_slice(std::size_t row_pos) const {
    return {acceptance.begin() + long(row_pos * sigmas.size()),
            acceptance.begin() + long((row_pos + 1) * sigmas.size())};
  }
};

// One independent chain per (row, sigma) cell, each on a private RNG
// substream; only post-burn-in steps count toward the ratio.
inline DiagnosticsGrid acceptance_sweep(int dim, std::vector<int> rows,
                                        std::vector<double> sigmas, long long steps,
                                        long long burn_in, std::uint64_t seed,
                                        int threads = 0) {
  if (dim < 2) throw std::invalid_argument("acceptance_sweep: dim must be >= 2");
  if (steps < 1000) throw std::invalid_argument("acceptance_sweep: steps must be >= 1000");
  if (burn_in < 0) throw std::invalid_argument("acceptance_sweep: burn_in must be >= 0");
  for (int r : rows)
    if (r < 1 || r >= dim)
      throw std::invalid_argument("acceptance_sweep: rows must lie in [1, dim-1]");
  for (double s : sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("acceptance_sweep: sigmas must be > 0");

  DiagnosticsGrid grid;
  grid.dim = dim;
  grid.rows = std::move(rows);
  grid.sigmas = std::move(sigmas);
  grid.steps_per_cell = steps;
  grid.burn_in = burn_in;
  grid.acceptance.assign(grid.rows.size() * grid.sigmas.size(), 0.0);

  const long long cells =
      static_cast<long long>(grid.rows.size()) * static_cast<long long>(grid.sigmas.size());
  parallel_for(cells, threads, [&](long long cell) {
    const std::size_t r = std::size_t(cell) / grid.sigmas.size();
    const std::size_t s = std::size_t(cell) % grid.sigmas.size();
    const RowTarget target(dim, grid.rows[r]);
    RowChainConfig config;
    config.sigma_eps = grid.sigmas[s];
    Rng rng = Rng::substream(seed, std::uint64_t(grid.rows[r]), std::uint64_t(s) + 1);
    RowChainState state = chain_init(target, rng);
    for (long long t = 0; t < burn_in; ++t) chain_step(state, target, config, rng);
    const std::uint64_t accepts_before = state.accepts;
    for (long long t = 0; t < steps; ++t) chain_step(state, target, config, rng);
    grid.acceptance[cell] = double(state.accepts - accepts_before) / double(steps);
  });
  return grid;
}

}  // namespace elliptope
