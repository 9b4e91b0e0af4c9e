#include <catch2/catch.hpp>

#include "elliptope/diagnostics.hpp"
#include "elliptope/stats.hpp"

using elliptope::acceptance_sweep;
using elliptope::DiagnosticsGrid;
using elliptope::isotonic_nonincreasing_max_residual;

TEST_CASE("sweep produces a consistent grid with sane cells", "[heavy]") {
  const DiagnosticsGrid grid =
      acceptance_sweep(10, {1, 5, 9}, {1e-12, 0.05, 0.3, 1.0}, 2000, 500, 42, 2);
  REQUIRE(grid.rows.size() == 3);
  REQUIRE(grid.sigmas.size() == 4);
  REQUIRE(grid.acceptance.size() == 12);
  for (double a : grid.acceptance) {
    REQUIRE(a >= 0.0);
    REQUIRE(a <= 1.0);
  }
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    // degenerate proposals are accepted essentially always
    REQUIRE(grid.at(r, 0) > 0.999);
    // acceptance does not increase with sigma, up to Monte Carlo noise
    REQUIRE(isotonic_nonincreasing_max_residual(grid.row_slice(r)) < 0.05);
  }
}

TEST_CASE("sweep is deterministic and schedule-independent", "[heavy]") {
  const auto a = acceptance_sweep(8, {1, 4}, {0.01, 0.5}, 1500, 200, 5, 1);
  const auto b = acceptance_sweep(8, {1, 4}, {0.01, 0.5}, 1500, 200, 5, 4);
  REQUIRE(a.acceptance == b.acceptance);
}

TEST_CASE("sweep validates its inputs") {
  REQUIRE_THROWS_AS(acceptance_sweep(10, {0}, {0.1}, 2000, 100, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(acceptance_sweep(10, {10}, {0.1}, 2000, 100, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(acceptance_sweep(10, {1}, {0.0}, 2000, 100, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(acceptance_sweep(10, {1}, {0.1}, 500, 100, 0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(acceptance_sweep(1, {1}, {0.1}, 2000, 100, 0),
                    std::invalid_argument);
}
