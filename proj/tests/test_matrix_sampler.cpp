#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "elliptope/matrix_sampler.hpp"
#include "elliptope/stats.hpp"

using elliptope::CorrelationMatrix;
using elliptope::elliptope_marginal_cdf;
using elliptope::exact_elliptope_sample;
using elliptope::ks_one_sample;
using elliptope::ks_two_sample;
using elliptope::MatrixSamplerConfig;
using elliptope::Rng;
using elliptope::sample_matrices;
using elliptope::sample_matrices_oracle;
using elliptope::SamplerMode;

namespace {

std::vector<CorrelationMatrix> collect(const MatrixSamplerConfig& config) {
  std::vector<CorrelationMatrix> out;
  out.reserve(std::size_t(config.count));
  sample_matrices(config, [&](const CorrelationMatrix& m) { out.push_back(m); });
  return out;
}

}  // namespace

TEST_CASE("dimension one always yields the unit matrix") {
  MatrixSamplerConfig config;
  config.dim = 1;
  config.count = 5;
  const auto ms = collect(config);
  REQUIRE(ms.size() == 5);
  for (const auto& m : ms) {
    REQUIRE(m.dim() == 1);
    REQUIRE(m(0, 0) == 1.0);
  }
}

TEST_CASE("output is bit-identical across thread counts and runs") {
  MatrixSamplerConfig config;
  config.dim = 6;
  config.count = 60;
  config.row.seed = 99;
  config.row.burn_in = 200;
  for (auto mode : {SamplerMode::chain_reuse, SamplerMode::restart_per_matrix}) {
    config.mode = mode;
    config.threads = 1;
    const auto a = collect(config);
    config.threads = 4;
    const auto b = collect(config);
    config.threads = 3;
    const auto c = collect(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      REQUIRE(a[k].entries() == b[k].entries());
      REQUIRE(a[k].entries() == c[k].entries());
    }
  }
}

TEST_CASE("different seeds give different streams") {
  MatrixSamplerConfig config;
  config.dim = 4;
  config.count = 3;
  config.row.burn_in = 100;
  config.row.seed = 1;
  const auto a = collect(config);
  config.row.seed = 2;
  const auto b = collect(config);
  REQUIRE(a[0].entries() != b[0].entries());
}

TEST_CASE("every emitted matrix satisfies the type invariants") {
  MatrixSamplerConfig config;
  config.dim = 8;
  config.count = 200;
  config.row.burn_in = 300;
  config.row.seed = 7;
  const auto ms = collect(config);
  for (const auto& m : ms) m.validate();
}

TEST_CASE("restart mode at dimension two matches the uniform marginal", "[heavy]") {
  MatrixSamplerConfig config;
  config.dim = 2;
  config.count = 10000;
  config.mode = SamplerMode::restart_per_matrix;
  config.row.sigma_eps = 0.1;
  config.row.burn_in = 1000;
  config.row.seed = 11;
  std::vector<double> r;
  r.reserve(std::size_t(config.count));
  sample_matrices(config, [&](const CorrelationMatrix& m) { r.push_back(m(0, 1)); });
  const auto res = ks_one_sample(r, [](double x) { return 0.5 * (x + 1.0); });
  INFO("D = " << res.statistic << " p = " << res.p_value);
  REQUIRE(res.p_value >= 0.001);
}

TEST_CASE("oracle sampler matches the analytic marginal at dimension three", "[heavy]") {
  Rng rng(501);
  std::vector<double> r;
  r.reserve(20000);
  sample_matrices_oracle(3, 20000, rng,
                         [&](const CorrelationMatrix& m) { r.push_back(m(0, 1)); });
  const auto res =
      ks_one_sample(r, [](double x) { return elliptope_marginal_cdf(x, 3); });
  REQUIRE(res.p_value >= 0.001);
}

TEST_CASE("oracle sampler emits valid matrices at several dimensions") {
  Rng rng(502);
  for (int dim : {1, 2, 5, 12}) {
    sample_matrices_oracle(dim, 20, rng, [](const CorrelationMatrix& m) { m.validate(); });
  }
}

TEST_CASE("off-diagonal marginals are exchangeable", "[heavy]") {
  Rng rng(503);
  std::vector<double> first, last;
  first.reserve(5000);
  last.reserve(5000);
  sample_matrices_oracle(5, 5000, rng, [&](const CorrelationMatrix& m) {
    first.push_back(m(0, 1));
    last.push_back(m(3, 4));
  });
  const auto res = ks_two_sample(first, last);
  REQUIRE(res.p_value >= 0.001);
}

TEST_CASE("config validation") {
  MatrixSamplerConfig config;
  config.dim = 0;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.dim = 2;
  config.count = 0;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
  config.count = 1;
  config.row.sigma_eps = -1.0;
  REQUIRE_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("chain-reuse and restart modes draw from the same distribution", "[heavy]") {
  MatrixSamplerConfig reuse;
  reuse.dim = 4;
  reuse.count = 3000;
  reuse.row.sigma_eps = 0.1;
  reuse.row.thin = 100;
  reuse.row.seed = 21;
  std::vector<double> a, b;
  a.reserve(3000);
  b.reserve(3000);
  sample_matrices(reuse, [&](const CorrelationMatrix& m) { a.push_back(m(0, 1)); });

  MatrixSamplerConfig restart = reuse;
  restart.mode = SamplerMode::restart_per_matrix;
  restart.row.thin = 1;
  restart.row.seed = 22;
  sample_matrices(restart, [&](const CorrelationMatrix& m) { b.push_back(m(0, 1)); });
  const auto res = ks_two_sample(a, b);
  REQUIRE(res.p_value >= 0.001);
}
