// Command-line front end: generate matrices, run the timing benchmark,
// sweep acceptance-ratio diagnostics, and run the statistical verification
// gates. CSV schemas emitted here are stable interfaces.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elliptope/elliptope.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Relative output paths go below ELLIPTOPE_OUT_DIR when it is set.
std::string resolve_out_path(const std::string& path) {
  if (path == "-" || path.empty()) return path;
  if (std::filesystem::path(path).is_absolute()) return path;
  const char* dir = std::getenv("ELLIPTOPE_OUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / path).string();
}

struct GenerateOptions {
  std::string method = "chol";
  int dim = 0;
  long long count = 1;
  double sigma_eps = 0.01;
  long long burn_in = 1000;
  long long thin = 1;
  std::uint64_t seed = 0;
  std::string mode = "chain-reuse";
  int threads = 0;
  std::string output = "-";
  std::string format = "csv";
};

template <typename Sink>
void run_method(const GenerateOptions& opt, Sink&& sink) {
  if (opt.method == "chol") {
    elliptope::MatrixSamplerConfig config;
    config.dim = opt.dim;
    config.count = opt.count;
    config.row.sigma_eps = opt.sigma_eps;
    config.row.burn_in = opt.burn_in;
    config.row.thin = opt.thin;
    config.row.seed = opt.seed;
    config.threads = opt.threads;
    config.mode = opt.mode == "restart" ? elliptope::SamplerMode::restart_per_matrix
                                        : elliptope::SamplerMode::chain_reuse;
    elliptope::sample_matrices(config, sink);
    return;
  }
  elliptope::BaselineMethod method;
  if (opt.method == "vine") {
    method = elliptope::BaselineMethod::vine;
  } else if (opt.method == "onion") {
    method = elliptope::BaselineMethod::onion;
  } else {
    method = elliptope::BaselineMethod::polar;
  }
  elliptope::Rng rng(opt.seed);
  for (long long n = 0; n < opt.count; ++n) {
    elliptope::CorrelationMatrix m = elliptope::baseline_sample(method, opt.dim, rng);
    if (n % 100 == 0) m.validate();  // same 1% sampling as the chain path
    sink(m);
  }
}

int run_generate(const GenerateOptions& opt) {
  const std::string path = resolve_out_path(opt.output);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (path != "-") {
    file.open(path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open output file '" << path << "'\n";
      return 1;
    }
    out = &file;
  }

  const auto start = Clock::now();
  if (opt.format == "corm1") {
    elliptope::Corm1Writer writer(*out, opt.dim, std::uint64_t(opt.count));
    run_method(opt, [&](const elliptope::CorrelationMatrix& m) { writer.write(m); });
  } else {
    elliptope::CsvMatrixWriter writer(*out);
    run_method(opt, [&](const elliptope::CorrelationMatrix& m) { writer.write(m); });
  }
  out->flush();
  if (!*out) {
    std::cerr << "error: write failed for '" << path << "'\n";
    return 1;
  }
  const double elapsed = seconds_since(start);
  std::fprintf(stderr,
               "generate method=%s p=%d n=%lld seed=%llu seconds=%.6f matrices_per_sec=%.1f\n",
               opt.method.c_str(), opt.dim, opt.count,
               static_cast<unsigned long long>(opt.seed), elapsed,
               elapsed > 0 ? double(opt.count) / elapsed : 0.0);
  return 0;
}

struct BenchOptions {
  std::vector<std::string> methods = {"chol", "vine", "onion", "polar"};
  std::vector<int> dims = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  long long count = 5000;
  int repeats = 1;
  double sigma_eps = 0.01;
  long long burn_in = 1000;
  long long thin = 1;
  std::uint64_t seed = 0;
  std::string mode = "chain-reuse";
  int threads = 1;
  std::string out = "bench.csv";
};

int run_bench(const BenchOptions& opt) {
  const std::string path = resolve_out_path(opt.out);
  std::ofstream csv(path);
  if (!csv) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 1;
  }
  csv << "method,p,n,seconds\n";

  double guard = 0.0;  // keeps generated matrices observable
  std::size_t failures = 0, cells = 0;
  for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
    const std::string& method = opt.methods[mi];
    for (int p : opt.dims) {
      ++cells;
      std::vector<double> times;
      times.reserve(std::size_t(opt.repeats));
      bool failed = false;
      for (int rep = 0; rep < opt.repeats && !failed; ++rep) {
        GenerateOptions gen;
        gen.method = method;
        gen.dim = p;
        gen.count = opt.count;
        gen.sigma_eps = opt.sigma_eps;
        gen.burn_in = opt.burn_in;
        gen.thin = opt.thin;
        gen.mode = opt.mode;
        gen.threads = opt.threads;
        gen.seed = elliptope::detail::mix64(opt.seed ^ (mi * 1000003ULL + std::uint64_t(p)));
        try {
          const auto start = Clock::now();
          run_method(gen, [&](const elliptope::CorrelationMatrix& m) { guard += m(0, 0); });
          times.push_back(seconds_since(start));
        } catch (const std::exception& e) {
          std::cerr << "bench: method " << method << " failed at p=" << p << ": "
                    << e.what() << "\n";
          failed = true;
        }
      }
      if (failed) {
        ++failures;
        csv << method << "," << p << "," << opt.count << ",nan\n";
        continue;
      }
      std::sort(times.begin(), times.end());
      const double median = times[times.size() / 2];
      char line[160];
      std::snprintf(line, sizeof(line), "%s,%d,%lld,%.6f\n", method.c_str(), p, opt.count,
                    median);
      csv << line;
      std::fprintf(stderr, "bench method=%s p=%d n=%lld seed=%llu seconds=%.6f\n",
                   method.c_str(), p, opt.count,
                   static_cast<unsigned long long>(opt.seed), median);
    }
  }
  csv.flush();
  if (!csv) {
    std::cerr << "error: write failed for '" << path << "'\n";
    return 1;
  }
  std::fprintf(stderr, "bench done: %zu cells, %zu failed (guard %.3f)\n", cells, failures,
               guard);
  return failures == cells ? 1 : 0;
}

struct DiagnoseOptions {
  int dim = 100;
  bool paper_scale = false;
  std::vector<int> rows;       // default derived from dim
  std::vector<double> sigmas;  // default 1e-12 plus a log-spaced ladder
  long long steps = 2000;
  long long burn_in = 1000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "acceptance.csv";
};

int run_diagnose(DiagnoseOptions opt) {
  if (opt.paper_scale) opt.dim = 1000;
  const int p = opt.dim;
  if (opt.rows.empty()) {
    opt.rows = {1, p / 4, p / 2, 3 * p / 4, p - 1};
    opt.rows.erase(std::remove_if(opt.rows.begin(), opt.rows.end(),
                                  [&](int r) { return r < 1 || r >= p; }),
                   opt.rows.end());
    std::sort(opt.rows.begin(), opt.rows.end());
    opt.rows.erase(std::unique(opt.rows.begin(), opt.rows.end()), opt.rows.end());
  }
  if (opt.sigmas.empty()) {
    opt.sigmas.push_back(1e-12);
    for (int k = 0; k < 9; ++k) opt.sigmas.push_back(std::pow(10.0, -4.0 + 0.5 * k));
  }

  const auto grid = elliptope::acceptance_sweep(p, opt.rows, opt.sigmas, opt.steps,
                                                opt.burn_in, opt.seed, opt.threads);

  const std::string path = resolve_out_path(opt.out);
  std::ofstream csv(path);
  if (!csv) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 1;
  }
  csv << "p,row_index,sigma_eps,sigma_eps_sq,steps,accept_ratio\n";
  char line[200];
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    for (std::size_t s = 0; s < grid.sigmas.size(); ++s) {
      const double sigma = grid.sigmas[s];
      std::snprintf(line, sizeof(line), "%d,%d,%.12g,%.12g,%lld,%.8f\n", p, grid.rows[r],
                    sigma, sigma * sigma, grid.steps_per_cell, grid.at(r, s));
      csv << line;
    }
  }
  csv.flush();
  if (!csv) {
    std::cerr << "error: write failed for '" << path << "'\n";
    return 1;
  }

  bool all_monotone = true;
  for (std::size_t r = 0; r < grid.rows.size(); ++r) {
    const double residual = elliptope::isotonic_nonincreasing_max_residual(grid.row_slice(r));
    const bool ok = residual < 0.05;
    all_monotone = all_monotone && ok;
    std::printf("row %d: monotone-trend %s (isotonic residual %.4f)\n", grid.rows[r],
                ok ? "PASS" : "FAIL", residual);
  }
  std::printf("monotone-trend overall: %s\n", all_monotone ? "PASS" : "FAIL");
  std::fprintf(stderr, "diagnose p=%d rows=%zu sigmas=%zu steps=%lld seed=%llu -> %s\n", p,
               grid.rows.size(), grid.sigmas.size(), grid.steps_per_cell,
               static_cast<unsigned long long>(opt.seed), path.c_str());
  return 0;
}

struct VerifyOptions {
  bool quick = false;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "ks.csv";
  int debug_exponent_bias = 0;
};

struct GateRecord {
  std::string label;
  int dim;
  elliptope::KsResult result;
  bool pass;
};

int run_verify(const VerifyOptions& opt) {
  using namespace elliptope;
  const double level = 0.001;
  std::vector<GateRecord> records;
  std::vector<std::string> failed_gates;

  auto note = [&](const std::string& gate, const std::string& label, int dim,
                  const KsResult& res) {
    const bool pass = res.p_value >= level;
    records.push_back({label, dim, res, pass});
    std::printf("[%s] gate %s: %s (p=%d, D=%.4f, p-value=%.5f)\n", pass ? "PASS" : "FAIL",
                gate.c_str(), label.c_str(), dim, res.statistic, res.p_value);
    if (!pass) failed_gates.push_back(gate);
  };

  // gate 1: the dim-3 marginal CDF against the definitionally uniform oracle
  {
    const int n = opt.quick ? 20000 : 100000;
    Rng rng = Rng::substream(opt.seed, 1001);
    BruteForceElliptopeSampler sampler(3);
    std::vector<double> r12;
    r12.reserve(std::size_t(n));
    for (int k = 0; k < n; ++k) r12.push_back(sampler.sample(rng)(0, 1));
    note("marginal-oracle", "brute-vs-marginal", 3,
         ks_one_sample(std::move(r12), [](double r) { return elliptope_marginal_cdf(r, 3); }));
  }

  // gate 2: thinned Metropolis rows against the direct row sampler
  {
    const int n = opt.quick ? 1500 : 5000;
    const std::vector<std::pair<int, int>> cases = {{5, 1}, {5, 3}, {10, 5}};
    for (auto [p, i] : cases) {
      const RowTarget mh_target =
          RowTarget::with_exponent(p, i, i + opt.debug_exponent_bias);
      const RowTarget oracle_target(p, i);
      RowChainConfig config;
      config.sigma_eps = 0.1;
      config.burn_in = 1000;
      config.thin = 100;
      Rng mh_rng = Rng::substream(opt.seed, 2001, std::uint64_t(p * 100 + i));
      Rng oracle_rng = Rng::substream(opt.seed, 2002, std::uint64_t(p * 100 + i));
      std::vector<double> mh, oracle;
      mh.reserve(std::size_t(n));
      oracle.reserve(std::size_t(n));
      for (const auto& v : sample_row(mh_target, config, n, mh_rng))
        mh.push_back(v.coords[0] * v.coords[0]);
      for (int k = 0; k < n; ++k) {
        const auto v = exact_row_sample(oracle_target, oracle_rng);
        oracle.push_back(v.coords[0] * v.coords[0]);
      }
      note("row-oracle", "mh-vs-oracle-p" + std::to_string(p) + "-i" + std::to_string(i), p,
           ks_two_sample(std::move(mh), std::move(oracle)));
    }
  }

  // gate 3: pairwise agreement of all four samplers on the first correlation
  {
    const int n = opt.quick ? 1500 : 5000;
    for (int p : {3, 5}) {
      std::map<std::string, std::vector<double>> samples;
      {
        MatrixSamplerConfig config;
        config.dim = p;
        config.count = n;
        config.row.sigma_eps = 0.1;
        config.row.burn_in = 1000;
        config.row.thin = 100;
        config.row.seed = detail::mix64(opt.seed ^ 3001ULL) + std::uint64_t(p);
        config.threads = opt.threads;
        auto& chol = samples["chol"];
        chol.reserve(std::size_t(n));
        sample_matrices(config, [&](const CorrelationMatrix& m) { chol.push_back(m(0, 1)); });
      }
      const std::vector<std::pair<std::string, BaselineMethod>> baselines = {
          {"vine", BaselineMethod::vine},
          {"onion", BaselineMethod::onion},
          {"polar", BaselineMethod::polar}};
      for (const auto& [name, method] : baselines) {
        Rng rng = Rng::substream(opt.seed, 3002, std::uint64_t(std::hash<std::string>{}(name)) ^
                                                     std::uint64_t(p));
        auto& vec = samples[name];
        vec.reserve(std::size_t(n));
        for (int k = 0; k < n; ++k) vec.push_back(baseline_sample(method, p, rng)(0, 1));
      }
      const std::vector<std::string> names = {"chol", "vine", "onion", "polar"};
      for (std::size_t a = 0; a < names.size(); ++a) {
        for (std::size_t b = a + 1; b < names.size(); ++b) {
          note("method-agreement", names[a] + "-vs-" + names[b] + "-p" + std::to_string(p), p,
               ks_two_sample(samples[names[a]], samples[names[b]]));
        }
      }
    }
  }

  const std::string path = resolve_out_path(opt.out);
  std::ofstream csv(path);
  if (!csv) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 1;
  }
  csv << "method,p,statistic,p_value,n\n";
  char line[200];
  for (const auto& rec : records) {
    std::snprintf(line, sizeof(line), "%s,%d,%.8f,%.8g,%.10g\n", rec.label.c_str(), rec.dim,
                  rec.result.statistic, rec.result.p_value, rec.result.n_effective);
    csv << line;
  }
  csv.flush();
  if (!csv) {
    std::cerr << "error: write failed for '" << path << "'\n";
    return 1;
  }

  if (!failed_gates.empty()) {
    std::sort(failed_gates.begin(), failed_gates.end());
    failed_gates.erase(std::unique(failed_gates.begin(), failed_gates.end()),
                       failed_gates.end());
    std::string joined;
    for (const auto& g : failed_gates) joined += (joined.empty() ? "" : ", ") + g;
    std::printf("verify FAILED: gate(s) %s\n", joined.c_str());
    return 1;
  }
  std::printf("verify OK: all gates passed (seed=%llu)\n",
              static_cast<unsigned long long>(opt.seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform sampling of correlation matrices: Metropolis-Hastings on the "
               "upper Cholesky factor, baselines, diagnostics, and verification"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Sample matrices to CSV or CORM1");
  generate->add_option("--method", gen.method, "Sampler: chol|vine|onion|polar")
      ->check(CLI::IsMember({"chol", "vine", "onion", "polar"}));
  generate->add_option("--dim", gen.dim, "Matrix dimension p")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--count", gen.count, "Number of matrices")->check(CLI::PositiveNumber);
  generate->add_option("--sigma-eps", gen.sigma_eps, "Perturbation deviation (chol)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--burn-in", gen.burn_in, "Burn-in steps (chol)")
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--thin", gen.thin, "Thinning interval (chol)")
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--mode", gen.mode, "chol chain handling")
      ->check(CLI::IsMember({"chain-reuse", "restart"}));
  generate->add_option("--threads", gen.threads, "Worker threads (0 = hardware)");
  generate->add_option("--output,-o", gen.output, "Output path ('-' = stdout)");
  generate->add_option("--format", gen.format, "csv|corm1")
      ->check(CLI::IsMember({"csv", "corm1"}));

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time all methods over a dimension grid");
  bench_cmd->add_option("--methods", bench.methods, "Methods to time")->delimiter(',');
  bench_cmd->add_option("--dims", bench.dims, "Dimensions to time")->delimiter(',');
  bench_cmd->add_option("--count", bench.count, "Matrices per cell")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repeats", bench.repeats, "Repeats per cell (median reported)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--sigma-eps", bench.sigma_eps, "Perturbation deviation (chol)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--burn-in", bench.burn_in, "Burn-in steps (chol)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--thin", bench.thin, "Thinning interval (chol)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--mode", bench.mode, "chol chain handling")
      ->check(CLI::IsMember({"chain-reuse", "restart"}));
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (default 1: single-core cost)");
  bench_cmd->add_option("--out", bench.out, "Output CSV path");

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand("diagnose", "Acceptance-ratio sweep over (row, sigma)");
  diagnose->add_option("--dim", diag.dim, "Matrix dimension p")->check(CLI::PositiveNumber);
  diagnose->add_flag("--paper-scale", diag.paper_scale, "Use p = 1000");
  diagnose->add_option("--rows", diag.rows, "Row indices (default: 1,p/4,p/2,3p/4,p-1)")
      ->delimiter(',');
  diagnose->add_option("--sigmas", diag.sigmas,
                       "Sigma values (default: 1e-12 plus 1e-4..1 log ladder)")
      ->delimiter(',');
  diagnose->add_option("--steps", diag.steps, "Post-burn-in steps per cell")
      ->check(CLI::PositiveNumber);
  diagnose->add_option("--burn-in", diag.burn_in, "Burn-in steps per cell")
      ->check(CLI::NonNegativeNumber);
  diagnose->add_option("--seed", diag.seed, "RNG seed");
  diagnose->add_option("--threads", diag.threads, "Worker threads (0 = hardware)");
  diagnose->add_option("--out", diag.out, "Output CSV path");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the statistical verification gates");
  verify_cmd->add_flag("--quick", verify.quick, "Reduced-sample smoke run");
  verify_cmd->add_option("--seed", verify.seed, "RNG seed");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads (0 = hardware)");
  verify_cmd->add_option("--out", verify.out, "Output CSV path");
  verify_cmd->add_option("--debug-exponent-bias", verify.debug_exponent_bias,
                         "Fault injection: bias the Metropolis exponent")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (diagnose->parsed()) return run_diagnose(diag);
    if (verify_cmd->parsed()) return run_verify(verify);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
