// mvce: command-line front end for sampled minimum-volume-ellipsoid runs.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 bound violation.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvce/bench.hpp"
#include "mvce/datagen.hpp"
#include "mvce/error.hpp"
#include "mvce/leverage.hpp"
#include "mvce/sampling.hpp"
#include "mvce/solver.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBounds = 3;

mvce::MatrixFormat pick_format(const std::string& flag, const std::string& path) {
  if (flag == "csv") return mvce::MatrixFormat::csv;
  if (flag == "bin") return mvce::MatrixFormat::bin;
  return mvce::format_from_path(path);
}

mvce::DatasetSpec spec_from_flags(const std::string& family, std::size_t n, std::size_t d,
                                  std::uint64_t seed, const std::vector<std::string>& params) {
  std::string text = family + " n=" + std::to_string(n) + " d=" + std::to_string(d) +
                     " seed=" + std::to_string(seed);
  for (const auto& p : params) text += " " + p;
  return mvce::parse_dataset_spec(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum volume covering ellipsoids via leverage-score coresets"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  std::string gen_family = "gaussian";
  std::size_t gen_n = 1000;
  std::size_t gen_d = 10;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> gen_params;
  std::string gen_out;
  std::string gen_format = "auto";
  gen->add_option("--family", gen_family, "rotated-cauchy | lognormal | gaussian | power-law-leverage");
  gen->add_option("--n", gen_n, "rows")->required();
  gen->add_option("--d", gen_d, "columns")->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--param", gen_params, "family parameter k=v (sigma, eta)");
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--format", gen_format, "csv | bin | auto (by extension)");

  // lev
  auto* lev = app.add_subcommand("lev", "Compute leverage scores");
  std::string lev_in;
  bool lev_header = false;
  std::string lev_mode = "exact";
  double lev_alpha = 0.25;
  std::uint64_t lev_seed = 0;
  std::string lev_out;
  lev->add_option("--in", lev_in)->required();
  lev->add_flag("--header", lev_header, "CSV input has a header line");
  lev->add_option("--mode", lev_mode)->check(CLI::IsMember({"exact", "approx"}));
  lev->add_option("--alpha", lev_alpha);
  lev->add_option("--seed", lev_seed);
  lev->add_option("--out", lev_out)->required();

  // sample
  auto* sample = app.add_subcommand("sample", "Select a row subset");
  std::string sample_in;
  bool sample_header = false;
  std::string sample_method = "det";
  std::optional<double> sample_eps;
  std::optional<double> sample_frac;
  std::uint64_t sample_seed = 0;
  double sample_alpha = 0.25;
  std::string sample_out;
  sample->add_option("--in", sample_in)->required();
  sample->add_flag("--header", sample_header);
  sample->add_option("--method", sample_method)
      ->check(CLI::IsMember({"det", "det-approx", "uniform", "prop"}));
  sample->add_option("--epsilon", sample_eps);
  sample->add_option("--s-frac", sample_frac);
  sample->add_option("--seed", sample_seed);
  sample->add_option("--alpha", sample_alpha);
  sample->add_option("--out", sample_out)->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the D-optimal design / MVCE problem");
  std::string solve_in;
  bool solve_header = false;
  double solve_delta = 1e-7;
  std::string solve_init = "ky";
  std::string solve_algo = "wa";
  std::string solve_report;
  std::string solve_weights;
  std::size_t solve_max_iter = 10'000'000;
  std::uint64_t solve_seed = 0;
  bool solve_lift = false;
  solve->add_option("--in", solve_in)->required();
  solve->add_flag("--header", solve_header);
  solve->add_option("--delta", solve_delta);
  solve->add_option("--init", solve_init)->check(CLI::IsMember({"ky", "khachiyan"}));
  solve->add_option("--algo", solve_algo)->check(CLI::IsMember({"wa", "fp"}));
  solve->add_option("--report", solve_report, "key=value report file");
  solve->add_option("--weights", solve_weights, "design vector CSV (index,weight)");
  solve->add_option("--max-iter", solve_max_iter);
  solve->add_option("--seed", solve_seed);
  solve->add_flag("--lift", solve_lift, "solve the non-centered problem and report the center");

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "Sample, solve and compare against the full problem");
  mvce::PipelineConfig pcfg;
  std::string pipe_in;
  std::string pipe_family;
  std::size_t pipe_n = 0;
  std::size_t pipe_d = 0;
  std::uint64_t pipe_data_seed = 0;
  std::vector<std::string> pipe_params;
  std::string pipe_method = "det";
  std::string pipe_lev = "exact";
  std::string pipe_out;
  bool pipe_no_full = false;
  pipe->add_option("--in", pipe_in);
  pipe->add_flag("--header", pcfg.input_header);
  pipe->add_option("--family", pipe_family, "generate instead of reading --in");
  pipe->add_option("--n", pipe_n);
  pipe->add_option("--d", pipe_d);
  pipe->add_option("--data-seed", pipe_data_seed);
  pipe->add_option("--param", pipe_params);
  pipe->add_option("--method", pipe_method)
      ->check(CLI::IsMember({"det", "det-approx", "uniform", "prop"}));
  pipe->add_option("--epsilon", pcfg.epsilon);
  pipe->add_option("--s-frac", pcfg.s_fraction);
  pipe->add_option("--delta", pcfg.delta);
  pipe->add_option("--lev", pipe_lev)->check(CLI::IsMember({"exact", "approx"}));
  pipe->add_option("--alpha", pcfg.alpha);
  pipe->add_option("--seed", pcfg.seed);
  pipe->add_option("--out-dir", pipe_out);
  pipe->add_flag("--no-full", pipe_no_full, "skip the full solve (g_full = nan)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment grid");
  std::string sweep_config;
  std::string sweep_out = "sweep.csv";
  std::size_t sweep_threads = 0;
  sweep->add_option("--config", sweep_config)->required();
  sweep->add_option("--out-csv", sweep_out);
  sweep->add_option("--threads", sweep_threads);

  // verify-bounds
  auto* verify = app.add_subcommand("verify-bounds", "Check gap bounds on a sweep CSV");
  std::string verify_csv;
  verify->add_option("--csv", verify_csv)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      const auto spec = spec_from_flags(gen_family, gen_n, gen_d, gen_seed, gen_params);
      mvce::save_matrix(mvce::generate(spec), gen_out, pick_format(gen_format, gen_out));
      std::cout << mvce::describe(spec) << '\n';
    } else if (*lev) {
      const auto x = mvce::load_matrix(lev_in, mvce::format_from_path(lev_in), lev_header);
      const auto profile = lev_mode == "exact" ? mvce::exact_leverage(x)
                                               : mvce::approx_leverage(x, lev_alpha, lev_seed);
      mvce::save_leverage_csv(profile, lev_out);
      std::cout << "sum=" << std::setprecision(17) << profile.sum() << '\n';
    } else if (*sample) {
      const auto x = mvce::load_matrix(sample_in, mvce::format_from_path(sample_in), sample_header);
      const auto method = mvce::parse_sample_method(sample_method);
      const std::size_t n = x.rows();
      const std::size_t d = x.cols();
      auto size = [&] {
        if (!sample_frac) throw mvce::InvalidArgument("--s-frac is required for this method");
        const auto s = static_cast<std::size_t>(std::llround(*sample_frac * static_cast<double>(n)));
        return std::clamp(s, d, n);
      };
      std::optional<mvce::LeverageProfile> profile;
      mvce::SampleSelection sel;
      switch (method) {
        case mvce::SampleMethod::det:
          profile = mvce::exact_leverage(x);
          sel = sample_eps ? mvce::sample_deterministic(*profile, *sample_eps)
                           : mvce::sample_top(*profile, size());
          break;
        case mvce::SampleMethod::det_approx:
          profile = mvce::approx_leverage(x, sample_alpha, sample_seed);
          sel = sample_eps ? mvce::sample_deterministic_approx(*profile, *sample_eps)
                           : mvce::sample_top(*profile, size());
          break;
        case mvce::SampleMethod::uniform:
          sel = mvce::sample_uniform(n, d, size(), sample_seed);
          break;
        case mvce::SampleMethod::proportional:
          profile = mvce::exact_leverage(x);
          sel = mvce::sample_proportional(*profile, size(), sample_seed);
          break;
      }
      mvce::save_selection_csv(sel, profile ? &*profile : nullptr, sample_out);
      std::cout << "s=" << sel.size() << '\n';
    } else if (*solve) {
      const auto x = mvce::load_matrix(solve_in, mvce::format_from_path(solve_in), solve_header);
      const auto z = solve_lift ? mvce::lift_and_center(x) : x;
      const auto u0 = solve_init == "ky" ? mvce::init_kumar_yildirim(z, solve_seed)
                                         : mvce::init_khachiyan(z.rows());
      mvce::SolveOptions opts;
      opts.delta = solve_delta;
      opts.max_iter = solve_max_iter;
      const auto res = solve_algo == "wa" ? mvce::solve_wolfe_atwood(z, u0, opts)
                                          : mvce::solve_fixed_point(z, u0, opts);
      std::ostringstream rep;
      rep << std::setprecision(17) << "n=" << z.rows() << "\nd=" << z.cols()
          << "\ng=" << res.state.g << "\ndelta=" << solve_delta
          << "\nkind=" << mvce::to_string(res.certificate.kind)
          << "\ngap_bound=" << res.certificate.gap_bound
          << "\niterations=" << res.certificate.iterations
          << "\nruntime_ms=" << res.certificate.runtime_ms
          << "\nmax_xi=" << res.certificate.max_xi
          << "\nmin_support_xi=" << res.certificate.min_support_xi << '\n';
      const auto e = solve_lift ? mvce::recover_ellipsoid(x, res.state.u)
                                : mvce::centered_ellipsoid(res.state);
      rep << "volume=" << mvce::volume(e) << "\ncenter=";
      for (Eigen::Index i = 0; i < e.center.size(); ++i) rep << (i ? " " : "") << e.center(i);
      rep << '\n';
      std::cout << rep.str();
      if (!solve_report.empty()) {
        std::ofstream out(solve_report, std::ios::trunc);
        out << rep.str();
      }
      if (!solve_weights.empty()) {
        std::ofstream out(solve_weights, std::ios::trunc);
        out << std::setprecision(17) << "index,weight\n";
        const auto& w = res.state.u.weights();
        for (std::size_t i = 0; i < w.size(); ++i) out << i << ',' << w[i] << '\n';
      }
    } else if (*pipe) {
      if (!pipe_in.empty()) {
        pcfg.input = pipe_in;
      } else if (!pipe_family.empty()) {
        pcfg.dataset = spec_from_flags(pipe_family, pipe_n, pipe_d, pipe_data_seed, pipe_params);
      }
      pcfg.method = mvce::parse_sample_method(pipe_method);
      pcfg.leverage = pipe_lev == "exact" ? mvce::LeverageMode::exact : mvce::LeverageMode::approximate;
      pcfg.compute_full = !pipe_no_full;
      if (!pipe_out.empty()) pcfg.output_dir = pipe_out;
      const auto rec = mvce::run_pipeline(pcfg);
      mvce::write_report(std::cout, rec);
      if (rec.containment_warning) {
        std::cerr << "warning: sampled ellipsoid misses some rows, max violation "
                  << rec.max_violation << '\n';
      }
    } else if (*sweep) {
      auto cfg = mvce::load_sweep_config(sweep_config);
      if (sweep_threads != 0) cfg.threads = sweep_threads;
      const auto records = mvce::run_sweep(cfg, sweep_out);
      std::size_t failed = 0;
      for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
      std::cout << records.size() << " record(s) written to " << sweep_out;
      if (failed) std::cout << ", " << failed << " failed";
      std::cout << '\n';
    } else if (*verify) {
      const auto report = mvce::verify_bounds(mvce::read_bench_csv(verify_csv));
      report.print(std::cout);
      mvce::require_bounds(report);
    }
  } catch (const mvce::BoundViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBounds;
  } catch (const mvce::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mvce::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
