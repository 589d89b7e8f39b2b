#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "smd/checks.hpp"
#include "smd/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic mirror descent under heavy-tailed gradient noise"};
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "run an experiment grid");
  std::string config_path;
  std::vector<std::string> overrides;
  sweep->add_option("--config", config_path, "key=value config file")->required();
  sweep->add_option("--override", overrides, "config overrides, key=value");

  auto* fit = app.add_subcommand("fit", "least-squares rate exponent from a results CSV");
  std::string fit_input, fit_axis = "T";
  fit->add_option("--input", fit_input, "results CSV")->required();
  fit->add_option("--x", fit_axis, "x axis: T or d")->check(CLI::IsMember({"T", "d"}));

  auto* plot = app.add_subcommand("plot", "log-log SVG plot from a results CSV");
  std::string plot_input, plot_out, plot_axis = "T";
  plot->add_option("--input", plot_input, "results CSV")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("--x", plot_axis, "x axis: T or d")->check(CLI::IsMember({"T", "d"}));

  auto* lb = app.add_subcommand("lowerbound", "hard-instance identification experiments");
  std::string regime = "small";
  int lb_d = 8;
  long lb_T = 256, lb_trials = 400;
  double lb_kappa = 1.0, lb_q = 1.0, lb_L = 1.0, lb_R = 1.0, lb_delta = -1.0;
  std::uint64_t lb_seed = 1;
  std::string lb_out;
  lb->add_option("--regime", regime, "small or large")
      ->check(CLI::IsMember({"small", "large"}));
  lb->add_option("--d", lb_d, "dimension (<= 24)");
  lb->add_option("--T", lb_T, "oracle queries per trial");
  lb->add_option("--trials", lb_trials, "identification trials");
  lb->add_option("--kappa", lb_kappa, "moment parameter in [0.1, 1]");
  lb->add_option("--q", lb_q, "gradient norm exponent (inf allowed as 0)");
  lb->add_option("--L", lb_L, "Lipschitz constant");
  lb->add_option("--R", lb_R, "box radius");
  lb->add_option("--delta", lb_delta, "bias parameter; negative = proof default");
  lb->add_option("--seed", lb_seed, "root seed");
  lb->add_option("--out", lb_out, "output directory (default $HTSMD_OUT_DIR or .)");

  auto* verify = app.add_subcommand("verify", "run the full invariant/acceptance suites");
  std::string verify_filter;
  verify->add_option("--only", verify_filter, "substring filter on check names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      smd::SweepConfig cfg = smd::parse_config_file(config_path);
      for (const auto& o : overrides) smd::apply_override(cfg, o);
      const auto rows = smd::run_sweep(cfg);
      std::cout << "wrote " << rows.size() << " rows\n";
    } else if (*fit) {
      const auto rows = smd::read_result_csv(fit_input);
      const auto axis = fit_axis == "T" ? smd::FitAxis::horizon : smd::FitAxis::dimension;
      const auto f = smd::fit_rate(rows, axis);
      std::printf("slope %.6f  intercept %.6f  r2 %.6f  (%d points)\n", f.slope,
                  f.intercept, f.r2, f.points);
    } else if (*plot) {
      const auto rows = smd::read_result_csv(plot_input);
      const auto axis = plot_axis == "T" ? smd::FitAxis::horizon : smd::FitAxis::dimension;
      smd::emit_plot(rows, axis, plot_out);
      std::cout << "wrote " << plot_out << "\n";
    } else if (*lb) {
      const auto reg =
          regime == "small" ? smd::HardRegime::small_q : smd::HardRegime::large_q;
      const smd::Exponent q = lb_q == 0.0 ? smd::Exponent::infinity() : smd::Exponent(lb_q);
      const double delta = lb_delta > 0.0
                               ? lb_delta
                               : smd::HardFamily::default_delta(reg, lb_d, lb_T, lb_kappa);
      smd::HardFamily family{reg, delta, lb_L, lb_R, lb_kappa, q, lb_T};
      smd::SeededRng packing_rng(lb_seed, 0xACED);
      const smd::Packing packing = smd::greedy_packing(lb_d, packing_rng);
      const smd::MirrorMap map = smd::resolve_map(q, lb_kappa, lb_d);

      std::string dir = lb_out;
      if (dir.empty()) {
        const char* env = std::getenv("HTSMD_OUT_DIR");
        dir = env && *env ? env : ".";
      }
      std::filesystem::create_directories(dir);
      const std::string path = dir + "/lowerbound.csv";
      std::ofstream out(path);
      out << smd::kResultHeader << "\n";

      std::printf("regime %s  d=%d  T=%ld  delta=%.6g  |V|=%d\n", regime.c_str(), lb_d,
                  lb_T, delta, packing.size());
      for (const auto est : {smd::Estimator::smd_nearest, smd::Estimator::mle,
                             smd::Estimator::random_guess}) {
        const auto res =
            smd::identification_game(family, packing, lb_trials, est, map, lb_seed);
        std::printf("%-14s misid %.4f  [%.4f, %.4f]  (%ld trials)\n",
                    smd::estimator_name(est), res.misid_rate, res.ci_lo, res.ci_hi,
                    res.trials);
        smd::ResultRow row;
        row.run_id = std::string("lb_") + smd::estimator_name(est);
        row.experiment = std::string("lowerbound_") + regime;
        row.algo = smd::estimator_name(est);
        row.kappa = lb_kappa;
        row.q = lb_q == 0.0 ? std::numeric_limits<double>::infinity() : lb_q;
        row.p = map.p();
        row.d = lb_d;
        row.horizon = lb_T;
        row.radius = lb_R;
        row.sigma = lb_L;
        row.eta = smd::step_size_auto(map.r0(lb_R, lb_d), lb_L, lb_kappa, lb_T);
        row.seed = lb_seed;
        row.trial = res.trials;
        row.final_error = res.misid_rate;
        row.checkpoints = "";
        row.wall_ms = 0.0;
        out << smd::to_csv_row(row) << "\n";
      }
      std::cout << "wrote " << path << "\n";
    } else if (*verify) {
      const auto results = smd::run_acceptance_checks(verify_filter);
      int failures = 0;
      for (const auto& r : results) {
        std::printf("[%s] %-48s (%6.1fs)  %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.seconds, r.detail.c_str());
        failures += !r.pass;
      }
      std::printf("%zu checks, %d failed\n", results.size(), failures);
      return failures ? 3 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
