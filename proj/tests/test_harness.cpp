#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "smd/harness.hpp"

using namespace smd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Strip the wall-time column (the only nondeterministic field).
std::string normalize_csv(const std::string& body) {
  std::string out;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    const auto last = line.rfind(',');
    out += line.substr(0, last);
    out += '\n';
  }
  return out;
}

std::vector<std::string> sorted_normalized_rows(const std::vector<ResultRow>& rows) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    ResultRow copy = r;
    copy.wall_ms = 0.0;
    out.push_back(to_csv_row(copy));
  }
  std::sort(out.begin(), out.end());
  return out;
}

SweepConfig tiny_config() {
  SweepConfig cfg;
  cfg.experiment = "unit";
  cfg.algos = {Algo::smd, Algo::sgd};
  cfg.kappas = {0.5};
  cfg.qs = {1.5};
  cfg.ds = {3};
  cfg.horizons = {16, 32};
  cfg.trials = 3;
  cfg.root_seed = 12345;
  cfg.radius = 1.0;
  cfg.noise_beta = 1.7;
  cfg.noise_scale = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("resolve_map follows the q/kappa/d rule") {
  CHECK(resolve_map(Exponent(1.0), 0.5, 4).p() == doctest::Approx(1.5));
  CHECK(resolve_map(Exponent(3.0), 0.5, 3).p() ==
        doctest::Approx(1.0 + std::log(3.0)));
  CHECK(resolve_map(Exponent(2.0), 0.5, 100).p() == doctest::Approx(2.0));
  CHECK(resolve_map(Exponent::infinity(), 0.5, 50).p() ==
        doctest::Approx(1.0 + std::log(50.0)));

  // totality and the p >= 1 + kappa clamp (q = inf, tiny d)
  SeededRng rng(601);
  for (int rep = 0; rep < 500; ++rep) {
    const double kappa = rng.uniform(0.1, 1.0);
    const int d = 1 + rng.uniform_int(64);
    const double qv = 1.0 + rng.uniform(0.0, 9.0);
    const Exponent q = rng.bernoulli(0.1) ? Exponent::infinity() : Exponent(qv);
    const MirrorMap m = resolve_map(q, kappa, d);
    CHECK(m.p() >= 1.0 + kappa - 1e-15);
  }
  CHECK(resolve_map(Exponent::infinity(), 1.0, 2).p() == doctest::Approx(2.0));
}

TEST_CASE("fit_rate on synthetic rows") {
  std::vector<ResultRow> rows;
  for (const long T : {100L, 1000L, 10000L, 100000L}) {
    for (int trial = 0; trial < 3; ++trial) {
      ResultRow r;
      r.horizon = T;
      r.d = 7;
      r.final_error = 2.5 * std::pow(static_cast<double>(T), -1.0 / 3.0);
      rows.push_back(r);
    }
  }
  const RateFit fit = fit_rate(rows, FitAxis::horizon);
  CHECK(fit.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(2.5)).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(fit.points == 4);

  // constant error: slope 0
  for (auto& r : rows) r.final_error = 0.7;
  CHECK(fit_rate(rows, FitAxis::horizon).slope == doctest::Approx(0.0));

  // non-positive means rejected
  rows[0].final_error = -10.0;
  rows[1].final_error = 0.0;
  rows[2].final_error = 0.0;
  CHECK_THROWS_AS(fit_rate(rows, FitAxis::horizon), std::invalid_argument);

  // too few distinct x values
  std::vector<ResultRow> few(rows.begin(), rows.begin() + 9);
  CHECK_THROWS_AS(fit_rate(few, FitAxis::horizon), std::invalid_argument);
}

TEST_CASE("config file parsing and overrides") {
  const fs::path dir = fs::temp_directory_path() / "htsmd_cfg_test";
  fs::create_directories(dir);
  const fs::path cfg_path = dir / "sweep.cfg";
  {
    std::ofstream out(cfg_path);
    out << "# comment line\n"
        << "experiment = demo\n"
        << "algos = smd, clipped_sgd\n"
        << "kappas = 0.3,0.5\n"
        << "qs = 1.5, inf\n"
        << "ds = 2,4\n"
        << "Ts = 10,100   # trailing comment\n"
        << "trials = 5\n"
        << "seed = 99\n"
        << "radius = 2.5\n"
        << "noise_mode = fixed\n";
  }
  SweepConfig cfg = parse_config_file(cfg_path.string());
  CHECK(cfg.experiment == "demo");
  REQUIRE(cfg.algos.size() == 2);
  CHECK(cfg.algos[1] == Algo::clipped_sgd);
  CHECK(cfg.kappas == std::vector<double>{0.3, 0.5});
  REQUIRE(cfg.qs.size() == 2);
  CHECK(std::isinf(cfg.qs[1]));
  CHECK(cfg.ds == std::vector<int>{2, 4});
  CHECK(cfg.horizons == std::vector<long>{10, 100});
  CHECK(cfg.trials == 5);
  CHECK(cfg.root_seed == 99);
  CHECK(cfg.radius == 2.5);
  CHECK_FALSE(cfg.noise_normalized);

  apply_override(cfg, "trials=7");
  apply_override(cfg, "eta=0.125");
  CHECK(cfg.trials == 7);
  CHECK(cfg.eta == "0.125");
  CHECK_THROWS_AS(apply_override(cfg, "nonsense=1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(cfg, "no_equals"), std::invalid_argument);

  // canonical echo re-parses to the same grids
  const fs::path echo_path = dir / "echo.cfg";
  {
    std::ofstream out(echo_path);
    out << write_config(cfg);
  }
  const SweepConfig back = parse_config_file(echo_path.string());
  CHECK(back.trials == cfg.trials);
  CHECK(back.kappas == cfg.kappas);
  CHECK(back.eta == cfg.eta);
  fs::remove_all(dir);
}

TEST_CASE("csv round trip with quoting") {
  ResultRow r;
  r.run_id = "0123456789abcdef";
  r.experiment = "name, with \"quotes\"";
  r.algo = "smd";
  r.kappa = 0.5;
  r.q = std::numeric_limits<double>::infinity();
  r.p = 2.0986122886681098;
  r.d = 3;
  r.horizon = 1000;
  r.radius = 1.0;
  r.sigma = 17.25;
  r.eta = 1.25e-4;
  r.seed = 42;
  r.trial = 7;
  r.final_error = 0.03125;
  r.checkpoints = "1:0.5;2:0.25;4:0.125";
  r.wall_ms = 12.5;

  const fs::path dir = fs::temp_directory_path() / "htsmd_csv_test";
  fs::create_directories(dir);
  const fs::path p = dir / "rows.csv";
  {
    std::ofstream out(p);
    out << kResultHeader << "\n" << to_csv_row(r) << "\n";
  }
  const auto rows = read_result_csv(p.string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].experiment == r.experiment);
  CHECK(std::isinf(rows[0].q));
  CHECK(rows[0].p == r.p);
  CHECK(rows[0].eta == r.eta);
  CHECK(rows[0].checkpoints == r.checkpoints);
  fs::remove_all(dir);
}

TEST_CASE("one-cell sweep emits exactly one row") {
  SweepConfig cfg = tiny_config();
  cfg.algos = {Algo::smd};
  cfg.horizons = {1};
  cfg.trials = 1;
  const auto rows = run_sweep_in_memory(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].horizon == 1);
  CHECK(rows[0].algo == "smd");
  CHECK(rows[0].p == doctest::Approx(1.5));  // q = 1.5 <= 1 + kappa
  CHECK(std::isfinite(rows[0].final_error));
  CHECK(rows[0].final_error >= -1e-9);
  CHECK(rows[0].checkpoints.rfind("1:", 0) == 0);
  CHECK(rows[0].checkpoints.find(';') == std::string::npos);  // single checkpoint
}

TEST_CASE("sweep determinism and manifest") {
  const fs::path dir_a = fs::temp_directory_path() / "htsmd_sweep_a";
  const fs::path dir_b = fs::temp_directory_path() / "htsmd_sweep_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  SweepConfig cfg = tiny_config();
  cfg.out_dir = dir_a.string();
  const auto rows_a = run_sweep(cfg);
  cfg.out_dir = dir_b.string();
  const auto rows_b = run_sweep(cfg);

  CHECK(rows_a.size() == 2 * 2 * 3);  // algos x Ts x trials
  CHECK(normalize_csv(slurp(dir_a / "results.csv")) ==
        normalize_csv(slurp(dir_b / "results.csv")));

  const std::string manifest = slurp(dir_a / "manifest.txt");
  CHECK(manifest.find("rows = 12") != std::string::npos);
  CHECK(manifest.find("seed = 12345") != std::string::npos);
  CHECK(manifest.find(kCodeVersion) != std::string::npos);
  CHECK(manifest.find(std::string("columns = ") + kResultHeader) != std::string::npos);

  // the results file parses back to the same rows
  const auto parsed = read_result_csv((dir_a / "results.csv").string());
  CHECK(sorted_normalized_rows(parsed) == sorted_normalized_rows(rows_a));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("parallel and serial sweeps agree after sorting") {
  SweepConfig cfg = tiny_config();
  cfg.trials = 8;
  cfg.threads = 1;
  const auto serial = run_sweep_in_memory(cfg);
  cfg.threads = 4;
  const auto parallel = run_sweep_in_memory(cfg);
  CHECK(sorted_normalized_rows(serial) == sorted_normalized_rows(parallel));
}

TEST_CASE("failed cells become NaN rows, sweep continues") {
  SweepConfig cfg = tiny_config();
  cfg.eta = "-1";  // parses, then the run rejects it
  const auto rows = run_sweep_in_memory(cfg);
  CHECK(rows.size() == 12);
  for (const auto& r : rows) {
    CHECK(std::isnan(r.final_error));
    CHECK(r.checkpoints.rfind("error:", 0) == 0);
  }
}

TEST_CASE("plot structure and golden bytes") {
  // deterministic fixture: two series with exact power laws
  std::vector<ResultRow> rows;
  for (const char* algo : {"smd", "sgd"}) {
    for (const long T : {100L, 1000L, 10000L, 100000L}) {
      ResultRow r;
      r.algo = algo;
      r.kappa = 0.5;
      r.horizon = T;
      r.d = 10;
      r.final_error = (algo[0] == 's' && algo[1] == 'm' ? 2.0 : 5.0) *
                      std::pow(static_cast<double>(T), algo[1] == 'm' ? -1.0 / 3 : -0.2);
      rows.push_back(r);
    }
  }
  const fs::path dir = fs::temp_directory_path() / "htsmd_plot_test";
  fs::create_directories(dir);
  const fs::path svg = dir / "plot.svg";
  emit_plot(rows, FitAxis::horizon, svg.string());

  const std::string body = slurp(svg);
  CHECK(body.rfind("<?xml", 0) == 0);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  // one polyline per series
  std::size_t count = 0, pos = 0;
  while ((pos = body.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 2);

  // pinned golden bytes
  const fs::path golden = fs::path(TEST_DATA_DIR) / "golden_plot.svg";
  CHECK(body == slurp(golden));

  // empty input: error, no file
  const fs::path none = dir / "none.svg";
  CHECK_THROWS_AS(emit_plot({}, FitAxis::horizon, none.string()),
                  std::invalid_argument);
  CHECK_FALSE(fs::exists(none));
  fs::remove_all(dir);
}
