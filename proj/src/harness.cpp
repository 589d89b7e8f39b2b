#include "smd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace smd {

const char* kCodeVersion = "htsmd 0.1.0";

const char* kResultHeader =
    "run_id,experiment,algo,kappa,q,p,d,T,R,sigma,eta,seed,trial,final_error,"
    "checkpoints,wall_ms";

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 record split; handles quoted fields and embedded quotes.
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void SweepConfig::validate() const {
  if (algos.empty() || kappas.empty() || qs.empty() || ds.empty() || horizons.empty())
    throw std::invalid_argument("SweepConfig: all grids must be non-empty");
  if (trials < 1) throw std::invalid_argument("SweepConfig: trials >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("SweepConfig: radius > 0");
  if (threads < 1) throw std::invalid_argument("SweepConfig: threads >= 1");
  for (const double k : kappas)
    if (k < 0.1 || k > 1.0) throw std::invalid_argument("SweepConfig: kappa in [0.1, 1]");
  for (const long t : horizons)
    if (t < 1) throw std::invalid_argument("SweepConfig: T >= 1");
  for (const int d : ds)
    if (d < 1) throw std::invalid_argument("SweepConfig: d >= 1");
  if (eta != "auto") parse_double(eta);
  if (clip != "auto") parse_double(clip);
}

MirrorMap resolve_map(const Exponent& q, double kappa, int d) {
  if (d < 1) throw std::invalid_argument("resolve_map: d >= 1");
  const double lnd = std::log(static_cast<double>(d));
  double p;
  if (q.is_infinite()) {
    p = 1.0 + lnd;
  } else if (q.value() <= 1.0 + kappa) {
    p = 1.0 + kappa;
  } else if (q.value() > lnd) {
    p = std::min(q.value(), 1.0 + lnd);
  } else {
    p = q.value();
  }
  return MirrorMap(std::max(p, 1.0 + kappa), kappa);
}

namespace {

void set_key(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = value;
  } else if (key == "algos") {
    cfg.algos.clear();
    for (const auto& name : split(value, ',')) {
      const auto a = algo_from_name(name);
      if (!a) throw std::invalid_argument("unknown algorithm: '" + name + "'");
      cfg.algos.push_back(*a);
    }
  } else if (key == "kappas") {
    cfg.kappas.clear();
    for (const auto& v : split(value, ',')) cfg.kappas.push_back(parse_double(v));
  } else if (key == "qs") {
    cfg.qs.clear();
    for (const auto& v : split(value, ',')) cfg.qs.push_back(parse_double(v));
  } else if (key == "ds") {
    cfg.ds.clear();
    for (const auto& v : split(value, ','))
      cfg.ds.push_back(static_cast<int>(std::stol(v)));
  } else if (key == "Ts") {
    cfg.horizons.clear();
    for (const auto& v : split(value, ',')) cfg.horizons.push_back(std::stol(v));
  } else if (key == "trials") {
    cfg.trials = std::stol(value);
  } else if (key == "seed") {
    cfg.root_seed = std::stoull(value);
  } else if (key == "radius") {
    cfg.radius = parse_double(value);
  } else if (key == "noise_beta") {
    cfg.noise_beta = parse_double(value);
  } else if (key == "noise_scale") {
    cfg.noise_scale = parse_double(value);
  } else if (key == "noise_mode") {
    if (value == "normalized")
      cfg.noise_normalized = true;
    else if (value == "fixed")
      cfg.noise_normalized = false;
    else
      throw std::invalid_argument("noise_mode must be 'fixed' or 'normalized'");
  } else if (key == "eta") {
    cfg.eta = value;
  } else if (key == "clip") {
    cfg.clip = value;
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(std::stol(value));
  } else {
    throw std::invalid_argument("unknown config key: '" + key + "'");
  }
}

}  // namespace

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_override(SweepConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override must be key=value: '" + assignment + "'");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string write_config(const SweepConfig& cfg) {
  std::ostringstream out;
  out << "experiment = " << cfg.experiment << "\n";
  out << "algos = ";
  for (std::size_t i = 0; i < cfg.algos.size(); ++i)
    out << (i ? "," : "") << algo_name(cfg.algos[i]);
  out << "\nkappas = ";
  for (std::size_t i = 0; i < cfg.kappas.size(); ++i)
    out << (i ? "," : "") << fmt_double(cfg.kappas[i]);
  out << "\nqs = ";
  for (std::size_t i = 0; i < cfg.qs.size(); ++i) out << (i ? "," : "") << fmt_double(cfg.qs[i]);
  out << "\nds = ";
  for (std::size_t i = 0; i < cfg.ds.size(); ++i) out << (i ? "," : "") << cfg.ds[i];
  out << "\nTs = ";
  for (std::size_t i = 0; i < cfg.horizons.size(); ++i)
    out << (i ? "," : "") << cfg.horizons[i];
  out << "\ntrials = " << cfg.trials;
  out << "\nseed = " << cfg.root_seed;
  out << "\nradius = " << fmt_double(cfg.radius);
  out << "\nnoise_beta = " << fmt_double(cfg.noise_beta);
  out << "\nnoise_scale = " << fmt_double(cfg.noise_scale);
  out << "\nnoise_mode = " << (cfg.noise_normalized ? "normalized" : "fixed");
  out << "\neta = " << cfg.eta;
  out << "\nclip = " << cfg.clip;
  out << "\nthreads = " << cfg.threads;
  out << "\n";
  return out.str();
}

std::string to_csv_row(const ResultRow& r) {
  std::ostringstream out;
  out << csv_quote(r.run_id) << ',' << csv_quote(r.experiment) << ','
      << csv_quote(r.algo) << ',' << fmt_double(r.kappa) << ',' << fmt_double(r.q) << ','
      << fmt_double(r.p) << ',' << r.d << ',' << r.horizon << ',' << fmt_double(r.radius)
      << ',' << fmt_double(r.sigma) << ',' << fmt_double(r.eta) << ',' << r.seed << ','
      << r.trial << ',' << fmt_double(r.final_error) << ',' << csv_quote(r.checkpoints)
      << ',' << fmt_double(r.wall_ms);
  return out.str();
}

std::vector<ResultRow> read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty results file: " + path);
  if (trim(line) != kResultHeader)
    throw std::runtime_error("unexpected results header in " + path);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 16) throw std::runtime_error("bad results row: " + line);
    ResultRow r;
    r.run_id = f[0];
    r.experiment = f[1];
    r.algo = f[2];
    r.kappa = parse_double(f[3]);
    r.q = parse_double(f[4]);
    r.p = parse_double(f[5]);
    r.d = static_cast<int>(std::stol(f[6]));
    r.horizon = std::stol(f[7]);
    r.radius = parse_double(f[8]);
    r.sigma = parse_double(f[9]);
    r.eta = parse_double(f[10]);
    r.seed = std::stoull(f[11]);
    r.trial = std::stol(f[12]);
    r.final_error = parse_double(f[13]);
    r.checkpoints = f[14];
    r.wall_ms = parse_double(f[15]);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

struct Cell {
  Algo algo;
  double kappa;
  double q;
  int d;
  long horizon;
  long trial;
};

std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

// Counter-based stream split: the stream id is a hash of the cell
// coordinates alone, so adding grid values never perturbs existing cells.
std::uint64_t cell_stream(const Cell& c, std::uint64_t salt) {
  std::uint64_t h = hash_combine(0x5eedULL, salt);
  h = hash_combine(h, static_cast<std::uint64_t>(c.algo));
  h = hash_combine(h, double_bits(c.kappa));
  h = hash_combine(h, double_bits(c.q));
  h = hash_combine(h, static_cast<std::uint64_t>(c.d));
  h = hash_combine(h, static_cast<std::uint64_t>(c.horizon));
  h = hash_combine(h, static_cast<std::uint64_t>(c.trial));
  return h;
}

Exponent exponent_of(double q) {
  return std::isinf(q) ? Exponent::infinity() : Exponent(q);
}

ResultRow run_cell(const SweepConfig& cfg, const Cell& cell) {
  ResultRow row;
  {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(cell_stream(cell, 0x1d)));
    row.run_id = buf;
  }
  row.experiment = cfg.experiment;
  row.algo = algo_name(cell.algo);
  row.kappa = cell.kappa;
  row.q = cell.q;
  row.d = cell.d;
  row.horizon = cell.horizon;
  row.radius = cfg.radius;
  row.seed = cfg.root_seed;
  row.trial = cell.trial;

  try {
    const Exponent q = exponent_of(cell.q);
    const MirrorMap map = resolve_map(q, cell.kappa, cell.d);
    row.p = cell.algo == Algo::smd ? map.p() : 2.0;

    const double dinvq =
        q.is_infinite() ? 1.0
                        : std::pow(static_cast<double>(cell.d), -1.0 / q.value());
    const NoiseSpec noise(cfg.noise_beta,
                          cfg.noise_scale * (cfg.noise_normalized ? dinvq : 1.0),
                          cell.kappa);

    // The target lives in the box; its coordinates are +/- R/2 with signs
    // from a stream that the run itself never touches.
    SeededRng xstar_rng(cfg.root_seed, cell_stream(cell, 0xA11CE));
    Vec x_star(cell.d);
    for (int i = 0; i < cell.d; ++i)
      x_star[i] = (xstar_rng.next_u64() & 1ULL ? 0.5 : -0.5) * cfg.radius;

    const SyntheticOracle oracle(x_star, 1.0, q, noise);
    row.sigma = oracle.sigma();

    if (cfg.eta == "auto") {
      if (cell.algo == Algo::smd) {
        row.eta = step_size_auto(map.r0(cfg.radius, cell.d), row.sigma, cell.kappa,
                                 cell.horizon);
      } else {
        // Euclidean analogue of the step rule for the baselines.
        const double r0_euclid = cfg.radius * std::sqrt(static_cast<double>(cell.d));
        row.eta = step_size_auto(r0_euclid, row.sigma, cell.kappa, cell.horizon);
      }
    } else {
      row.eta = parse_double(cfg.eta);
    }

    RunConfig rc{cell.algo,
                 map,
                 Box(cfg.radius, cell.d),
                 cell.horizon,
                 row.eta,
                 cfg.root_seed,
                 cell_stream(cell, 0x2),
                 std::nullopt};
    if (cell.algo == Algo::clipped_sgd) {
      rc.clip = cfg.clip == "auto"
                    ? row.sigma * std::pow(static_cast<double>(cell.horizon),
                                           1.0 / (1.0 + cell.kappa))
                    : parse_double(cfg.clip);
    }

    SeededRng rng(cfg.root_seed, cell_stream(cell, 0x2));
    const Trace trace = run(rc, make_oracle(oracle), rng);

    row.final_error = trace.final_error();
    std::ostringstream cps;
    for (std::size_t i = 0; i < trace.checkpoints.size(); ++i) {
      if (i) cps << ';';
      cps << trace.checkpoints[i].first << ':' << fmt_double(trace.checkpoints[i].second);
    }
    row.checkpoints = cps.str();
    row.wall_ms = trace.wall_ms;
  } catch (const std::exception& e) {
    row.final_error = std::numeric_limits<double>::quiet_NaN();
    row.checkpoints = std::string("error: ") + e.what();
  }
  return row;
}

std::vector<ResultRow> execute_cells(const SweepConfig& cfg,
                                     const std::function<void(const ResultRow&)>& sink) {
  cfg.validate();
  std::vector<Cell> cells;
  for (const Algo algo : cfg.algos)
    for (const double kappa : cfg.kappas)
      for (const double q : cfg.qs)
        for (const int d : cfg.ds)
          for (const long horizon : cfg.horizons)
            for (long trial = 0; trial < cfg.trials; ++trial)
              cells.push_back(Cell{algo, kappa, q, d, horizon, trial});

  std::vector<ResultRow> rows(cells.size());
  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      rows[i] = run_cell(cfg, cells[i]);
      if (sink) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        sink(rows[i]);
      }
    }
  };

  if (cfg.threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_sweep_in_memory(const SweepConfig& cfg) {
  return execute_cells(cfg, nullptr);
}

std::vector<ResultRow> run_sweep(const SweepConfig& cfg) {
  std::string dir = cfg.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("HTSMD_OUT_DIR");
    dir = env && *env ? env : ".";
  }
  std::filesystem::create_directories(dir);
  const std::string results_path = dir + "/results.csv";

  std::ofstream out(results_path);
  if (!out) throw std::runtime_error("cannot write " + results_path);
  out << kResultHeader << "\n";
  const auto rows = execute_cells(cfg, [&](const ResultRow& row) {
    out << to_csv_row(row) << "\n";
    out.flush();  // crash keeps completed cells
  });
  out.close();

  std::ofstream manifest(dir + "/manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write manifest in " + dir);
  manifest << "code_version = " << kCodeVersion << "\n"
           << "rows = " << rows.size() << "\n"
           << "results = results.csv\n"
           << "columns = " << kResultHeader << "\n"
           << "# config echo\n"
           << write_config(cfg);
  return rows;
}

RateFit fit_rate(const std::vector<ResultRow>& rows, FitAxis axis) {
  std::map<double, std::pair<double, long>> groups;  // x -> (sum err, count)
  for (const auto& r : rows) {
    const double x = axis == FitAxis::horizon ? static_cast<double>(r.horizon)
                                              : static_cast<double>(r.d);
    auto& g = groups[x];
    g.first += r.final_error;
    g.second += 1;
  }
  if (groups.size() < 4)
    throw std::invalid_argument("fit_rate: need >= 4 distinct x values, have " +
                                std::to_string(groups.size()));

  std::vector<double> lx, ly;
  for (const auto& [x, g] : groups) {
    const double mean = g.first / static_cast<double>(g.second);
    if (!(mean > 0.0))
      throw std::invalid_argument("fit_rate: non-positive mean error at x = " +
                                  fmt_double(x) + " (log undefined)");
    lx.push_back(std::log(x));
    ly.push_back(std::log(mean));
  }

  const auto n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  RateFit fit;
  fit.points = static_cast<int>(lx.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += e * e;
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void emit_plot(const std::vector<ResultRow>& rows, FitAxis axis, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_plot: no rows");
  const double k = rows.front().kappa;
  const double slope = k / (1.0 + k);
  emit_plot(rows, axis, path, axis == FitAxis::horizon ? -slope : slope);
}

void emit_plot(const std::vector<ResultRow>& rows, FitAxis axis, const std::string& path,
               double reference_slope) {
  if (rows.empty()) throw std::invalid_argument("emit_plot: no rows");

  // Per-algorithm series of (x, mean error).
  std::map<std::string, std::map<double, std::pair<double, long>>> series;
  for (const auto& r : rows) {
    const double x = axis == FitAxis::horizon ? static_cast<double>(r.horizon)
                                              : static_cast<double>(r.d);
    auto& g = series[r.algo][x];
    g.first += r.final_error;
    g.second += 1;
  }

  double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
  std::map<std::string, std::vector<std::pair<double, double>>> pts;
  for (const auto& [name, groups] : series) {
    for (const auto& [x, g] : groups) {
      const double mean = g.first / static_cast<double>(g.second);
      if (!(mean > 0.0))
        throw std::invalid_argument("emit_plot: non-positive mean error");
      const double lx = std::log10(x), ly = std::log10(mean);
      pts[name].emplace_back(lx, ly);
      lx_min = std::min(lx_min, lx);
      lx_max = std::max(lx_max, lx);
      ly_min = std::min(ly_min, ly);
      ly_max = std::max(ly_max, ly);
    }
  }
  if (lx_max - lx_min < 1e-9) lx_max = lx_min + 1.0;
  if (ly_max - ly_min < 1e-9) ly_max = ly_min + 1.0;

  const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  const auto X = [&](double lx) {
    return ml + (lx - lx_min) / (lx_max - lx_min) * (w - ml - mr);
  };
  const auto Y = [&](double ly) {
    return h - mb - (ly - ly_min) / (ly_max - ly_min) * (h - mt - mb);
  };

  const RateFit fit = fit_rate(rows, axis);
  static const char* kColors[] = {"#1b6ca8", "#c23b22", "#3a7d44", "#7d3a9b"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
      << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
      << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";

  // Decade ticks.
  for (int e = static_cast<int>(std::floor(lx_min)); e <= std::ceil(lx_max); ++e) {
    if (e < lx_min - 1e-9 || e > lx_max + 1e-9) continue;
    svg << "<line x1=\"" << fmt6(X(e)) << "\" y1=\"" << h - mb << "\" x2=\""
        << fmt6(X(e)) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt6(X(e)) << "\" y=\"" << h - mb + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::floor(ly_min)); e <= std::ceil(ly_max); ++e) {
    if (e < ly_min - 1e-9 || e > ly_max + 1e-9) continue;
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt6(Y(e)) << "\" x2=\"" << ml
        << "\" y2=\"" << fmt6(Y(e)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << fmt6(Y(e) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
      << "\" font-size=\"13\" text-anchor=\"middle\">"
      << (axis == FitAxis::horizon ? "T" : "d") << "</text>\n";

  int color = 0;
  for (const auto& [name, p] : pts) {
    const char* c = kColors[color++ % 4];
    svg << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt6(X(p[i].first)) << ',' << fmt6(Y(p[i].second));
    }
    svg << "\"/>\n";
    for (const auto& [lx, ly] : p)
      svg << "<circle cx=\"" << fmt6(X(lx)) << "\" cy=\"" << fmt6(Y(ly))
          << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    svg << "<text x=\"" << w - mr - 5 << "\" y=\"" << mt + 15 * color
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << c << "\">" << name
        << "</text>\n";
  }

  // Fitted line and the theoretical reference, both in natural-log space.
  const double ln10 = std::log(10.0);
  const auto fit_ly = [&](double lx) {
    return (fit.intercept + fit.slope * lx * ln10) / ln10;
  };
  svg << "<line x1=\"" << fmt6(X(lx_min)) << "\" y1=\"" << fmt6(Y(fit_ly(lx_min)))
      << "\" x2=\"" << fmt6(X(lx_max)) << "\" y2=\"" << fmt6(Y(fit_ly(lx_max)))
      << "\" stroke=\"#444444\" stroke-dasharray=\"6,3\"/>\n"
      << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14
      << "\" font-size=\"12\" fill=\"#444444\">fit slope " << fmt6(fit.slope)
      << "</text>\n";
  const double ref_anchor = fit_ly(lx_min);
  svg << "<line x1=\"" << fmt6(X(lx_min)) << "\" y1=\"" << fmt6(Y(ref_anchor))
      << "\" x2=\"" << fmt6(X(lx_max)) << "\" y2=\""
      << fmt6(Y(ref_anchor + reference_slope * (lx_max - lx_min)))
      << "\" stroke=\"#999999\" stroke-dasharray=\"2,4\"/>\n"
      << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 30
      << "\" font-size=\"12\" fill=\"#999999\">reference slope " << fmt6(reference_slope)
      << "</text>\n";
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_plot: cannot write " + path);
  out << svg.str();
  if (!out) throw std::runtime_error("emit_plot: write failed for " + path);
}

}  // namespace smd
