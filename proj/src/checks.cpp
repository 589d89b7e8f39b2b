#include "smd/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "smd/harness.hpp"

namespace smd {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

Vec random_vec(SeededRng& rng, int d, double scale) {
  Vec x(d);
  for (int i = 0; i < d; ++i) x[i] = rng.uniform(-scale, scale);
  return x;
}

Vec random_nonzero(SeededRng& rng, int d, double scale) {
  Vec x = random_vec(rng, d, scale);
  while (x.cwiseAbs().maxCoeff() == 0.0) x = random_vec(rng, d, scale);
  return x;
}

struct Tally {
  long violations = 0;
  double worst = 0.0;  // most positive LHS - RHS seen
  long total = 0;

  // inequality lhs <= rhs with slack tol
  void expect_le(double lhs, double rhs, double tol) {
    ++total;
    const double excess = lhs - rhs;
    worst = std::max(worst, excess);
    if (excess > tol) ++violations;
  }
};

const double kKappaGrid[] = {0.3, 0.5, 1.0};
const int kDimGrid[] = {2, 8, 32};

// ---------------------------------------------------------------- check 1
CheckResult check_conjugate_roundtrip() {
  CheckResult res{"01 conjugate round-trip", true, "", 0};
  SeededRng rng(90001);
  double worst = 0.0;
  long count = 0;
  for (const double kappa : kKappaGrid) {
    for (const int d : kDimGrid) {
      const double ps[] = {1.0 + kappa, 2.0, 4.0,
                           std::max(1.0 + std::log(static_cast<double>(d)), 1.0 + kappa)};
      for (const double p : ps) {
        const MirrorMap m(p, kappa);
        for (int rep = 0; rep < 1000; ++rep) {
          const double scale = std::exp(rng.uniform(-3.0, 3.0) * std::log(10.0));
          const Vec x = scale * random_vec(rng, d, 1.0);
          const Vec back = m.grad_star(m.grad(x));
          const double err =
              (back - x).cwiseAbs().maxCoeff() / (1.0 + x.cwiseAbs().maxCoeff());
          worst = std::max(worst, err);
          ++count;
          if (err > 1e-6) res.pass = false;
        }
      }
    }
  }
  res.detail = fmt("%ld round trips, worst relative error %.3g (tol 1e-6)", count, worst);
  return res;
}

// ---------------------------------------------------------------- check 2
CheckResult check_inequality_battery() {
  CheckResult res{"02 norm-power inequality battery", true, "", 0};
  SeededRng rng(90002);
  const int n = 10000;
  std::ostringstream detail;

  // All slacks are 1e-9 with inputs kept at O(1) scale so the absolute
  // threshold is meaningful.
  Tally smooth, convex, fy_ineq, fy_eq, proj_h, orth, inh, pq, p2, scal, subadd;

  for (const double kappa : kKappaGrid) {
    for (const double p : {1.0 + kappa, 2.0, 4.0}) {
      const double kp = k_p(p, kappa);
      const double ps = Exponent(p).dual().value();
      const double r = (1.0 + kappa) / kappa;
      for (const int d : kDimGrid) {
        for (int rep = 0; rep < n; ++rep) {
          const Vec x = random_vec(rng, d, 2.0);
          const Vec y = random_vec(rng, d, 2.0);

          // uniform smoothness of phi = (1/(1+k))||.||_p^{1+k}
          const double phix = norm_power(x, p, 1.0 + kappa) / (1.0 + kappa);
          const double phiy = norm_power(y, p, 1.0 + kappa) / (1.0 + kappa);
          const Vec gphi = signed_power_scaled(x, p, 1.0 + kappa, 0.0);
          smooth.expect_le(phiy,
                           phix + gphi.dot(y - x) +
                               kp / (1.0 + kappa) * norm_power(y - x, p, 1.0 + kappa),
                           1e-9);

          // uniform convexity of phi* = (k/(1+k))||.||_{p*}^{(1+k)/k}
          const double cx = kappa / (1.0 + kappa) * norm_power(x, ps, r);
          const double cy = kappa / (1.0 + kappa) * norm_power(y, ps, r);
          const Vec gconj = signed_power_scaled(x, ps, r, 0.0);
          convex.expect_le(cx + gconj.dot(y - x) +
                               std::pow(kp, -1.0 / kappa) * kappa / (1.0 + kappa) *
                                   norm_power(x - y, ps, r),
                           cy, 1e-9);
        }
      }

      // conjugate-pair closed form via the Young inequality plus tightness
      // at gradient-matched pairs
      for (int rep = 0; rep < n; ++rep) {
        const Vec x = random_vec(rng, 4, 2.0);
        const Vec y = random_vec(rng, 4, 2.0);
        const double rr = 1.0 + rng.uniform(0.2, 3.0);
        const double f = norm_power(x, p, rr) / rr;
        const double fstar = conj_norm_value(rr, p, y);
        fy_ineq.expect_le(x.dot(y), f + fstar, 1e-9);
        const Vec matched = signed_power_scaled(x, p, rr, 0.0);  // grad of f at x
        const double gap = std::abs(x.dot(matched) - f - conj_norm_value(rr, p, matched));
        fy_eq.expect_le(gap, 0.0, 1e-9 * (1.0 + std::abs(f)));
      }

      // collinear projection h: transfer identity and norm domination
      for (int rep = 0; rep < n; ++rep) {
        const Vec x = random_nonzero(rng, 6, 2.0);
        const Vec y = random_vec(rng, 6, 2.0);
        const Vec vp = vpow(x, p);
        const Vec h = vp.dot(y) / norm_power(x, p, p) * x;
        proj_h.expect_le(std::abs(vp.dot(y) - vp.dot(h)), 0.0,
                         1e-9 * (1.0 + std::abs(vp.dot(y))));
        proj_h.expect_le(p_norm(h, p), p_norm(y, p), 1e-9);

        // gradient of (1/rr)||.||^rr at x+h is orthogonal to y-h
        const double rr = rng.uniform(1.0 + kappa, 6.0);
        const Vec grad = signed_power_scaled(x + h, p, rr, 0.0);
        orth.expect_le(std::abs(grad.dot(y - h)), 0.0, 1e-9);

        // one-sided expansion along h
        const double lhs = norm_power(x + h, p, 1.0 + kappa) -
                           norm_power(x, p, 1.0 + kappa) -
                           (1.0 + kappa) * norm_power(x, p, 1.0 + kappa - p) * vp.dot(h);
        inh.expect_le(lhs, 2.0 * norm_power(h, p, 1.0 + kappa), 1e-9);
      }
    }

    // exponent-range expansions, scalars, and the subadditive power pair
    for (int rep = 0; rep < n; ++rep) {
      const Vec x = random_vec(rng, 5, 2.0);
      const Vec y = random_vec(rng, 5, 2.0);
      const double plo = 1.0 + rng.uniform(0.001, 1.0);  // (1, 2]
      pq.expect_le(norm_power(x + y, plo, plo) - norm_power(x, plo, plo) -
                       plo * vpow(x, plo).dot(y),
                   2.0 * norm_power(y, plo, plo), 1e-9);
      const double phi = 2.0 + rng.uniform(0.001, 4.0);  // (2, 6]
      p2.expect_le(norm_power(x + y, phi, 2.0) - norm_power(x, phi, 2.0) -
                       2.0 * norm_power(x, phi, 2.0 - phi) * vpow(x, phi).dot(y),
                   (phi - 1.0) * norm_power(y, phi, 2.0), 1e-9);

      const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
      scal.expect_le(std::pow(std::abs(a + b), 1.0 + kappa) -
                         std::pow(std::abs(a), 1.0 + kappa) -
                         (1.0 + kappa) * std::pow(std::abs(a), kappa) *
                             (a > 0 ? 1.0 : (a < 0 ? -1.0 : 0.0)) * b,
                     std::pow(2.0, 1.0 - kappa) * std::pow(std::abs(b), 1.0 + kappa),
                     1e-9);

      const double u = rng.uniform(0.0, 4.0), v = rng.uniform(0.0, 4.0);
      subadd.expect_le(std::pow(u + v, kappa), std::pow(u, kappa) + std::pow(v, kappa),
                       1e-9);
      subadd.expect_le(std::pow(u, kappa) + std::pow(v, kappa),
                       std::pow(2.0, 1.0 - kappa) * std::pow(u + v, kappa), 1e-9);
    }
  }

  const Tally* all[] = {&smooth, &convex, &fy_ineq, &fy_eq, &proj_h, &orth,
                        &inh,    &pq,     &p2,      &scal,  &subadd};
  const char* names[] = {"smooth", "convex", "young", "young-eq", "collinear",
                         "orth",   "expand", "p<=2",  "p>2",      "scalar", "subadd"};
  long violations = 0, total = 0;
  for (const auto* t : all) {
    violations += t->violations;
    total += t->total;
  }
  res.pass = violations == 0;
  detail << total << " instances, " << violations << " violations";
  for (std::size_t i = 0; i < std::size(all); ++i)
    if (all[i]->violations)
      detail << "; " << names[i] << ": " << all[i]->violations << " (worst excess "
             << all[i]->worst << ")";
  res.detail = detail.str();
  return res;
}

// ---------------------------------------------------------------- check 3
CheckResult check_projection() {
  CheckResult res{"03 bregman projection: pythagorean / grid / clamp", true, "", 0};
  SeededRng rng(90003);
  long pyth_fail = 0;
  for (const double kappa : kKappaGrid) {
    for (const double p : {1.0 + kappa, 2.0, 4.0}) {
      const MirrorMap m(p, kappa);
      const Box box(1.0, 4);
      for (int rep = 0; rep < 1000; ++rep) {
        const Vec x = random_vec(rng, 4, 1.0);
        const Vec y = random_vec(rng, 4, 3.0);
        if (!pythagorean_check(m, x, y, box)) ++pyth_fail;
      }
    }
  }

  // d = 2 grid oracle at p = 1.5, kappa = 0.5
  const MirrorMap m15(1.5, 0.5);
  const Box box2(1.0, 2);
  Vec y2(2);
  y2 << 3.0, 0.2;
  const Vec yhat = bregman_project(m15, y2, box2);
  const int grid_n = 2001;
  Vec best(2);
  double best_val = std::numeric_limits<double>::infinity();
  Vec probe(2);
  for (int i = 0; i < grid_n; ++i) {
    probe[0] = -1.0 + 2.0 * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      probe[1] = -1.0 + 2.0 * j / (grid_n - 1);
      const double val = m15.bregman(probe, y2);
      if (val < best_val) {
        best_val = val;
        best = probe;
      }
    }
  }
  const double grid_err =
      std::max(std::abs(yhat[0] - best[0]), std::abs(yhat[1] - best[1]));

  // p = 2, kappa = 1: clamp equality
  const MirrorMap m2(2.0, 1.0);
  const Box box6(1.0, 6);
  double clamp_err = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec y = random_vec(rng, 6, 3.0);
    clamp_err = std::max(clamp_err, (bregman_project(m2, y, box6) - clamp_to(y, box6))
                                        .cwiseAbs()
                                        .maxCoeff());
  }

  res.pass = pyth_fail == 0 && grid_err <= 2e-3 && clamp_err <= 1e-9;
  res.detail = fmt("pythagorean failures %ld/9000, grid coord error %.2g (tol 2e-3), "
                   "clamp error %.2g (tol 1e-9)",
                   pyth_fail, grid_err, clamp_err);
  return res;
}

// ---------------------------------------------------------------- check 4
CheckResult check_closed_form_step() {
  CheckResult res{"04 closed-form p=2 step equivalence", true, "", 0};
  SeededRng rng(90004);
  double worst = 0.0;
  for (const double kappa : kKappaGrid) {
    const MirrorMap map(2.0, kappa);
    for (int rep = 0; rep < 10000; ++rep) {
      const Vec x = random_vec(rng, 4, 2.0);
      const DualVec g(random_vec(rng, 4, 3.0));
      const double eta = std::exp(rng.uniform(-3.0, 1.0));
      const double diff = (single_step_response(map, x, g, eta) -
                           closed_form_step_p2(x, g, eta, kappa))
                              .cwiseAbs()
                              .maxCoeff();
      worst = std::max(worst, diff);
    }
  }
  res.pass = worst <= 1e-10;
  res.detail = fmt("30000 steps, worst coordinate gap %.3g (tol 1e-10)", worst);
  return res;
}

// ---------------------------------------------------------------- check 5
CheckResult check_robustness_exponent() {
  CheckResult res{"05 single-step robustness exponent", true, "", 0};
  SeededRng rng(90005);
  std::ostringstream detail;
  for (const double kappa : kKappaGrid) {
    const MirrorMap map(2.0, kappa);
    Vec x = random_vec(rng, 4, 1.0);
    x *= 0.05 / x.norm();
    Vec dir = random_vec(rng, 4, 1.0);
    dir /= dir.norm();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int decade = 2; decade <= 8; ++decade) {
      const double gnorm = std::pow(10.0, decade);
      const double lx = std::log(gnorm);
      const double ly =
          std::log(single_step_response(map, x, DualVec(gnorm * dir), 1.0).norm());
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (std::abs(slope - kappa) > 0.01) res.pass = false;
    detail << fmt("kappa %.1f: slope %.4f  ", kappa, slope);
  }
  res.detail = detail.str() + "(tol 0.01)";
  return res;
}

// ---------------------------------------------------------------- checks 6-8
SweepConfig rate_config_T() {
  SweepConfig cfg;
  cfg.experiment = "acceptance_rate_T";
  cfg.algos = {Algo::smd};
  cfg.kappas = {0.5};
  cfg.qs = {1.5};
  cfg.ds = {10};
  cfg.horizons = {100, 1000, 10000, 100000};
  cfg.trials = 200;
  cfg.root_seed = 2024;
  cfg.radius = 1.0;
  cfg.noise_beta = 1.6;
  cfg.noise_scale = 1.0;
  cfg.noise_normalized = true;
  return cfg;
}

CheckResult check_upper_bound(std::vector<ResultRow>& rows_out) {
  CheckResult res{"06 mean error under the step-budget bound", true, "", 0};
  const SweepConfig cfg = rate_config_T();
  rows_out = run_sweep_in_memory(cfg);

  const MirrorMap map = resolve_map(Exponent(1.5), 0.5, 10);
  const double r0 = map.r0(1.0, 10);
  std::map<long, std::pair<double, long>> groups;
  double sigma = 0.0;
  for (const auto& r : rows_out) {
    groups[r.horizon].first += r.final_error;
    groups[r.horizon].second += 1;
    sigma = r.sigma;
  }
  std::ostringstream detail;
  detail << fmt("R0 %.3f sigma %.3f; ", r0, sigma);
  for (const auto& [T, g] : groups) {
    const double mean = g.first / static_cast<double>(g.second);
    const double bound = r0 * sigma * std::pow(static_cast<double>(T), -1.0 / 3.0);
    if (!(mean <= bound)) res.pass = false;
    detail << fmt("T=%ld: %.4f<=%.3f ", T, mean, bound);
  }
  res.detail = detail.str();
  return res;
}

CheckResult check_rate_exponent_T(std::vector<ResultRow>& rows) {
  CheckResult res{"07 rate exponent in T", true, "", 0};
  if (rows.empty()) rows = run_sweep_in_memory(rate_config_T());  // filtered runs
  const RateFit fit = fit_rate(rows, FitAxis::horizon);
  res.pass = std::abs(fit.slope + 1.0 / 3.0) <= 0.1;
  res.detail = fmt("slope %.4f (want -1/3 +/- 0.1), r2 %.4f", fit.slope, fit.r2);
  return res;
}

CheckResult check_rate_exponent_d() {
  CheckResult res{"08 rate exponent in dimension", true, "", 0};
  SweepConfig cfg;
  cfg.experiment = "acceptance_rate_d";
  cfg.algos = {Algo::smd};
  cfg.kappas = {0.5};
  cfg.qs = {1.0};
  cfg.ds = {4, 8, 16, 32, 64};
  cfg.horizons = {10000};
  cfg.trials = 200;
  cfg.root_seed = 2025;
  cfg.radius = 1.0;
  cfg.noise_beta = 1.6;
  cfg.noise_scale = 1.0;
  cfg.noise_normalized = true;  // keeps sigma dimension-free
  const auto rows = run_sweep_in_memory(cfg);
  const RateFit fit = fit_rate(rows, FitAxis::dimension);
  res.pass = std::abs(fit.slope - 1.0 / 3.0) <= 0.15;
  res.detail = fmt("slope %.4f (want 1/3 +/- 0.15), r2 %.4f", fit.slope, fit.r2);
  return res;
}

// ---------------------------------------------------------------- check 9
CheckResult check_kl_pair() {
  CheckResult res{"09 bernoulli pair KL bound", true, "", 0};
  double worst = -1e300;
  for (int i = 1; i <= 50; ++i) {
    const double p = 0.5 * i / 50.0;
    const double fwd = kl_bernoulli(1 - 0.75 * p, 1 - 0.25 * p);
    const double rev = kl_bernoulli(1 - 0.25 * p, 1 - 0.75 * p);
    worst = std::max(worst, std::max(fwd, rev) - p);
    if (fwd > p || rev > p) res.pass = false;  // exact, no tolerance
  }
  res.detail = fmt("50-point grid, worst excess over p: %.3g", worst);
  return res;
}

// ---------------------------------------------------------------- check 10
CheckResult check_noise_certification() {
  CheckResult res{"10 noise certification", true, "", 0};
  std::ostringstream detail;

  // sampler moment at parameters where the estimator concentrates
  // (|X|^{1+kappa} tail index beta/(1+kappa) = 1.73)
  const NoiseSpec spec(1.9, 1.0, 0.1);
  SeededRng rng(90010);
  const long n = 10000000;
  std::vector<double> magnitudes(n);
  double moment_sum = 0.0;
  for (long i = 0; i < n; ++i) {
    magnitudes[i] = std::abs(sample_sym_pareto(spec, rng));
    moment_sum += std::pow(magnitudes[i], 1.1);
  }
  const double analytic = spec.abs_moment(1.1);
  const double rel = std::abs(moment_sum / n - analytic) / analytic;
  if (rel > 0.05) res.pass = false;
  detail << fmt("moment rel err %.4f (tol 0.05); ", rel);

  const double hill = hill_tail_index(std::move(magnitudes), 0.01);
  if (std::abs(hill - spec.beta) > 0.15) res.pass = false;
  detail << fmt("hill %.3f (beta 1.9 +/- 0.15); ", hill);

  // certified sigma holds for every oracle family (Monte Carlo mean of
  // ||g_hat||_q^{1+kappa} vs sigma^{1+kappa})
  const auto mc_check = [&](const char* label, auto&& sampler, const Exponent& q,
                            double kappa, double target, long draws) {
    double sum = 0.0;
    for (long i = 0; i < draws; ++i) {
      const OracleResponse resp = sampler(rng);
      sum += norm_power(resp.g_hat.v, q, 1.0 + kappa);
    }
    const double ratio = sum / static_cast<double>(draws) / target;
    if (ratio > 1.02) res.pass = false;
    detail << fmt("%s %.3f ", label, ratio);
  };
  detail << "moment/certified: ";

  {
    const int d = 6;
    const double kappa = 0.5;
    const NoiseSpec ns(1.95, 0.5, kappa);
    const Exponent q(1.5);
    Vec x_star = Vec::Constant(d, -0.25);
    const SyntheticOracle oracle(x_star, 1.0, q, ns);
    const Vec x = random_vec(rng, d, 0.8);
    mc_check("synthetic", [&](SeededRng& r) { return oracle.sample(x, r); }, q, kappa,
             std::pow(oracle.sigma(), 1.0 + kappa), 1000000);
  }
  {
    const double kappa = 0.1;
    const NoiseSpec ns(1.9, 1.0, kappa);
    const Exponent q(1.1);
    Vec x_star = Vec::Constant(4, 0.25);
    const SyntheticOracle oracle(x_star, 1.0, q, ns);
    const Vec x = random_vec(rng, 4, 0.8);
    mc_check("synthetic01", [&](SeededRng& r) { return oracle.sample(x, r); }, q, kappa,
             std::pow(oracle.sigma(), 1.0 + kappa), 1000000);
  }
  {
    Eigen::VectorXi alpha(4);
    alpha << 1, -1, -1, 1;
    const double kappa = 0.5;
    const auto inst = make_hard_small(alpha, 0.1, 1.5, 1.0, kappa);
    const Vec x = random_vec(rng, 4, 0.9);
    mc_check("hard-small", [&](SeededRng& r) { return oracle_small(inst, x, r); },
             Exponent(1.0), kappa, std::pow(1.5, 1.0 + kappa), 1000000);
  }
  {
    Eigen::VectorXi alpha(3);
    alpha << 1, -1, 1;
    const double kappa = 0.5;
    const auto inst = make_hard_large(alpha, 0.01, 1.0, 1.0, kappa, Exponent(2.0), 64);
    const Vec x = random_vec(rng, 3, 0.9);
    mc_check("hard-large", [&](SeededRng& r) { return oracle_large(inst, x, r); },
             Exponent(2.0), kappa, 1.0, 1000000);
  }
  detail << "(tol 1.02)";
  res.detail = detail.str();
  return res;
}

// ---------------------------------------------------------------- check 11
CheckResult check_sandwich() {
  CheckResult res{"11 hard-instance ratio band and separation", true, "", 0};
  std::ostringstream detail;

  for (const int d : {1, 16}) {
    const double kappa = 1.0;
    const Exponent q(2.0);
    const MirrorMap map = resolve_map(q, kappa, d);
    const auto rows = minimax_gap_experiment(HardRegime::small_q, kappa, q, d, 1.0, 1.0,
                                             map, {100, 1000, 10000}, 200, 7);
    double lo = 1e300, hi = 0.0;
    for (const auto& row : rows) {
      lo = std::min(lo, row.ratio);
      hi = std::max(hi, row.ratio);
    }
    if (!(lo > 0.0) || hi / lo > 100.0) res.pass = false;
    detail << fmt("d=%d band [%.4f, %.4f] spread %.2f; ", d, lo, hi, hi / lo);
  }

  // separation floors via exact coordinate-wise discrepancies, d <= 8
  SeededRng rng(90011);
  double worst_small = 1e300, worst_large = 1e300;
  for (int d = 1; d <= 8; ++d) {
    const Packing packing = greedy_packing(d, rng);
    const double delta_s = 0.1, L = 1.0, R = 1.0, kappa = 0.5;
    const long T = 1000;
    double psi_small = 1e300, psi_large = 1e300;
    for (int i = 0; i < packing.size(); ++i) {
      for (int j = i + 1; j < packing.size(); ++j) {
        psi_small = std::min(
            psi_small,
            discrepancy_exact(
                make_hard_small(packing.vertices[i], delta_s, L, R, kappa),
                make_hard_small(packing.vertices[j], delta_s, L, R, kappa)));
        psi_large = std::min(
            psi_large,
            discrepancy_exact(
                make_hard_large(packing.vertices[i], 0.01, L, R, kappa, 2.0, T),
                make_hard_large(packing.vertices[j], 0.01, L, R, kappa, 2.0, T)));
      }
    }
    worst_small = std::min(worst_small, psi_small / (R * L * delta_s / 4.0));
    const double bound_large = 0.5 * R * 0.01 * L *
                               std::pow(static_cast<double>(T), -1.0 / 3.0) *
                               std::pow(static_cast<double>(d), 0.5);
    worst_large = std::min(worst_large, psi_large / bound_large);
  }
  if (worst_small < 1.0 - 1e-12 || worst_large < 1.0 - 1e-12) res.pass = false;
  detail << fmt("min separation/floor: small %.3f, large %.3f (need >= 1)", worst_small,
                worst_large);
  res.detail = detail.str();
  return res;
}

// ---------------------------------------------------------------- check 12
CheckResult check_identification_floors(bool large_floor_as_displayed,
                                        const char* name) {
  CheckResult res{name, true, "", 0};
  std::ostringstream detail;
  SeededRng prng(90012);
  const Packing packing = greedy_packing(1, prng);
  const long trials = 2000;

  if (!large_floor_as_displayed) {
    // per-round-coin game: floor (1/2)(1 - sqrt(pT/2)),
    // p = (4 delta)^{(1+kappa)/kappa}, wherever positive
    const double kappa = 1.0;
    const MirrorMap map(2.0, kappa);
    double worst_margin = 1e300;
    for (const double delta : {1.0 / 32, 1.0 / 16, 1.0 / 8}) {
      const double p = std::pow(4 * delta, (1 + kappa) / kappa);
      for (const long T : {1L, 4L, 16L, 64L}) {
        if (p * T >= 2.0) continue;
        const HardFamily family{HardRegime::small_q, delta, 1.0,
                                1.0,                 kappa, Exponent(1.0),
                                T};
        const double floor = 0.5 * (1.0 - std::sqrt(p * T / 2.0));
        for (const auto est :
             {Estimator::mle, Estimator::random_guess, Estimator::smd_nearest}) {
          double worst = 0.0;
          for (int a = 0; a < 2; ++a)
            worst = std::max(worst,
                             identification_game_fixed_alpha(family, packing, a, trials,
                                                             est, map, 67)
                                 .misid_rate);
          worst_margin = std::min(worst_margin, worst - (floor - 0.05));
          if (worst < floor - 0.05) res.pass = false;
        }
      }
    }
    detail << fmt("coin game: min margin above floor %.4f", worst_margin);
  } else {
    // gated-reveal game. The floor is checked twice: as displayed,
    // 1 - sqrt(8 delta^2), and halved. The displayed version exceeds the
    // two-point testing optimum (any estimator reaches error ~1/2 as
    // delta -> 0, e.g. the Bayes rule), so it cannot hold for data-driven
    // estimators; it is retained verbatim and reported honestly. The halved
    // floor is the Le Cam bound and must hold.
    const double kappa = 0.5;
    const MirrorMap map(2.0, kappa);
    double worst_displayed = 1e300, worst_halved = 1e300;
    for (const double delta : {1.0 / 200, 1.0 / 100}) {
      for (const long T : {50L, 400L}) {
        const HardFamily family{HardRegime::large_q, delta, 1.0,
                                1.0,                 kappa, Exponent(2.0),
                                T};
        const double displayed = 1.0 - std::sqrt(8.0 * delta * delta);
        for (const auto est :
             {Estimator::mle, Estimator::random_guess, Estimator::smd_nearest}) {
          double worst = 0.0;
          for (int a = 0; a < 2; ++a)
            worst = std::max(worst,
                             identification_game_fixed_alpha(family, packing, a, trials,
                                                             est, map, 73)
                                 .misid_rate);
          worst_displayed = std::min(worst_displayed, worst - (displayed - 0.05));
          worst_halved = std::min(worst_halved, worst - (0.5 * displayed - 0.05));
          if (worst < displayed - 0.05) res.pass = false;
        }
      }
    }
    detail << fmt("gated game: margin vs displayed floor %.4f (expected negative: "
                  "the displayed constant overshoots the two-point optimum), "
                  "margin vs halved (Le Cam) floor %.4f (must be >= 0)",
                  worst_displayed, worst_halved);
    if (worst_halved < 0.0) detail << " HALVED FLOOR VIOLATED";
  }
  res.detail = detail.str();
  return res;
}

// ---------------------------------------------------------------- check 13
CheckResult check_determinism() {
  CheckResult res{"13 sweep determinism and thread equivalence", true, "", 0};
  namespace fs = std::filesystem;

  SweepConfig cfg;
  cfg.experiment = "acceptance_determinism";
  cfg.algos = {Algo::smd, Algo::clipped_sgd};
  cfg.kappas = {0.5};
  cfg.qs = {1.5};
  cfg.ds = {3};
  cfg.horizons = {64};
  cfg.trials = 10;
  cfg.root_seed = 31;
  cfg.noise_beta = 1.7;

  const auto normalize = [](const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
    return out.str();
  };

  const fs::path dir_a = fs::temp_directory_path() / "htsmd_acc_det_a";
  const fs::path dir_b = fs::temp_directory_path() / "htsmd_acc_det_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  cfg.out_dir = dir_a.string();
  run_sweep(cfg);
  cfg.out_dir = dir_b.string();
  run_sweep(cfg);
  const bool identical = normalize((dir_a / "results.csv").string()) ==
                         normalize((dir_b / "results.csv").string());
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  cfg.out_dir.clear();
  cfg.threads = 1;
  auto serial = run_sweep_in_memory(cfg);
  cfg.threads = 4;
  auto parallel = run_sweep_in_memory(cfg);
  const auto key = [](const ResultRow& r) {
    ResultRow c = r;
    c.wall_ms = 0.0;
    return to_csv_row(c);
  };
  std::vector<std::string> ks, kp2;
  for (const auto& r : serial) ks.push_back(key(r));
  for (const auto& r : parallel) kp2.push_back(key(r));
  std::sort(ks.begin(), ks.end());
  std::sort(kp2.begin(), kp2.end());
  const bool equivalent = ks == kp2;

  res.pass = identical && equivalent;
  res.detail = fmt("rerun body identical: %s; 4-thread vs serial sorted diff empty: %s",
                   identical ? "yes" : "no", equivalent ? "yes" : "no");
  return res;
}

}  // namespace

std::vector<CheckResult> run_acceptance_checks(const std::string& filter) {
  std::vector<CheckResult> results;
  std::vector<ResultRow> rate_rows;

  // A few checks carry a wall-clock budget as part of their contract.
  const std::map<std::string, double> budgets = {{"01", 10.0}, {"02", 60.0}, {"06", 600.0}};

  const auto add = [&](const char* name, auto&& make) {
    if (!filter.empty() && std::string(name).find(filter) == std::string::npos) return;
    const auto t0 = Clock::now();
    CheckResult r = make();
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (const auto it = budgets.find(name); it != budgets.end()) {
      if (r.seconds >= it->second) {
        r.pass = false;
        r.detail += fmt("; OVER BUDGET: %.1fs >= %.0fs", r.seconds, it->second);
      } else {
        r.detail += fmt("; budget %.0fs", it->second);
      }
    }
    results.push_back(std::move(r));
  };

  add("01", [] { return check_conjugate_roundtrip(); });
  add("02", [] { return check_inequality_battery(); });
  add("03", [] { return check_projection(); });
  add("04", [] { return check_closed_form_step(); });
  add("05", [] { return check_robustness_exponent(); });
  add("06", [&] { return check_upper_bound(rate_rows); });
  add("07", [&] { return check_rate_exponent_T(rate_rows); });
  add("08", [] { return check_rate_exponent_d(); });
  add("09", [] { return check_kl_pair(); });
  add("10", [] { return check_noise_certification(); });
  add("11", [] { return check_sandwich(); });
  add("12a", [] {
    return check_identification_floors(false, "12a identification floor: coin game");
  });
  add("12b", [] {
    return check_identification_floors(true, "12b identification floor: gated game");
  });
  add("13", [] { return check_determinism(); });
  return results;
}

}  // namespace smd
