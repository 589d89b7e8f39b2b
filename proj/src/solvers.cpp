#include "smd/solvers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smd {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::smd: return "smd";
    case Algo::sgd: return "sgd";
    case Algo::clipped_sgd: return "clipped_sgd";
  }
  return "?";
}

std::optional<Algo> algo_from_name(const std::string& name) {
  if (name == "smd") return Algo::smd;
  if (name == "sgd") return Algo::sgd;
  if (name == "clipped_sgd") return Algo::clipped_sgd;
  return std::nullopt;
}

double step_size_auto(double r0, double sigma, double kappa, long iterations) {
  if (!(r0 > 0.0) || !(sigma > 0.0) || !(kappa > 0.0) || iterations < 1)
    throw std::invalid_argument("step_size_auto: positive inputs required");
  return std::exp(std::log(r0) / kappa - std::log(sigma) -
                  std::log(static_cast<double>(iterations)) / (1.0 + kappa));
}

namespace {

// Shared driver: `update` maps (x, g_hat) to the next feasible iterate.
template <typename Update>
Trace drive(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng,
            Update&& update) {
  if (cfg.iterations < 1) throw std::invalid_argument("run: T >= 1");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("run: eta must be resolved > 0");

  const auto t0 = std::chrono::steady_clock::now();
  Trace trace;
  Vec x = Vec::Zero(cfg.box.dim);  // argmin of every U_p over the centered box
  Vec sum = Vec::Zero(cfg.box.dim);
  long next_checkpoint = 1;

  for (long t = 1; t <= cfg.iterations; ++t) {
    sum += x;  // x_{t-1} joins the average before query t is spent
    if (t == next_checkpoint || t == cfg.iterations) {
      const Vec avg = sum / static_cast<double>(t);
      trace.checkpoints.emplace_back(t, oracle.objective(avg) - oracle.min_value);
      while (next_checkpoint <= t) next_checkpoint *= 2;
    }
    const OracleResponse resp = oracle.sample(x, rng);
    x = update(x, resp.g_hat);
  }

  trace.x_bar = sum / static_cast<double>(cfg.iterations);
  trace.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  return trace;
}

}  // namespace

Trace smd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng) {
  if (cfg.algo != Algo::smd || !cfg.map) throw std::invalid_argument("smd_run: config");
  const MirrorMap& m = *cfg.map;
  return drive(cfg, oracle, rng, [&](const Vec& x, const DualVec& g) {
    try {
      const DualVec moved(m.grad(x).v - cfg.eta * g.v);
      return bregman_project(m, m.grad_star(moved), cfg.box);
    } catch (const ProjectionError& e) {
      throw std::runtime_error(std::string("smd_run: projection failed: ") + e.what());
    }
  });
}

Trace sgd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng) {
  if (cfg.algo != Algo::sgd) throw std::invalid_argument("sgd_run: config");
  return drive(cfg, oracle, rng, [&](const Vec& x, const DualVec& g) {
    return clamp_to(x - cfg.eta * g.v, cfg.box);
  });
}

Trace clipped_sgd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng) {
  if (cfg.algo != Algo::clipped_sgd || !cfg.clip || !(*cfg.clip > 0.0))
    throw std::invalid_argument("clipped_sgd_run: config");
  const double tau = *cfg.clip;
  return drive(cfg, oracle, rng, [&](const Vec& x, const DualVec& g) {
    const double gn = g.v.norm();
    const double factor = gn > tau ? tau / gn : 1.0;
    return clamp_to(x - cfg.eta * factor * g.v, cfg.box);
  });
}

Trace run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng) {
  switch (cfg.algo) {
    case Algo::smd: return smd_run(cfg, oracle, rng);
    case Algo::sgd: return sgd_run(cfg, oracle, rng);
    case Algo::clipped_sgd: return clipped_sgd_run(cfg, oracle, rng);
  }
  throw std::logic_error("run: unknown algorithm");
}

Vec single_step_response(const MirrorMap& map, const Eigen::Ref<const Vec>& x,
                         const DualVec& g, double eta) {
  return map.grad_star(DualVec(map.grad(x).v - eta * g.v));
}

Vec closed_form_step_p2(const Eigen::Ref<const Vec>& x, const DualVec& g, double eta,
                        double kappa) {
  const double xn = x.norm();
  const Vec numerator =
      x * (xn == 0.0 ? 0.0 : std::pow(xn, 1.0 / kappa - 1.0)) -
      (eta / std::pow(10.0, 1.0 / kappa)) * g.v;
  const double nn = numerator.norm();
  if (nn == 0.0) return Vec::Zero(x.size());
  return numerator / std::pow(nn, 1.0 - kappa);
}

}  // namespace smd
