#include "smd/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smd {

int hamming(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  int dist = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) dist += a[i] != b[i];
  return dist;
}

Packing greedy_packing(int d, SeededRng& rng) {
  if (d < 1 || d > 24) throw std::invalid_argument("greedy_packing: 1 <= d <= 24");
  const std::uint32_t count = 1u << d;
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  // Fisher-Yates with the deterministic rng.
  for (std::uint32_t i = count - 1; i > 0; --i) {
    const auto j = static_cast<std::uint32_t>(rng.uniform_int(static_cast<int>(i) + 1));
    std::swap(order[i], order[j]);
  }

  const int min_dist = (d + 3) / 4;  // Hamming >= d/4
  Packing packing;
  packing.dim = d;
  std::vector<std::uint32_t> kept;
  for (const std::uint32_t mask : order) {
    bool ok = true;
    for (const std::uint32_t other : kept) {
      if (__builtin_popcount(mask ^ other) < min_dist) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(mask);
  }

  packing.vertices.reserve(kept.size());
  for (const std::uint32_t mask : kept) {
    Eigen::VectorXi v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1u ? 1 : -1;
    packing.vertices.push_back(std::move(v));
  }
  return packing;
}

double kl_bernoulli(double a, double b) {
  if (!(a > 0.0) || !(a < 1.0) || !(b > 0.0) || !(b < 1.0))
    throw std::invalid_argument("kl_bernoulli: parameters must lie strictly in (0, 1)");
  return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
}

HardInstance HardFamily::instance(const Eigen::VectorXi& alpha) const {
  if (regime == HardRegime::small_q)
    return make_hard_small(alpha, delta, lipschitz, radius, kappa, q);
  return make_hard_large(alpha, delta, lipschitz, radius, kappa, q, horizon);
}

double HardFamily::default_delta(HardRegime regime, int d, long horizon, double kappa) {
  if (regime == HardRegime::large_q) return 0.01;
  return 1.0 / 32.0 *
         std::pow(static_cast<double>(d) / static_cast<double>(horizon),
                  kappa / (1.0 + kappa));
}

int nearest_vertex(const Eigen::Ref<const Vec>& x_bar, const Packing& packing,
                   const HardFamily& family) {
  int best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < packing.size(); ++k) {
    const HardInstance inst = family.instance(packing.vertices[k]);
    const double gap = hard_value(inst, x_bar) - hard_min_value(inst);
    if (gap < best_gap - 1e-15 * (1.0 + std::abs(gap))) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::smd_nearest: return "smd_nearest";
    case Estimator::mle: return "mle";
    case Estimator::random_guess: return "random_guess";
  }
  return "?";
}

namespace {

// V-restricted maximum likelihood from per-coordinate log-likelihood-ratio
// scores: LL(alpha) = sum over {i : alpha_i = +1} of score_i, up to a
// constant. Ties resolve to the lowest index.
int argmax_vertex(const Packing& packing, const Vec& score) {
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < packing.size(); ++k) {
    double ll = 0.0;
    for (int i = 0; i < packing.dim; ++i)
      if (packing.vertices[k][i] == 1) ll += score[i];
    if (ll > best_ll + 1e-15 * (1.0 + std::abs(ll))) {
      best_ll = ll;
      best = k;
    }
  }
  return best;
}

// Coin-game data for the small_q family: each round reveals (index, coin)
// with coin ~ Ber(1 - (2+alpha_i)/4 * bern_p). Returns the MLE vertex.
int mle_small(const HardFamily& family, const Packing& packing,
              const Eigen::VectorXi& alpha, SeededRng& rng) {
  const double p = family.instance(alpha).bern_p();
  const double zero_ll = std::log(3.0);  // log((3p/4)/(p/4))
  const double one_ll = std::log((1.0 - 0.75 * p) / (1.0 - 0.25 * p));
  Vec score = Vec::Zero(packing.dim);
  for (long t = 0; t < family.horizon; ++t) {
    const int i = rng.uniform_int(packing.dim);
    const double keep_prob = (2.0 + alpha[i]) / 4.0 * p;
    const bool b = rng.bernoulli(1.0 - keep_prob);
    score[i] += b ? one_ll : zero_ll;
  }
  return argmax_vertex(packing, score);
}

// Coin-game data for the large_q family: a Ber(1/T) gate, then all d coins
// b_i ~ Ber(1/2 + alpha_i delta) on success.
int mle_large(const HardFamily& family, const Packing& packing,
              const Eigen::VectorXi& alpha, SeededRng& rng) {
  const double heads_ll =
      std::log((0.5 + family.delta) / (0.5 - family.delta));
  Vec score = Vec::Zero(packing.dim);
  for (long t = 0; t < family.horizon; ++t) {
    if (!rng.bernoulli(1.0 / static_cast<double>(family.horizon))) continue;
    for (int i = 0; i < packing.dim; ++i) {
      const bool heads = rng.bernoulli(0.5 + alpha[i] * family.delta);
      score[i] += heads ? heads_ll : -heads_ll;
    }
  }
  return argmax_vertex(packing, score);
}

int run_estimator(const HardFamily& family, const Packing& packing,
                  const Eigen::VectorXi& alpha, Estimator est,
                  const std::optional<MirrorMap>& map, SeededRng& rng) {
  switch (est) {
    case Estimator::random_guess:
      return rng.uniform_int(packing.size());
    case Estimator::mle:
      return family.regime == HardRegime::small_q ? mle_small(family, packing, alpha, rng)
                                                  : mle_large(family, packing, alpha, rng);
    case Estimator::smd_nearest: {
      if (!map) throw std::invalid_argument("identification_game: smd needs a mirror map");
      if (family.horizon == 0)  // no queries: the method reports x0 = 0
        return nearest_vertex(Vec::Zero(packing.dim), packing, family);
      const HardInstance inst = family.instance(alpha);
      RunConfig cfg{Algo::smd,
                    map,
                    Box(family.radius, packing.dim),
                    family.horizon,
                    step_size_auto(map->r0(family.radius, packing.dim), family.lipschitz,
                                   family.kappa, family.horizon),
                    rng.seed(),
                    rng.stream(),
                    std::nullopt};
      const Trace trace = run(cfg, make_oracle(inst), rng);
      return nearest_vertex(trace.x_bar, packing, family);
    }
  }
  throw std::logic_error("run_estimator: unknown estimator");
}

GameResult wilson(long errors, long trials) {
  GameResult res;
  res.trials = trials;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(errors) / n;
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = phat + z2 / (2.0 * n);
  const double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  res.misid_rate = phat;
  res.ci_lo = std::max(0.0, (center - spread) / denom);
  res.ci_hi = std::min(1.0, (center + spread) / denom);
  return res;
}

}  // namespace

GameResult identification_game(const HardFamily& family, const Packing& packing,
                               long trials, Estimator est,
                               const std::optional<MirrorMap>& map, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("identification_game: trials >= 1");
  long errors = 0;
  for (long trial = 0; trial < trials; ++trial) {
    SeededRng rng(seed, hash_combine(0x1d9af1, static_cast<std::uint64_t>(trial)));
    const int truth = rng.uniform_int(packing.size());
    const int guess = run_estimator(family, packing, packing.vertices[truth], est, map, rng);
    errors += guess != truth;
  }
  return wilson(errors, trials);
}

GameResult identification_game_fixed_alpha(const HardFamily& family,
                                           const Packing& packing, int alpha_index,
                                           long trials, Estimator est,
                                           const std::optional<MirrorMap>& map,
                                           std::uint64_t seed) {
  if (alpha_index < 0 || alpha_index >= packing.size())
    throw std::invalid_argument("identification_game_fixed_alpha: bad index");
  long errors = 0;
  for (long trial = 0; trial < trials; ++trial) {
    SeededRng rng(seed, hash_combine(0x2b7e15, static_cast<std::uint64_t>(trial)));
    const int guess =
        run_estimator(family, packing, packing.vertices[alpha_index], est, map, rng);
    errors += guess != alpha_index;
  }
  return wilson(errors, trials);
}

std::vector<GapRow> minimax_gap_experiment(HardRegime regime, double kappa, Exponent q,
                                           int d, double lipschitz, double radius,
                                           const MirrorMap& map,
                                           const std::vector<long>& horizon_grid,
                                           long trials, std::uint64_t seed) {
  std::vector<GapRow> rows;
  SeededRng packing_rng(seed, 0xACED);
  const Packing packing = greedy_packing(d, packing_rng);

  for (const long horizon : horizon_grid) {
    GapRow row;
    row.horizon = horizon;
    row.delta = HardFamily::default_delta(regime, d, horizon, kappa);
    HardFamily family{regime, row.delta, lipschitz, radius, kappa, q, horizon};

    double total_error = 0.0;
    for (long trial = 0; trial < trials; ++trial) {
      SeededRng rng(seed, hash_combine(static_cast<std::uint64_t>(horizon),
                                       static_cast<std::uint64_t>(trial)));
      const int truth = rng.uniform_int(packing.size());
      const HardInstance inst = family.instance(packing.vertices[truth]);
      RunConfig cfg{Algo::smd,
                    map,
                    Box(radius, d),
                    horizon,
                    step_size_auto(map.r0(radius, d), lipschitz, kappa, horizon),
                    rng.seed(),
                    rng.stream(),
                    std::nullopt};
      total_error += run(cfg, make_oracle(inst), rng).final_error();
    }
    row.mean_error = total_error / static_cast<double>(trials);

    const double tpow = std::pow(static_cast<double>(horizon), kappa / (1.0 + kappa));
    if (regime == HardRegime::small_q) {
      row.rate = radius * lipschitz *
                 std::pow(static_cast<double>(d), kappa / (1.0 + kappa)) / tpow;
    } else {
      const double dfac = q.is_infinite()
                              ? static_cast<double>(d)
                              : std::pow(static_cast<double>(d), 1.0 - 1.0 / q.value());
      row.rate = radius * lipschitz * dfac / tpow;
    }
    row.ratio = row.mean_error / row.rate;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace smd
