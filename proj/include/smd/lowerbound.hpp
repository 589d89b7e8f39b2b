#ifndef SMD_LOWERBOUND_HPP
#define SMD_LOWERBOUND_HPP

#include <vector>

#include "smd/oracles.hpp"
#include "smd/solvers.hpp"

namespace smd {

/// A set of hypercube vertices with pairwise Hamming distance >= d/4,
/// indexing one adversarial function family.
struct Packing {
  int dim = 0;
  std::vector<Eigen::VectorXi> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
};

int hamming(const Eigen::VectorXi& a, const Eigen::VectorXi& b);

/// Randomized greedy packing: shuffle the 2^d vertices, keep each one at
/// Hamming distance >= d/4 from everything kept so far. Always produces at
/// least two vertices; for d = 1 it is exactly {-1, +1}. Desk scale d <= 24.
Packing greedy_packing(int d, SeededRng& rng);

/// KL(Ber(a) || Ber(b)) for a, b strictly inside (0, 1).
double kl_bernoulli(double a, double b);

/// One adversarial family G(delta): everything but the vertex.
struct HardFamily {
  HardRegime regime;
  double delta;
  double lipschitz;
  double radius;
  double kappa;
  Exponent q;
  long horizon;  // query budget T; also the large_q gate parameter

  HardInstance instance(const Eigen::VectorXi& alpha) const;
  /// delta from the minimax proofs: (1/32)(d/T)^{kappa/(1+kappa)} for the
  /// small_q family, 1/100 for large_q.
  static double default_delta(HardRegime regime, int d, long horizon, double kappa);
};

/// The vertex whose objective makes x_bar least suboptimal,
/// argmin_alpha [g_alpha(x_bar) - min g_alpha]; ties resolve to the lowest
/// index.
int nearest_vertex(const Eigen::Ref<const Vec>& x_bar, const Packing& packing,
                   const HardFamily& family);

/// The estimator panel the misidentification floors are checked against.
/// The information-theoretic bounds hold for every estimator; these three
/// are the finite sample of that universe we actually run.
enum class Estimator { smd_nearest, mle, random_guess };

const char* estimator_name(Estimator e);

struct GameResult {
  double misid_rate = 0.0;
  double ci_lo = 0.0;  // 95% Wilson interval
  double ci_hi = 1.0;
  long trials = 0;
};

/// Runs `trials` rounds of the vertex-identification game: draw alpha
/// uniformly from the packing, generate T queries worth of oracle data,
/// apply the estimator, count misidentifications. The smd_nearest estimator
/// needs `map` (and derives its step size from the family's certified
/// sigma = L); the other estimators consume the raw coin outcomes.
GameResult identification_game(const HardFamily& family, const Packing& packing,
                               long trials, Estimator est,
                               const std::optional<MirrorMap>& map, std::uint64_t seed);

/// Same game but with alpha fixed, for the d = 1 floors that are stated as a
/// maximum over the vertex.
GameResult identification_game_fixed_alpha(const HardFamily& family,
                                           const Packing& packing, int alpha_index,
                                           long trials, Estimator est,
                                           const std::optional<MirrorMap>& map,
                                           std::uint64_t seed);

struct GapRow {
  long horizon = 0;
  double delta = 0.0;
  double mean_error = 0.0;
  double rate = 0.0;   // theoretical rate denominator
  double ratio = 0.0;  // mean_error / rate
};

/// For each T in the grid: build the family at its default delta, run SMD
/// against a uniformly drawn vertex for `trials` runs, and report the mean
/// error next to the minimax rate RL(d/T)^{k/(1+k)} (small_q) or
/// RL d^{1-1/q} T^{-k/(1+k)} (large_q). Boundedness of the ratio column is
/// the experiment's claim.
std::vector<GapRow> minimax_gap_experiment(HardRegime regime, double kappa, Exponent q,
                                           int d, double lipschitz, double radius,
                                           const MirrorMap& map,
                                           const std::vector<long>& horizon_grid,
                                           long trials, std::uint64_t seed);

}  // namespace smd

#endif  // SMD_LOWERBOUND_HPP
