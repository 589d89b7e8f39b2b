#ifndef SMD_SOLVERS_HPP
#define SMD_SOLVERS_HPP

#include <optional>
#include <vector>

#include "smd/oracles.hpp"

namespace smd {

enum class Algo { smd, sgd, clipped_sgd };

const char* algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

/// One optimization run: T oracle queries from x0 = 0 (the Psi-minimizer
/// over the centered box), fixed step size. The mirror map is only consulted
/// by the smd algorithm; clip only by clipped_sgd.
struct RunConfig {
  Algo algo = Algo::smd;
  std::optional<MirrorMap> map;
  Box box{1.0, 1};
  long iterations = 1;
  double eta = 0.0;  // resolved; step_size_auto provides the default rule
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::optional<double> clip;  // clipped_sgd threshold tau
};

/// Error trajectory of a run. Checkpoints are geometrically spaced t in
/// {1, 2, 4, ...} plus the final T, with error f(xbar_t) - f* computed from
/// the deterministic objective.
struct Trace {
  Vec x_bar;
  std::vector<std::pair<long, double>> checkpoints;
  double wall_ms = 0.0;

  double final_error() const { return checkpoints.back().second; }
};

/// Step size eta = R0^{1/kappa} / sigma * T^{-1/(1+kappa)}.
double step_size_auto(double r0, double sigma, double kappa, long iterations);

/// Mirror descent: y = grad Psi*(grad Psi(x) - eta g), then Bregman
/// projection onto the box. The reported average is over x_0 .. x_{T-1}.
Trace smd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng);

/// Euclidean baseline: x <- clamp(x - eta g) (clamp is the exact Euclidean
/// projection onto the box).
Trace sgd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng);

/// SGD with g scaled by min{1, tau / ||g||_2} before the step.
Trace clipped_sgd_run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng);

Trace run(const RunConfig& cfg, const OracleHandle& oracle, SeededRng& rng);

/// Unprojected mirror step grad Psi*(grad Psi(x) - eta g). Its norm grows
/// only like ||g||^kappa for large gradients, the mechanism that makes the
/// method indifferent to heavy-tailed spikes.
Vec single_step_response(const MirrorMap& map, const Eigen::Ref<const Vec>& x,
                         const DualVec& g, double eta);

/// Closed form of the same step for the p = 2 family,
///   (x ||x||^{1/kappa - 1} - eta/10^{1/kappa} g) / ||...||^{1 - kappa},
/// kept as an independent code path for cross-checking the generic one.
Vec closed_form_step_p2(const Eigen::Ref<const Vec>& x, const DualVec& g, double eta,
                        double kappa);

}  // namespace smd

#endif  // SMD_SOLVERS_HPP
