#ifndef LIEADAPT_ADAPTIVE_HPP
#define LIEADAPT_ADAPTIVE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lieadapt/lqr.hpp"
#include "lieadapt/sysid.hpp"

namespace lieadapt {

/// Closed-loop rollout left the region where the error state is meaningful:
/// ||x|| > kDivergenceBound or the pose error hit the log branch cut.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t step, double norm);
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

/// Collected data does not excite all 18 regressor directions.
class ExcitationError : public std::runtime_error {
 public:
  explicit ExcitationError(double condition);
  double condition() const { return condition_; }

 private:
  double condition_;
};

inline constexpr double kDivergenceBound = 1e3;
inline constexpr double kMaxGramCondition = 1e12;

enum class PlantMode {
  kNonlinear,  // rigid body simulator
  kLinear,     // exact discrete linear error model of the true parameters
};

/// Benchmark reference twist: w_d = (0, 0, 1), v_d = (2, 0, 0.2).
Twist benchmark_reference_twist();

/// blkdiag(100 I_6, 10 I_6): pose error weighted over twist error.
Mat12 default_state_weight();

/// Which parameters the tracking controller uses for its feedforward u_d.
enum class FeedforwardSource {
  kController,  // the controller's own (nominal or reconstructed) parameters
  kTrue,        // the plant's true parameters
};

struct AdaptiveConfig {
  int n_samples = 1500;
  Vec6 noise_std = Vec6::Constant(0.1);
  double lambda = 1e-6;
  double dt = 0.01;
  Mat12 q = default_state_weight();
  Mat6 r = Mat6::Identity();
  std::uint64_t seed = 0;
  Twist zeta_d = benchmark_reference_twist();
  ReferenceInputMode input_mode = ReferenceInputMode::kExact;
  PlantMode plant = PlantMode::kNonlinear;
  // Feedforward used by rollout_tracking. Data collection always applies
  // the reference input of the true parameters.
  FeedforwardSource feedforward = FeedforwardSource::kController;
  // Starting state of the data-collection rollout; on-reference when unset.
  std::optional<BodyState> initial_state;
  // The identification phase is timed as the mean over this many runs.
  int timing_repeats = 1;

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

struct AdaptiveResult {
  Reconstruction reconstruction;
  IdentifiedModel model;
  IdDataset dataset;
  Mat6x12 initial_gain;
  double fit_seconds = 0.0;      // fit_linear_model + reconstruct_params
  double collect_seconds = 0.0;  // closed-loop data collection
};

/// One pass of the adaptive scheme: LQR gain from the nominal model,
/// excitation u_k = K x_k + u_d + gamma_k on the true plant for N steps,
/// ridge regression on (x, du) and reconstruction of (I_b, m).
AdaptiveResult run_algorithm1(const InertialParams& true_params,
                              const InertialParams& nominal_params,
                              const AdaptiveConfig& cfg);

struct TrackingMetrics {
  double e_p = 0.0;
  double e_R = 0.0;
  double e_w = 0.0;
  double e_v = 0.0;
};

struct TrajectorySample {
  double t;
  BodyState state;
  ReferenceSample reference;
};

/// Tracking rollout on the true plant with u = u_d + K x, K from the DARE of
/// the controller's parameters and u_d chosen by cfg.feedforward. Metrics
/// are means over steps k = 0..H-1 of ||p - p_d||, ||log(R_d^T R)||,
/// ||w - w_d|| and ||v - v_d||. When log is given it receives the same H
/// samples. horizon_steps = 0 is allowed here and yields zero metrics.
TrackingMetrics rollout_tracking(const InertialParams& controller_params,
                                 const InertialParams& true_params,
                                 std::int64_t horizon_steps,
                                 const BodyState& x0,
                                 const AdaptiveConfig& cfg,
                                 std::vector<TrajectorySample>* log = nullptr);

/// rollout_tracking with horizon_steps >= 1 enforced.
TrackingMetrics evaluate_tracking(const InertialParams& controller_params,
                                  const InertialParams& true_params,
                                  std::int64_t horizon_steps,
                                  const BodyState& x0,
                                  const AdaptiveConfig& cfg);

}  // namespace lieadapt

#endif  // LIEADAPT_ADAPTIVE_HPP
