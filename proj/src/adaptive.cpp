#include "lieadapt/adaptive.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <limits>
#include <random>
#include <string>

namespace lieadapt {

DivergenceError::DivergenceError(std::int64_t step, double norm)
    : std::runtime_error("closed-loop rollout diverged at step " +
                         std::to_string(step) + " (|x| = " +
                         std::to_string(norm) + ")"),
      step_(step) {}

ExcitationError::ExcitationError(double condition)
    : std::runtime_error(
          "collected data is not persistently exciting (Gram condition " +
          std::to_string(condition) +
          "); increase the exploration noise or the initial error"),
      condition_(condition) {}

Twist benchmark_reference_twist() {
  return Twist(Vec3(0.0, 0.0, 1.0), Vec3(2.0, 0.0, 0.2));
}

Mat12 default_state_weight() {
  Mat12 q = Mat12::Zero();
  q.diagonal() << Vec6::Constant(100.0), Vec6::Constant(10.0);
  return q;
}

void AdaptiveConfig::validate() const {
  if (n_samples < 18) {
    throw std::invalid_argument("n_samples must be >= 18");
  }
  if (!(noise_std.array() >= 0.0).all() || !noise_std.allFinite()) {
    throw std::invalid_argument("noise_std entries must be finite and >= 0");
  }
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (timing_repeats < 1) {
    throw std::invalid_argument("timing_repeats must be >= 1");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Error state of the nonlinear plant against the closed-form reference.
Vec12 tracking_error(const BodyState& s, const ReferenceSample& ref,
                     std::int64_t k) {
  try {
    return error_state(s, ref.pose, ref.twist).stacked();
  } catch (const BranchCutError&) {
    throw DivergenceError(k, std::numeric_limits<double>::infinity());
  }
}

void check_bounded(const Vec12& x, std::int64_t k) {
  const double n = x.norm();
  if (!(n <= kDivergenceBound)) throw DivergenceError(k, n);
}

BodyState on_reference(const AdaptiveConfig& cfg) {
  return {Pose::Identity(), cfg.zeta_d};
}

}  // namespace

AdaptiveResult run_algorithm1(const InertialParams& true_params,
                              const InertialParams& nominal_params,
                              const AdaptiveConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::int64_t>(cfg.n_samples);
  const ControlInput u_d =
      feasible_reference_input(cfg.zeta_d, true_params, cfg.input_mode);
  const Mat6x12 gain =
      tracking_gain(cfg.zeta_d, nominal_params, cfg.dt, cfg.q, cfg.r);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Vec12> xs;
  std::vector<Vec6> dus;
  xs.reserve(n + 1);
  dus.reserve(n);

  const auto collect_start = Clock::now();
  if (cfg.plant == PlantMode::kLinear) {
    const LinearModel plant = linearize(cfg.zeta_d, true_params, cfg.dt);
    const BodyState s0 = cfg.initial_state.value_or(on_reference(cfg));
    Vec12 x = tracking_error(
        s0, reference_trajectory(cfg.zeta_d, u_d, cfg.dt, 0), 0);
    for (std::int64_t k = 0; k < n; ++k) {
      check_bounded(x, k);
      Vec6 gamma;
      for (int i = 0; i < 6; ++i) gamma(i) = cfg.noise_std(i) * normal(rng);
      const Vec6 du = gain * x + gamma;
      xs.push_back(x);
      dus.push_back(du);
      x = plant.a * x + plant.b * du;
    }
    check_bounded(x, n);
    xs.push_back(x);
  } else {
    BodyState s = cfg.initial_state.value_or(on_reference(cfg));
    for (std::int64_t k = 0; k < n; ++k) {
      const ReferenceSample ref =
          reference_trajectory(cfg.zeta_d, u_d, cfg.dt, k);
      const Vec12 x = tracking_error(s, ref, k);
      check_bounded(x, k);
      Vec6 gamma;
      for (int i = 0; i < 6; ++i) gamma(i) = cfg.noise_std(i) * normal(rng);
      const Vec6 du = gain * x + gamma;
      xs.push_back(x);
      dus.push_back(du);
      s = step(s, u_d + ControlInput(du), true_params, cfg.dt);
    }
    const Vec12 x_n = tracking_error(
        s, reference_trajectory(cfg.zeta_d, u_d, cfg.dt, n), n);
    check_bounded(x_n, n);
    xs.push_back(x_n);
  }
  IdDataset dataset = assemble_dataset(xs, dus);
  const double collect_seconds = seconds_since(collect_start);

  const double cond = gram_condition(dataset);
  if (!(cond < kMaxGramCondition)) throw ExcitationError(cond);

  const auto fit_start = Clock::now();
  IdentifiedModel model = fit_linear_model(dataset, cfg.lambda);
  Reconstruction rec = reconstruct_params(model, cfg.dt);
  for (int rep = 1; rep < cfg.timing_repeats; ++rep) {
    model = fit_linear_model(dataset, cfg.lambda);
    rec = reconstruct_params(model, cfg.dt);
  }
  const double fit_seconds = seconds_since(fit_start) / cfg.timing_repeats;
  return {std::move(rec), std::move(model), std::move(dataset), gain,
          fit_seconds, collect_seconds};
}

TrackingMetrics rollout_tracking(const InertialParams& controller_params,
                                 const InertialParams& true_params,
                                 std::int64_t horizon_steps,
                                 const BodyState& x0,
                                 const AdaptiveConfig& cfg,
                                 std::vector<TrajectorySample>* log) {
  if (horizon_steps < 0) {
    throw std::invalid_argument("horizon_steps must be >= 0");
  }
  TrackingMetrics m;
  if (log != nullptr) {
    log->clear();
    log->reserve(static_cast<std::size_t>(horizon_steps));
  }
  if (horizon_steps == 0) return m;

  const Mat6x12 k_gain =
      tracking_gain(cfg.zeta_d, controller_params, cfg.dt, cfg.q, cfg.r);
  const ControlInput u_d = feasible_reference_input(
      cfg.zeta_d,
      cfg.feedforward == FeedforwardSource::kController ? controller_params
                                                        : true_params,
      cfg.input_mode);

  BodyState s = x0;
  for (std::int64_t k = 0; k < horizon_steps; ++k) {
    const ReferenceSample ref =
        reference_trajectory(cfg.zeta_d, u_d, cfg.dt, k);
    const Vec12 x = tracking_error(s, ref, k);
    check_bounded(x, k);

    m.e_p += (s.pose.pos() - ref.pose.pos()).norm();
    m.e_R += log_so3(ref.pose.rot().transpose() * s.pose.rot()).norm();
    m.e_w += (s.twist.omega() - ref.twist.omega()).norm();
    m.e_v += (s.twist.vel() - ref.twist.vel()).norm();
    if (log != nullptr) {
      log->push_back({static_cast<double>(k) * cfg.dt, s, ref});
    }
    s = step(s, u_d + ControlInput(k_gain * x), true_params, cfg.dt);
  }
  const double h = static_cast<double>(horizon_steps);
  m.e_p /= h;
  m.e_R /= h;
  m.e_w /= h;
  m.e_v /= h;
  return m;
}

TrackingMetrics evaluate_tracking(const InertialParams& controller_params,
                                  const InertialParams& true_params,
                                  std::int64_t horizon_steps,
                                  const BodyState& x0,
                                  const AdaptiveConfig& cfg) {
  if (horizon_steps < 1) {
    throw std::invalid_argument("evaluate_tracking: horizon must be >= 1");
  }
  return rollout_tracking(controller_params, true_params, horizon_steps, x0,
                          cfg);
}

}  // namespace lieadapt
