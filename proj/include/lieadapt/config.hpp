#ifndef LIEADAPT_CONFIG_HPP
#define LIEADAPT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieadapt/experiments.hpp"

namespace lieadapt {

/// Parse or validation failure; what() carries "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

/// Everything a CLI run needs. Defaults reproduce the benchmark scenario.
struct RunConfig {
  // [body]
  double mass = 2.0;
  Mat3 inertia = InertialParams::ReferenceBody().inertia();
  // [reference]
  Vec3 omega_d = Vec3(0.0, 0.0, 1.0);
  Vec3 vel_d = Vec3(2.0, 0.0, 0.2);
  ReferenceInputMode input_mode = ReferenceInputMode::kExact;
  FeedforwardSource feedforward = FeedforwardSource::kController;
  // [perturbation]
  PerturbationConfig perturbation;
  // [controller]
  Eigen::Matrix<double, 12, 1> q_diag = default_state_weight().diagonal();
  Vec6 r_diag = Vec6::Ones();
  // [identification]
  int n_samples = 1500;
  Vec6 noise_std = Vec6::Constant(0.1);
  double lambda = 1e-6;
  PlantMode plant = PlantMode::kNonlinear;
  int timing_repeats = 1;
  // [simulation]
  double dt = 0.01;
  double horizon_s = 10.0;
  Vec3 initial_position = Vec3(0.4, 0.0, 0.0);
  Vec3 initial_rotation = Vec3::Zero();  // rotation vector
  Vec3 initial_omega = Vec3::Zero();
  Vec3 initial_vel = Vec3::Zero();
  // [sweep]
  int trials = 50;
  std::vector<int> grid = {200, 400, 600, 800, 1000,
                           1200, 1400, 1600, 1800, 2000};
  // [run]
  std::uint64_t seed = 0;
  int jobs = 0;  // 0: hardware concurrency
  std::string out = "out";

  InertialParams truth() const;
  Twist reference_twist() const;
  BodyState initial_state() const;
  std::int64_t horizon_steps() const;
  AdaptiveConfig adaptive() const;
  SweepConfig sweep() const;
};

/// Parses the TOML-style subset: [section] headers, key = value with numbers,
/// booleans, "strings" and single-line [arrays]; '#' starts a comment.
/// Unknown keys and violated invariants are errors. source names the input
/// in diagnostics.
RunConfig parse_config(std::istream& is, const std::string& source);
RunConfig load_config(const std::filesystem::path& path);

/// Writes every key with 17 significant digits; parse_config reads it back
/// to an identical RunConfig.
void write_config(std::ostream& os, const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace lieadapt

#endif  // LIEADAPT_CONFIG_HPP
