#ifndef LIEADAPT_EXPERIMENTS_HPP
#define LIEADAPT_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lieadapt/adaptive.hpp"

namespace lieadapt {

/// Per-cell seed: base xor a 64-bit mix of (trial, n).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial,
                          std::uint64_t n);

struct SweepConfig {
  int n_trials = 50;
  std::vector<int> grid = {200, 400, 600, 800, 1000,
                           1200, 1400, 1600, 1800, 2000};
  AdaptiveConfig adaptive;
  InertialParams truth = InertialParams::ReferenceBody();
  PerturbationConfig perturbation;
  std::uint64_t base_seed = 0;
  // Tracking evaluation of the reconstructed controller in every cell.
  BodyState eval_initial_state{Pose(Mat3::Identity(), Vec3(0.4, 0.0, 0.0)),
                               Twist()};
  std::int64_t eval_horizon_steps = 1000;
  // Worker threads; <= 0 uses the hardware concurrency.
  int jobs = 1;
};

struct SweepRow {
  int n;
  int trial;
  double e_Ib;
  double e_m;
  double id_time_s;
  double e_p;
  double e_R;
  double e_w;
  double e_v;
};

struct SweepFailure {
  int n;
  int trial;
  std::string reason;
};

/// Rows and failures are ordered by (trial, n) whatever the job count.
struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> failures;

  std::size_t cells() const { return rows.size() + failures.size(); }
};

/// For each trial draws one nominal perturbation, then runs the adaptive
/// scheme for every N in the grid. A failing cell is recorded, not thrown.
SweepResult monte_carlo_sweep(const SweepConfig& cfg);

struct ColumnStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single row
};

struct AggregateRow {
  int n;
  int count;
  ColumnStats e_Ib;
  ColumnStats e_m;
  ColumnStats id_time_s;
  ColumnStats e_p;
  ColumnStats e_R;
  ColumnStats e_w;
  ColumnStats e_v;
};

/// Groups rows by N (ascending).
std::vector<AggregateRow> aggregate(std::span<const SweepRow> rows);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);
void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows);
void write_failures_csv(std::ostream& os,
                        std::span<const SweepFailure> failures);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x,
                            std::span<const double> y);

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lieadapt

#endif  // LIEADAPT_EXPERIMENTS_HPP
