#include "lieadapt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

namespace lieadapt {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Cell {
  int trial;
  int n;
};

using CellOutcome = std::variant<SweepRow, SweepFailure>;

CellOutcome run_cell(const SweepConfig& cfg, const InertialParams& nominal,
                     const Cell& cell) {
  try {
    AdaptiveConfig ac = cfg.adaptive;
    ac.n_samples = cell.n;
    ac.seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(cell.trial),
                          static_cast<std::uint64_t>(cell.n));
    const AdaptiveResult res = run_algorithm1(cfg.truth, nominal, ac);
    const ParamErrors pe =
        reconstruction_errors(res.reconstruction.params, cfg.truth);
    const TrackingMetrics tm =
        evaluate_tracking(res.reconstruction.params, cfg.truth,
                          cfg.eval_horizon_steps, cfg.eval_initial_state, ac);
    return SweepRow{cell.n,     cell.trial, pe.inertia, pe.mass,
                    res.fit_seconds, tm.e_p, tm.e_R,    tm.e_w,
                    tm.e_v};
  } catch (const std::exception& e) {
    return SweepFailure{cell.n, cell.trial, e.what()};
  }
}

ColumnStats stats(const std::vector<double>& v) {
  ColumnStats s;
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial,
                          std::uint64_t n) {
  return base ^ splitmix64(splitmix64(trial) ^ n);
}

SweepResult monte_carlo_sweep(const SweepConfig& cfg) {
  if (cfg.n_trials < 1) {
    throw std::invalid_argument("monte_carlo_sweep: n_trials must be >= 1");
  }
  if (cfg.grid.empty()) {
    throw std::invalid_argument("monte_carlo_sweep: grid is empty");
  }
  for (int n : cfg.grid) {
    if (n < 18) {
      throw std::invalid_argument("monte_carlo_sweep: grid entries must be >= 18");
    }
  }

  // Nominal parameters depend only on the trial.
  std::vector<InertialParams> nominal;
  nominal.reserve(cfg.n_trials);
  for (int t = 0; t < cfg.n_trials; ++t) {
    nominal.push_back(perturb_params(
        cfg.truth, cfg.perturbation,
        derive_seed(cfg.base_seed, static_cast<std::uint64_t>(t), 0)));
  }

  std::vector<Cell> cells;
  for (int t = 0; t < cfg.n_trials; ++t) {
    for (int n : cfg.grid) cells.push_back({t, n});
  }
  std::vector<std::optional<CellOutcome>> outcomes(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      outcomes[i] = run_cell(cfg, nominal[cells[i].trial], cells[i]);
    }
  };
  int jobs = cfg.jobs > 0 ? cfg.jobs
                          : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, static_cast<int>(cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  SweepResult out;
  for (auto& o : outcomes) {
    if (auto* row = std::get_if<SweepRow>(&*o)) {
      out.rows.push_back(*row);
    } else {
      out.failures.push_back(std::get<SweepFailure>(*o));
    }
  }
  return out;
}

std::vector<AggregateRow> aggregate(std::span<const SweepRow> rows) {
  std::map<int, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) groups[r.n].push_back(&r);

  std::vector<AggregateRow> out;
  for (const auto& [n, group] : groups) {
    auto column = [&](double SweepRow::*field) {
      std::vector<double> v;
      v.reserve(group.size());
      for (const SweepRow* r : group) v.push_back(r->*field);
      return stats(v);
    };
    out.push_back({n, static_cast<int>(group.size()), column(&SweepRow::e_Ib),
                   column(&SweepRow::e_m), column(&SweepRow::id_time_s),
                   column(&SweepRow::e_p), column(&SweepRow::e_R),
                   column(&SweepRow::e_w), column(&SweepRow::e_v)});
  }
  return out;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "N,trial,e_Ib,e_m,id_time_s,e_p,e_R,e_w,e_v\n";
  const auto old = os.precision(17);
  for (const auto& r : rows) {
    os << r.n << ',' << r.trial << ',' << r.e_Ib << ',' << r.e_m << ','
       << r.id_time_s << ',' << r.e_p << ',' << r.e_R << ',' << r.e_w << ','
       << r.e_v << '\n';
  }
  os.precision(old);
}

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("N,trial,", 0) != 0) {
    throw std::invalid_argument("read_sweep_csv: missing header");
  }
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) {
      throw std::invalid_argument("read_sweep_csv: expected 9 columns");
    }
    rows.push_back({std::stoi(cells[0]), std::stoi(cells[1]),
                    std::stod(cells[2]), std::stod(cells[3]),
                    std::stod(cells[4]), std::stod(cells[5]),
                    std::stod(cells[6]), std::stod(cells[7]),
                    std::stod(cells[8])});
  }
  return rows;
}

void write_aggregate_csv(std::ostream& os,
                         std::span<const AggregateRow> rows) {
  os << "N,mean_e_Ib,std_e_Ib,mean_e_m,std_e_m,mean_time_s\n";
  const auto old = os.precision(17);
  for (const auto& r : rows) {
    os << r.n << ',' << r.e_Ib.mean << ',' << r.e_Ib.std << ',' << r.e_m.mean
       << ',' << r.e_m.std << ',' << r.id_time_s.mean << '\n';
  }
  os.precision(old);
}

void write_failures_csv(std::ostream& os,
                        std::span<const SweepFailure> failures) {
  os << "N,trial,reason\n";
  for (const auto& f : failures) {
    std::string reason = f.reason;
    std::replace(reason.begin(), reason.end(), '"', '\'');
    os << f.n << ',' << f.trial << ",\"" << reason << "\"\n";
  }
}

double spearman_correlation(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman_correlation: need two equal series");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  return pearson(rx, ry);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need two equal series");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double ss_res = syy - slope * sxy;
  return {slope, my - slope * mx, syy > 0.0 ? 1.0 - ss_res / syy : 1.0};
}

}  // namespace lieadapt
