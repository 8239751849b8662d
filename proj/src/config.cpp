#include "lieadapt/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace lieadapt {

ConfigError::ConfigError(const std::string& source, int line,
                         const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg),
      line_(line) {}

InertialParams RunConfig::truth() const { return InertialParams(mass, inertia); }

Twist RunConfig::reference_twist() const { return Twist(omega_d, vel_d); }

BodyState RunConfig::initial_state() const {
  return {Pose(exp_so3(initial_rotation), initial_position),
          Twist(initial_omega, initial_vel)};
}

std::int64_t RunConfig::horizon_steps() const {
  return static_cast<std::int64_t>(std::llround(horizon_s / dt));
}

AdaptiveConfig RunConfig::adaptive() const {
  AdaptiveConfig a;
  a.n_samples = n_samples;
  a.noise_std = noise_std;
  a.lambda = lambda;
  a.dt = dt;
  a.q = q_diag.asDiagonal();
  a.r = r_diag.asDiagonal();
  a.seed = seed;
  a.zeta_d = reference_twist();
  a.input_mode = input_mode;
  a.plant = plant;
  a.feedforward = feedforward;
  a.timing_repeats = timing_repeats;
  return a;
}

SweepConfig RunConfig::sweep() const {
  SweepConfig s;
  s.n_trials = trials;
  s.grid = grid;
  s.adaptive = adaptive();
  s.truth = truth();
  s.perturbation = perturbation;
  s.base_seed = seed;
  s.eval_initial_state = initial_state();
  s.eval_horizon_steps = horizon_steps();
  s.jobs = jobs;
  return s;
}

namespace {

struct Value {
  enum class Kind { kScalar, kString, kArray } kind;
  std::string text;                // scalar or string payload
  std::vector<std::string> items;  // array elements
  int line;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, int line) {
  if (raw.empty()) throw std::invalid_argument("missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw std::invalid_argument("unterminated string");
    }
    return {Value::Kind::kString, raw.substr(1, raw.size() - 2), {}, line};
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw std::invalid_argument("unterminated array");
    Value v{Value::Kind::kArray, raw, {}, line};
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) {
        if (ss.eof()) break;  // trailing comma
        throw std::invalid_argument("empty array element");
      }
      v.items.push_back(item);
    }
    return v;
  }
  return {Value::Kind::kScalar, raw, {}, line};
}

double to_double(const std::string& s) {
  double out = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int out = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return out;
}

double as_double(const Value& v) {
  if (v.kind != Value::Kind::kScalar) {
    throw std::invalid_argument("expected a number");
  }
  return to_double(v.text);
}

template <typename Int>
Int as_int(const Value& v) {
  if (v.kind != Value::Kind::kScalar) {
    throw std::invalid_argument("expected an integer");
  }
  return to_int<Int>(v.text);
}

std::string as_string(const Value& v) {
  if (v.kind != Value::Kind::kString) {
    throw std::invalid_argument("expected a quoted string");
  }
  return v.text;
}

Eigen::VectorXd as_vector(const Value& v, Eigen::Index size,
                          bool allow_scalar = false) {
  if (allow_scalar && v.kind == Value::Kind::kScalar) {
    return Eigen::VectorXd::Constant(size, to_double(v.text));
  }
  if (v.kind != Value::Kind::kArray) {
    throw std::invalid_argument("expected an array");
  }
  if (static_cast<Eigen::Index>(v.items.size()) != size) {
    throw std::invalid_argument("expected " + std::to_string(size) +
                                " entries, got " +
                                std::to_string(v.items.size()));
  }
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = to_double(v.items[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const Value&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"body.mass", [](RunConfig& c, const Value& v) { c.mass = as_double(v); }},
      {"body.inertia",
       [](RunConfig& c, const Value& v) {
         const Eigen::VectorXd e = as_vector(v, 9);
         for (int i = 0; i < 9; ++i) c.inertia(i / 3, i % 3) = e(i);
       }},
      {"reference.omega",
       [](RunConfig& c, const Value& v) { c.omega_d = as_vector(v, 3); }},
      {"reference.vel",
       [](RunConfig& c, const Value& v) { c.vel_d = as_vector(v, 3); }},
      {"reference.input_mode",
       [](RunConfig& c, const Value& v) {
         const std::string s = as_string(v);
         if (s == "exact") {
           c.input_mode = ReferenceInputMode::kExact;
         } else if (s == "force_only") {
           c.input_mode = ReferenceInputMode::kForceOnly;
         } else {
           throw std::invalid_argument(
               "input_mode must be \"exact\" or \"force_only\"");
         }
       }},
      {"reference.feedforward",
       [](RunConfig& c, const Value& v) {
         const std::string s = as_string(v);
         if (s == "controller") {
           c.feedforward = FeedforwardSource::kController;
         } else if (s == "true") {
           c.feedforward = FeedforwardSource::kTrue;
         } else {
           throw std::invalid_argument(
               "feedforward must be \"controller\" or \"true\"");
         }
       }},
      {"perturbation.spread",
       [](RunConfig& c, const Value& v) { c.perturbation.spread = as_double(v); }},
      {"perturbation.scale",
       [](RunConfig& c, const Value& v) { c.perturbation.scale = as_double(v); }},
      {"perturbation.mass_fraction",
       [](RunConfig& c, const Value& v) {
         c.perturbation.mass_fraction = as_double(v);
       }},
      {"controller.q_diag",
       [](RunConfig& c, const Value& v) { c.q_diag = as_vector(v, 12, true); }},
      {"controller.r_diag",
       [](RunConfig& c, const Value& v) { c.r_diag = as_vector(v, 6, true); }},
      {"identification.n_samples",
       [](RunConfig& c, const Value& v) { c.n_samples = as_int<int>(v); }},
      {"identification.noise_std",
       [](RunConfig& c, const Value& v) { c.noise_std = as_vector(v, 6, true); }},
      {"identification.lambda",
       [](RunConfig& c, const Value& v) { c.lambda = as_double(v); }},
      {"identification.plant",
       [](RunConfig& c, const Value& v) {
         const std::string s = as_string(v);
         if (s == "nonlinear") {
           c.plant = PlantMode::kNonlinear;
         } else if (s == "linear") {
           c.plant = PlantMode::kLinear;
         } else {
           throw std::invalid_argument("plant must be \"nonlinear\" or \"linear\"");
         }
       }},
      {"identification.timing_repeats",
       [](RunConfig& c, const Value& v) { c.timing_repeats = as_int<int>(v); }},
      {"simulation.dt", [](RunConfig& c, const Value& v) { c.dt = as_double(v); }},
      {"simulation.horizon",
       [](RunConfig& c, const Value& v) { c.horizon_s = as_double(v); }},
      {"simulation.initial_position",
       [](RunConfig& c, const Value& v) { c.initial_position = as_vector(v, 3); }},
      {"simulation.initial_rotation",
       [](RunConfig& c, const Value& v) { c.initial_rotation = as_vector(v, 3); }},
      {"simulation.initial_omega",
       [](RunConfig& c, const Value& v) { c.initial_omega = as_vector(v, 3); }},
      {"simulation.initial_vel",
       [](RunConfig& c, const Value& v) { c.initial_vel = as_vector(v, 3); }},
      {"sweep.trials",
       [](RunConfig& c, const Value& v) { c.trials = as_int<int>(v); }},
      {"sweep.grid",
       [](RunConfig& c, const Value& v) {
         if (v.kind != Value::Kind::kArray || v.items.empty()) {
           throw std::invalid_argument("grid must be a non-empty array");
         }
         c.grid.clear();
         for (const auto& item : v.items) c.grid.push_back(to_int<int>(item));
       }},
      {"run.seed",
       [](RunConfig& c, const Value& v) { c.seed = as_int<std::uint64_t>(v); }},
      {"run.jobs", [](RunConfig& c, const Value& v) { c.jobs = as_int<int>(v); }},
      {"run.out", [](RunConfig& c, const Value& v) { c.out = as_string(v); }},
  };
  return table;
}

// Checks invariants; lines maps keys to the line that set them (0 = default).
void validate(const RunConfig& c, const std::map<std::string, int>& lines,
              const std::string& source) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = lines.find(key);
    throw ConfigError(source, it == lines.end() ? 0 : it->second,
                      key + ": " + msg);
  };
  if (!(c.mass > 0.0)) fail("body.mass", "must be positive");
  try {
    (void)c.truth();
  } catch (const std::invalid_argument& e) {
    fail("body.inertia", e.what());
  }
  if (c.perturbation.spread < 0.0) fail("perturbation.spread", "must be >= 0");
  if (c.perturbation.scale < 0.0) fail("perturbation.scale", "must be >= 0");
  if (c.perturbation.mass_fraction < 0.0) {
    fail("perturbation.mass_fraction", "must be >= 0");
  }
  if ((c.q_diag.array() < 0.0).any()) fail("controller.q_diag", "must be >= 0");
  if (!(c.r_diag.array() > 0.0).all()) fail("controller.r_diag", "must be > 0");
  if (c.n_samples < 18) fail("identification.n_samples", "must be >= 18");
  if ((c.noise_std.array() < 0.0).any()) {
    fail("identification.noise_std", "must be >= 0");
  }
  if (c.lambda < 0.0) fail("identification.lambda", "must be >= 0");
  if (c.timing_repeats < 1) fail("identification.timing_repeats", "must be >= 1");
  if (!(c.dt > 0.0)) fail("simulation.dt", "must be positive");
  if (c.horizon_s < 0.0) fail("simulation.horizon", "must be >= 0");
  if (c.trials < 1) fail("sweep.trials", "must be >= 1");
  for (int n : c.grid) {
    if (n < 18) fail("sweep.grid", "entries must be >= 18");
  }
  if (c.jobs < 0) fail("run.jobs", "must be >= 0");
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::map<std::string, int> lines;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError(source, line_no, "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) {
      throw ConfigError(source, line_no, "unknown key '" + full + "'");
    }
    if (lines.contains(full)) {
      throw ConfigError(source, line_no, "duplicate key '" + full + "'");
    }
    try {
      it->second(cfg, parse_value(trim(line.substr(eq + 1)), line_no));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, full + ": " + e.what());
    } catch (const std::out_of_range& e) {
      throw ConfigError(source, line_no, full + ": value out of range");
    }
    lines[full] = line_no;
  }
  validate(cfg, lines, source);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  return parse_config(in, path.string());
}

namespace {

template <typename Vec>
std::string array_text(const Vec& v) {
  std::ostringstream os;
  os << std::setprecision(17) << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << (i ? ", " : "") << v(i);
  }
  os << ']';
  return os.str();
}

}  // namespace

void write_config(std::ostream& os, const RunConfig& c) {
  const auto old = os.precision(17);
  Eigen::Matrix<double, 9, 1> inertia;
  for (int i = 0; i < 9; ++i) inertia(i) = c.inertia(i / 3, i % 3);
  os << "[body]\n"
     << "mass = " << c.mass << "\n"
     << "inertia = " << array_text(inertia) << "\n\n"
     << "[reference]\n"
     << "omega = " << array_text(c.omega_d) << "\n"
     << "vel = " << array_text(c.vel_d) << "\n"
     << "input_mode = \""
     << (c.input_mode == ReferenceInputMode::kExact ? "exact" : "force_only")
     << "\"\n"
     << "feedforward = \""
     << (c.feedforward == FeedforwardSource::kController ? "controller"
                                                          : "true")
     << "\"\n\n"
     << "[perturbation]\n"
     << "spread = " << c.perturbation.spread << "\n"
     << "scale = " << c.perturbation.scale << "\n"
     << "mass_fraction = " << c.perturbation.mass_fraction << "\n\n"
     << "[controller]\n"
     << "q_diag = " << array_text(c.q_diag) << "\n"
     << "r_diag = " << array_text(c.r_diag) << "\n\n"
     << "[identification]\n"
     << "n_samples = " << c.n_samples << "\n"
     << "noise_std = " << array_text(c.noise_std) << "\n"
     << "lambda = " << c.lambda << "\n"
     << "plant = \""
     << (c.plant == PlantMode::kNonlinear ? "nonlinear" : "linear") << "\"\n"
     << "timing_repeats = " << c.timing_repeats << "\n\n"
     << "[simulation]\n"
     << "dt = " << c.dt << "\n"
     << "horizon = " << c.horizon_s << "\n"
     << "initial_position = " << array_text(c.initial_position) << "\n"
     << "initial_rotation = " << array_text(c.initial_rotation) << "\n"
     << "initial_omega = " << array_text(c.initial_omega) << "\n"
     << "initial_vel = " << array_text(c.initial_vel) << "\n\n"
     << "[sweep]\n"
     << "trials = " << c.trials << "\n"
     << "grid = [";
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    os << (i ? ", " : "") << c.grid[i];
  }
  os << "]\n\n"
     << "[run]\n"
     << "seed = " << c.seed << "\n"
     << "jobs = " << c.jobs << "\n"
     << "out = \"" << c.out << "\"\n";
  os.precision(old);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.mass == b.mass && a.inertia == b.inertia && a.omega_d == b.omega_d &&
         a.vel_d == b.vel_d && a.input_mode == b.input_mode &&
         a.feedforward == b.feedforward &&
         a.perturbation.spread == b.perturbation.spread &&
         a.perturbation.scale == b.perturbation.scale &&
         a.perturbation.mass_fraction == b.perturbation.mass_fraction &&
         a.q_diag == b.q_diag && a.r_diag == b.r_diag &&
         a.n_samples == b.n_samples && a.noise_std == b.noise_std &&
         a.lambda == b.lambda && a.plant == b.plant &&
         a.timing_repeats == b.timing_repeats && a.dt == b.dt &&
         a.horizon_s == b.horizon_s &&
         a.initial_position == b.initial_position &&
         a.initial_rotation == b.initial_rotation &&
         a.initial_omega == b.initial_omega &&
         a.initial_vel == b.initial_vel && a.trials == b.trials &&
         a.grid == b.grid && a.seed == b.seed && a.jobs == b.jobs &&
         a.out == b.out;
}

}  // namespace lieadapt
