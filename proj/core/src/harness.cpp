#include "rmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "rmc/errors.hpp"
#include "rmc/matrix_io.hpp"
#include "rmc/random.hpp"

namespace rmc {

namespace {

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : format_real(x);
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string canonical_algorithm(std::string_view name) {
  if (name == "soft" || name == "rmc-soft") return "soft";
  if (name == "scad" || name == "rmc-scad") return "scad";
  if (name == "hard" || name == "rrmc") return "rrmc";
  throw ParameterError("unknown algorithm '" + std::string(name) + "' (soft|scad|rrmc)");
}

bool is_integer(double v) { return std::floor(v) == v; }

void check_axis_value(Axis axis, double v, Index max_rank) {
  switch (axis) {
    case Axis::P:
      if (!(v > 0.0 && v <= 1.0)) throw ParameterError("p values must lie in (0, 1]");
      break;
    case Axis::R:
      if (!is_integer(v) || v < 1.0 || v > static_cast<double>(max_rank)) {
        throw ParameterError("r values must be integers in [1, min(n1, n2)]");
      }
      break;
    case Axis::Alpha:
      if (!(v >= 0.0 && v < 1.0)) throw ParameterError("alpha values must lie in [0, 1)");
      break;
  }
}

}  // namespace

const char* to_string(Axis a) {
  switch (a) {
    case Axis::P: return "p";
    case Axis::R: return "r";
    case Axis::Alpha: return "alpha";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "p") return Axis::P;
  if (name == "r") return Axis::R;
  if (name == "alpha") return Axis::Alpha;
  throw ParameterError("unknown axis '" + std::string(name) + "' (p|r|alpha)");
}

void ExperimentGrid::validate() const {
  if (n1 < 1 || n2 < 1) throw DimensionError("grid: n1 and n2 must be positive");
  if (axis1.axis == axis2.axis) throw ParameterError("grid: axis1 and axis2 must differ");
  const Index max_rank = std::min(n1, n2);
  for (const AxisSpec* spec : {&axis1, &axis2}) {
    if (spec->values.empty()) {
      throw ParameterError(std::string("grid: no values for axis ") + to_string(spec->axis));
    }
    for (std::size_t i = 0; i < spec->values.size(); ++i) {
      check_axis_value(spec->axis, spec->values[i], max_rank);
      if (i > 0 && !(spec->values[i] > spec->values[i - 1])) {
        throw ParameterError(std::string("grid: values of axis ") + to_string(spec->axis) +
                             " must be strictly increasing");
      }
    }
  }
  auto on_axis = [&](Axis a) { return axis1.axis == a || axis2.axis == a; };
  if (!on_axis(Axis::P)) check_axis_value(Axis::P, fixed_p, max_rank);
  if (!on_axis(Axis::R)) check_axis_value(Axis::R, static_cast<double>(fixed_r), max_rank);
  if (!on_axis(Axis::Alpha)) check_axis_value(Axis::Alpha, fixed_alpha, max_rank);
  if (trials < 1) throw ParameterError("grid: trials must be positive");
  if (algorithms.empty()) throw ParameterError("grid: no algorithms");
  std::set<std::string> seen;
  for (const auto& a : algorithms) {
    if (!seen.insert(canonical_algorithm(a)).second) {
      throw ParameterError("grid: duplicate algorithm '" + a + "'");
    }
  }
  if (!(success_threshold > 0.0)) throw ParameterError("grid: success_threshold must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ParameterError("grid: gamma must lie in (0, 1)");
  if (!(beta_factor > 0.0)) throw ParameterError("grid: beta_factor must be positive");
  if (!(scad_a > 2.0)) throw ParameterError("grid: scad_a must be > 2");
  if (max_iters < 1) throw ParameterError("grid: max_iters must be positive");
  if (!(stop_tol > 0.0)) throw ParameterError("grid: stop_tol must be positive");
}

ExperimentGrid parse_config(std::istream& in, std::string_view source) {
  static const std::set<std::string> kKeys = {
      "n1",          "n2",           "axis1",       "axis1_values",      "axis2",
      "axis2_values", "fixed_p",     "fixed_r",     "fixed_alpha",       "trials",
      "algorithms",  "success_threshold", "base_seed", "gamma",          "beta_factor",
      "scad_a",      "max_iters",    "stop_tol",    "record_timing"};

  detail::LineReader reader(in, source);
  std::map<std::string, std::pair<std::string, int>> kv;
  std::string line;
  while (reader.next(line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(std::string_view(line).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) reader.fail("expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!kKeys.count(key)) reader.fail("unknown key '" + key + "'");
    if (kv.count(key)) reader.fail("duplicate key '" + key + "'");
    if (value.empty()) reader.fail("empty value for '" + key + "'");
    kv[key] = {value, reader.line_number()};
  }

  const std::string src(source);
  auto fail_at = [&](int line_no, const std::string& what) -> void {
    throw ParseError(src + ":" + std::to_string(line_no) + ": " + what);
  };
  auto get = [&](const std::string& key, bool required) -> const std::pair<std::string, int>* {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw ParseError(src + ": missing required key '" + key + "'");
      return nullptr;
    }
    return &it->second;
  };
  auto as_real = [&](const std::pair<std::string, int>& v) {
    double x = 0.0;
    const auto* end = v.first.data() + v.first.size();
    auto [ptr, ec] = std::from_chars(v.first.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
      fail_at(v.second, "expected a number, got '" + v.first + "'");
    }
    return x;
  };
  auto as_int = [&](const std::pair<std::string, int>& v) {
    long long x = 0;
    const auto* end = v.first.data() + v.first.size();
    auto [ptr, ec] = std::from_chars(v.first.data(), end, x);
    if (ec != std::errc() || ptr != end) fail_at(v.second, "expected an integer, got '" + v.first + "'");
    return x;
  };
  auto as_list = [&](const std::pair<std::string, int>& v) {
    std::vector<std::string> items;
    std::stringstream ss(v.first);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail_at(v.second, "empty list item");
      items.push_back(item);
    }
    return items;
  };
  auto as_axis = [&](const std::pair<std::string, int>& v) {
    try {
      return parse_axis(v.first);
    } catch (const ParameterError& e) {
      fail_at(v.second, e.what());
    }
    return Axis::P;
  };

  ExperimentGrid g;
  g.n1 = as_int(*get("n1", true));
  g.n2 = get("n2", false) ? as_int(*get("n2", false)) : g.n1;
  g.axis1.axis = as_axis(*get("axis1", true));
  g.axis2.axis = as_axis(*get("axis2", true));
  for (auto [key, spec] : {std::pair{"axis1_values", &g.axis1}, std::pair{"axis2_values", &g.axis2}}) {
    const auto& v = *get(key, true);
    for (const auto& item : as_list(v)) spec->values.push_back(as_real({item, v.second}));
  }
  auto on_axis = [&](Axis a) { return g.axis1.axis == a || g.axis2.axis == a; };
  const std::pair<const char*, Axis> fixed_keys[] = {
      {"fixed_p", Axis::P}, {"fixed_r", Axis::R}, {"fixed_alpha", Axis::Alpha}};
  for (auto [key, axis] : fixed_keys) {
    const auto* v = get(key, !on_axis(axis));
    if (v && on_axis(axis)) fail_at(v->second, std::string(key) + " conflicts with an axis");
    if (!v) continue;
    if (axis == Axis::P) g.fixed_p = as_real(*v);
    if (axis == Axis::R) g.fixed_r = as_int(*v);
    if (axis == Axis::Alpha) g.fixed_alpha = as_real(*v);
  }
  g.trials = static_cast<int>(as_int(*get("trials", true)));
  {
    const auto& v = *get("algorithms", true);
    for (const auto& item : as_list(v)) {
      try {
        g.algorithms.push_back(canonical_algorithm(item));
      } catch (const ParameterError& e) {
        fail_at(v.second, e.what());
      }
    }
  }
  if (auto* v = get("success_threshold", false)) g.success_threshold = as_real(*v);
  if (auto* v = get("base_seed", false)) g.base_seed = static_cast<std::uint64_t>(as_int(*v));
  if (auto* v = get("gamma", false)) g.gamma = as_real(*v);
  if (auto* v = get("beta_factor", false)) g.beta_factor = as_real(*v);
  if (auto* v = get("scad_a", false)) g.scad_a = as_real(*v);
  if (auto* v = get("max_iters", false)) g.max_iters = static_cast<int>(as_int(*v));
  if (auto* v = get("stop_tol", false)) g.stop_tol = as_real(*v);
  if (auto* v = get("record_timing", false)) {
    if (v->first == "true" || v->first == "1") g.record_timing = true;
    else if (v->first == "false" || v->first == "0") g.record_timing = false;
    else fail_at(v->second, "record_timing must be true or false");
  }
  g.validate();
  return g;
}

ExperimentGrid parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_config(in, path);
}

CellParams cell_params(const ExperimentGrid& grid, std::size_t i1, std::size_t i2) {
  CellParams c{grid.fixed_p, grid.fixed_r, grid.fixed_alpha};
  auto assign = [&](Axis axis, double v) {
    switch (axis) {
      case Axis::P: c.p = v; break;
      case Axis::R: c.r = static_cast<Index>(v); break;
      case Axis::Alpha: c.alpha = v; break;
    }
  };
  assign(grid.axis1.axis, grid.axis1.values.at(i1));
  assign(grid.axis2.axis, grid.axis2.values.at(i2));
  return c;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t algorithm, std::size_t i1,
                         std::size_t i2, std::size_t trial) {
  return derive_seed(base_seed, tag_of("trial"), {algorithm, i1, i2, trial});
}

SolverConfig solver_config_for(const ExperimentGrid& grid, const std::string& algorithm, Index rank) {
  SolverConfig cfg;
  cfg.rank = rank;
  const std::string name = canonical_algorithm(algorithm);
  cfg.kind = name == "scad" ? ThresholdKind::scad(grid.scad_a)
             : name == "rrmc" ? ThresholdKind::hard()
                              : ThresholdKind::soft();
  cfg.beta_mode = BetaMode::Oracle;
  cfg.beta_factor = grid.beta_factor;
  cfg.gamma = grid.gamma;
  cfg.max_iters = grid.max_iters;
  cfg.stop_tol = grid.stop_tol;
  cfg.record_timing = grid.record_timing;
  return cfg;
}

TrialRecord run_trial(const ExperimentGrid& grid, std::size_t algorithm, std::size_t i1,
                      std::size_t i2, std::size_t trial) {
  TrialRecord rec;
  rec.algorithm = algorithm;
  rec.i1 = i1;
  rec.i2 = i2;
  rec.trial = trial;
  rec.seed = trial_seed(grid.base_seed, algorithm, i1, i2, trial);
  try {
    const CellParams c = cell_params(grid, i1, i2);
    const Instance inst = make_instance(grid.n1, grid.n2, c.r, c.p, c.alpha, rec.seed);
    const std::string& name = grid.algorithms.at(algorithm);
    const SolverConfig cfg = solver_config_for(grid, name, c.r);
    const SolveTrace trace = canonical_algorithm(name) == "rrmc"
                                 ? solve_rrmc(inst.data.observations, cfg, &inst.truth)
                                 : solve(inst.data.observations, cfg, &inst.truth);
    rec.termination = trace.termination;
    rec.iterations = trace.iterations;
    rec.wall_ms = trace.final_record().wall_ms;
    rec.rel_inf_error = trace.final_record().rel_inf_error.value_or(INFINITY);
    rec.failure = trace.failure;
    rec.success = trace.termination != Termination::Failed &&
                  rec.rel_inf_error <= grid.success_threshold;
  } catch (const std::exception& e) {
    rec.termination = Termination::Failed;
    rec.failure = e.what();
    rec.success = false;
    rec.rel_inf_error = INFINITY;
  }
  return rec;
}

GridResult run_grid(const ExperimentGrid& grid, const RunOptions& options) {
  grid.validate();
  const std::size_t n_alg = grid.algorithms.size();
  const std::size_t n1 = grid.axis1.values.size();
  const std::size_t n2 = grid.axis2.values.size();
  const std::size_t n_trials = static_cast<std::size_t>(grid.trials);
  const std::size_t total = n_alg * n1 * n2 * n_trials;

  GridResult result;
  result.trials.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      std::size_t rest = task;
      const std::size_t trial = rest % n_trials;
      rest /= n_trials;
      const std::size_t i2 = rest % n2;
      rest /= n2;
      const std::size_t i1 = rest % n1;
      const std::size_t alg = rest / n1;
      result.trials[task] = run_trial(grid, alg, i1, i2, trial);
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  result.cells.resize(n_alg);
  for (std::size_t a = 0; a < n_alg; ++a) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        CellResult cell;
        cell.algorithm = grid.algorithms[a];
        cell.axis1_name = to_string(grid.axis1.axis);
        cell.axis1 = grid.axis1.values[i1];
        cell.axis2_name = to_string(grid.axis2.axis);
        cell.axis2 = grid.axis2.values[i2];
        cell.trials = grid.trials;
        double iters = 0.0;
        double wall = 0.0;
        for (std::size_t t = 0; t < n_trials; ++t) {
          const TrialRecord& rec = result.trials[((a * n1 + i1) * n2 + i2) * n_trials + t];
          if (rec.success) ++cell.successes;
          iters += rec.iterations;
          wall += static_cast<double>(rec.wall_ms);
        }
        cell.success_rate = static_cast<double>(cell.successes) / cell.trials;
        cell.mean_iters = iters / cell.trials;
        cell.mean_wall_ms = wall / cell.trials;
        result.cells[a].push_back(cell);
      }
    }
  }
  for (const TrialRecord& rec : result.trials) {
    if (rec.termination == Termination::Failed) {
      result.log.push_back(grid.algorithms[rec.algorithm] + " cell (" + std::to_string(rec.i1) +
                           ", " + std::to_string(rec.i2) + ") trial " + std::to_string(rec.trial) +
                           " seed " + std::to_string(rec.seed) + ": " + rec.failure);
    }
  }
  return result;
}

void write_csv(std::ostream& out, std::span<const CellResult> results) {
  std::vector<CellResult> rows(results.begin(), results.end());
  std::stable_sort(rows.begin(), rows.end(), [](const CellResult& a, const CellResult& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.axis1 != b.axis1) return a.axis1 < b.axis1;
    return a.axis2 < b.axis2;
  });
  out << "algorithm,axis1_name,axis1,axis2_name,axis2,trials,successes,success_rate,mean_iters,"
         "mean_wall_ms\n";
  for (const CellResult& c : rows) {
    out << c.algorithm << ',' << c.axis1_name << ',' << shortest(c.axis1) << ',' << c.axis2_name
        << ',' << shortest(c.axis2) << ',' << c.trials << ',' << c.successes << ','
        << fixed6(c.success_rate) << ',' << fixed6(c.mean_iters) << ',' << fixed6(c.mean_wall_ms)
        << '\n';
  }
}

void emit_csv(std::span<const CellResult> results, const std::filesystem::path& path) {
  if (results.empty()) throw ParameterError("emit_csv: no results");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out, results);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_pgm(std::ostream& out, std::span<const CellResult> results) {
  std::set<double> xs, ys;
  for (const CellResult& c : results) {
    xs.insert(c.axis1);
    ys.insert(c.axis2);
  }
  const std::vector<double> xv(xs.begin(), xs.end());
  const std::vector<double> yv(ys.begin(), ys.end());
  if (results.empty() || results.size() != xv.size() * yv.size()) {
    throw DimensionError("emit_pgm: results do not form a full rectangular grid");
  }
  std::vector<int> pixels(xv.size() * yv.size(), -1);
  for (const CellResult& c : results) {
    const auto x = static_cast<std::size_t>(std::lower_bound(xv.begin(), xv.end(), c.axis1) - xv.begin());
    const auto y = static_cast<std::size_t>(std::lower_bound(yv.begin(), yv.end(), c.axis2) - yv.begin());
    int& px = pixels[y * xv.size() + x];
    if (px >= 0) throw DimensionError("emit_pgm: duplicate cell in results");
    px = static_cast<int>(std::floor(255.0 * c.success_rate + 0.5));
    px = std::clamp(px, 0, 255);
  }
  out << "P5\n" << xv.size() << ' ' << yv.size() << "\n255\n";
  for (int px : pixels) out.put(static_cast<char>(static_cast<unsigned char>(px)));
}

void emit_pgm(std::span<const CellResult> results, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_pgm(buf, results);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << buf.str();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_phase_outputs(const ExperimentGrid& grid, const std::string& config_text,
                         const GridResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> artifacts;
  for (std::size_t a = 0; a < grid.algorithms.size(); ++a) {
    const auto csv = out_dir / (grid.algorithms[a] + ".csv");
    const auto pgm = out_dir / (grid.algorithms[a] + ".pgm");
    emit_csv(result.cells[a], csv);
    emit_pgm(result.cells[a], pgm);
    artifacts.push_back(csv);
    artifacts.push_back(pgm);
  }

  const auto path = out_dir / "manifest.txt";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "[config]\n" << config_text;
  if (!config_text.empty() && config_text.back() != '\n') out << '\n';
  out << "[effective]\n";
  out << "n1 = " << grid.n1 << "\nn2 = " << grid.n2 << '\n';
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + shortest(v[i]);
    return s;
  };
  out << "axis1 = " << to_string(grid.axis1.axis) << "\naxis1_values = " << list(grid.axis1.values)
      << "\naxis2 = " << to_string(grid.axis2.axis) << "\naxis2_values = " << list(grid.axis2.values)
      << '\n';
  auto swept = [&](Axis a) { return grid.axis1.axis == a || grid.axis2.axis == a; };
  if (!swept(Axis::P)) out << "fixed_p = " << shortest(grid.fixed_p) << '\n';
  if (!swept(Axis::R)) out << "fixed_r = " << grid.fixed_r << '\n';
  if (!swept(Axis::Alpha)) out << "fixed_alpha = " << shortest(grid.fixed_alpha) << '\n';
  out << "trials = " << grid.trials << "\nalgorithms = ";
  for (std::size_t a = 0; a < grid.algorithms.size(); ++a) out << (a ? ", " : "") << grid.algorithms[a];
  out << "\nsuccess_threshold = " << shortest(grid.success_threshold)
      << "\nbase_seed = " << grid.base_seed << "\ngamma = " << shortest(grid.gamma)
      << "\nbeta_factor = " << shortest(grid.beta_factor) << "\nscad_a = " << shortest(grid.scad_a)
      << "\nmax_iters = " << grid.max_iters << "\nstop_tol = " << shortest(grid.stop_tol)
      << "\nrecord_timing = " << (grid.record_timing ? "true" : "false") << '\n';
  out << "[failures]\n";
  for (const auto& line : result.log) out << line << '\n';
  out << "[artifacts]\n";
  for (const auto& a : artifacts) out << a.filename().string() << ' ' << file_checksum(a) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace rmc
