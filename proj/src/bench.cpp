#include "spi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "spi/errors.hpp"
#include "spi/io.hpp"
#include "spi/metrics.hpp"
#include "spi/random.hpp"
#include "spi/scenes.hpp"

namespace spi {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    if (auto item = trim(s.substr(start, end - start)); !item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("config line " + std::to_string(line) + ": '" + s +
                          "' is not a number");
  }
}

std::uint64_t parse_unsigned(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("config line " + std::to_string(line) + ": '" + s +
                          "' is not a non-negative integer");
  }
}

ImageShape parse_size(const std::string& s, std::size_t line) {
  const auto x = s.find('x');
  if (x == std::string::npos) {
    const auto side = parse_unsigned(s, line);
    return {side, side};
  }
  return {parse_unsigned(s.substr(0, x), line), parse_unsigned(s.substr(x + 1), line)};
}

std::size_t measurement_count(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
}

SweepRow blank_row(const std::string& scene, const std::string& solver, double ratio,
                   ImageShape size, double noise_level, std::size_t repeat, std::uint64_t seed) {
  SweepRow row;
  row.scene = scene;
  row.solver = solver;
  row.ratio = ratio;
  row.size = size;
  row.noise_level = noise_level;
  row.repeat = repeat;
  row.seed = seed;
  return row;
}

void evaluate(const SolverEntry& solver, const PatternSet& patterns, const MeasurementSet& meas,
              const Image& scene, const SolverOptions& options, SweepRow& row) {
  try {
    const SolverReport report = solver.solve(patterns, meas, scene.shape(), options);
    const double rmse = normalized_rmse(scene, report.image);
    row.iterations = report.iterations;
    row.wall_time_s = report.wall_time;
    if (!std::isfinite(rmse)) {
      row.status = "failed:non-finite rmse";
      return;
    }
    row.rmse = rmse;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.rmse.reset();
    row.status = std::string("failed:") + e.what();
  }
}

MeasurementSet noisy(const MeasurementSet& clean, double level, std::size_t n,
                     std::uint64_t seed) {
  if (level == 0.0) return clean;
  return add_noise(clean, NoiseModel::from_level(level, n), derive_seed(seed, kNoiseStream));
}

}  // namespace

void SweepSpec::validate() const {
  if (scenes.empty() || solvers.empty() || sampling_ratios.empty() || image_sizes.empty() ||
      noise_levels.empty()) {
    throw InvalidArgument("sweep spec needs at least one scene, solver, ratio, size and noise level");
  }
  if (repeats == 0) throw InvalidArgument("sweep repeats must be >= 1");
  for (const auto& name : solvers) find_solver(name);
  for (const auto& size : image_sizes) {
    if (size.width < 2 || size.height < 2) throw InvalidArgument("image sizes must be >= 2x2");
    for (double r : sampling_ratios) {
      if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("sampling ratios must be > 0");
      if (measurement_count(r, size.pixel_count()) == 0) {
        throw InvalidArgument("sampling ratio " + format_float(r) + " gives no measurements at " +
                              std::to_string(size.width) + "x" + std::to_string(size.height));
      }
    }
  }
  for (double level : noise_levels) {
    if (!(level >= 0.0) || !std::isfinite(level)) throw InvalidArgument("noise levels must be >= 0");
  }
  options.stop.validate(1);
  options.line_search.validate();
  options.alm.validate();
}

SweepSpec SweepSpec::defaults() {
  SweepSpec spec;
  spec.scenes = standard_scene_names();
  for (const auto& entry : solver_registry()) spec.solvers.push_back(entry.name);
  spec.sampling_ratios = {0.2, 0.4, 0.6, 0.8, 1.0, 2.0, 3.0, 4.0, 5.0};
  spec.image_sizes = {{64, 64}};
  spec.noise_levels = {0.0};
  spec.repeats = 20;
  return spec;
}

SweepSpec SweepSpec::desk() {
  SweepSpec spec = defaults();
  spec.scenes = {"phantom", "cameraman"};
  spec.sampling_ratios = {0.2, 1.0};
  apply_desk_preset(spec);
  return spec;
}

void apply_desk_preset(SweepSpec& spec) {
  spec.image_sizes = {{32, 32}};
  spec.repeats = 5;
}

SweepSpec parse_sweep_config(std::string_view text, SweepSpec spec) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line) + ": expected key=value");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto items = split_list(value);

    if (key == "scenes") {
      spec.scenes = items;
    } else if (key == "solvers") {
      if (items.size() == 1 && items[0] == "all") {
        spec.solvers.clear();
        for (const auto& entry : solver_registry()) spec.solvers.push_back(entry.name);
      } else {
        spec.solvers = items;
      }
    } else if (key == "sampling_ratios") {
      spec.sampling_ratios.clear();
      for (const auto& v : items) spec.sampling_ratios.push_back(parse_real(v, line));
    } else if (key == "image_sizes") {
      spec.image_sizes.clear();
      for (const auto& v : items) spec.image_sizes.push_back(parse_size(v, line));
    } else if (key == "noise_levels") {
      spec.noise_levels.clear();
      for (const auto& v : items) spec.noise_levels.push_back(parse_real(v, line));
    } else if (key == "repeats") {
      spec.repeats = parse_unsigned(value, line);
    } else if (key == "base_seed") {
      spec.base_seed = parse_unsigned(value, line);
    } else if (key == "distribution") {
      spec.distribution = parse_distribution(value);
    } else if (key == "residual_change_threshold") {
      spec.options.stop.residual_change_threshold = parse_real(value, line);
    } else if (key == "min_iterations") {
      spec.options.stop.min_iterations = parse_unsigned(value, line);
    } else if (key == "max_iterations_factor") {
      spec.options.stop.max_iterations_factor = parse_real(value, line);
    } else if (key == "alpha") {
      spec.options.line_search.alpha = parse_real(value, line);
    } else if (key == "beta") {
      spec.options.line_search.beta = parse_real(value, line);
    } else if (key == "mu1_init") {
      spec.options.alm.mu1_init = parse_real(value, line);
    } else if (key == "mu2_init") {
      spec.options.alm.mu2_init = parse_real(value, line);
    } else if (key == "rho") {
      spec.options.alm.rho = parse_real(value, line);
    } else if (key == "mu_max") {
      spec.options.alm.mu_max = parse_real(value, line);
    } else {
      throw InvalidArgument("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

SweepSpec load_sweep_config(const std::filesystem::path& path, SweepSpec base) {
  return parse_sweep_config(read_file(path), std::move(base));
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t scene_index, std::size_t ratio_index,
                        std::size_t size_index, std::size_t repeat) {
  return derive_seed(base_seed, scene_index, ratio_index, size_index, repeat);
}

SweepRow run_cell(const CellSpec& cell) {
  return run_cell(cell, load_scene(cell.scene, cell.size));
}

SweepRow run_cell(const CellSpec& cell, const Image& scene) {
  SweepRow row = blank_row(cell.scene, cell.solver, cell.ratio, cell.size, cell.noise_level,
                           cell.repeat, cell.seed);
  if (scene.shape() != cell.size) throw InvalidArgument("run_cell: scene size mismatch");
  const std::size_t n = cell.size.pixel_count();
  const std::size_t m = measurement_count(cell.ratio, n);
  if (m == 0) throw InvalidArgument("run_cell: sampling ratio gives no measurements");
  const SolverEntry& solver = find_solver(cell.solver);
  const PatternSet patterns =
      generate_patterns(m, cell.size.width, cell.size.height, cell.distribution, cell.seed);
  const MeasurementSet meas = noisy(synthesize(patterns, scene), cell.noise_level, n, cell.seed);
  evaluate(solver, patterns, meas, scene, cell.options, row);
  return row;
}

SweepResults run_sweep(const SweepSpec& spec, const SweepRunOptions& run) {
  spec.validate();

  struct DataCell {
    std::size_t scene, size, ratio, repeat;
  };
  std::vector<DataCell> cells;
  for (std::size_t si = 0; si < spec.scenes.size(); ++si)
    for (std::size_t zi = 0; zi < spec.image_sizes.size(); ++zi)
      for (std::size_t ri = 0; ri < spec.sampling_ratios.size(); ++ri)
        for (std::size_t rep = 0; rep < spec.repeats; ++rep) cells.push_back({si, zi, ri, rep});

  // Scenes are loaded up front so a bad reference fails before any work.
  std::map<std::pair<std::size_t, std::size_t>, Image> scenes;
  for (std::size_t si = 0; si < spec.scenes.size(); ++si)
    for (std::size_t zi = 0; zi < spec.image_sizes.size(); ++zi)
      scenes[{si, zi}] = load_scene(spec.scenes[si], spec.image_sizes[zi]);

  std::vector<const SolverEntry*> solvers;
  for (const auto& name : spec.solvers) solvers.push_back(&find_solver(name));

  auto process = [&](const DataCell& c) {
    const Image& scene = scenes.at({c.scene, c.size});
    const ImageShape size = spec.image_sizes[c.size];
    const double ratio = spec.sampling_ratios[c.ratio];
    const std::size_t n = size.pixel_count();
    const std::uint64_t seed = cell_seed(spec.base_seed, c.scene, c.ratio, c.size, c.repeat);
    const PatternSet patterns = generate_patterns(measurement_count(ratio, n), size.width,
                                                  size.height, spec.distribution, seed);
    const MeasurementSet clean = synthesize(patterns, scene);
    std::vector<SweepRow> rows;
    for (double level : spec.noise_levels) {
      const MeasurementSet meas = noisy(clean, level, n, seed);
      for (const SolverEntry* solver : solvers) {
        SweepRow row = blank_row(spec.scenes[c.scene], solver->name, ratio, size, level,
                                 c.repeat, seed);
        evaluate(*solver, patterns, meas, scene, spec.options, row);
        rows.push_back(std::move(row));
      }
    }
    return rows;
  };

  std::vector<std::vector<SweepRow>> done(cells.size());
  std::vector<char> finished(cells.size(), 0);
  std::size_t next_emit = 0;
  std::mutex mutex;
  std::atomic<std::size_t> next_cell{0};
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next_cell.fetch_add(1);
      if (i >= cells.size()) return;
      std::vector<SweepRow> rows;
      try {
        rows = process(cells[i]);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        next_cell.store(cells.size());
        return;
      }
      std::lock_guard lock(mutex);
      done[i] = std::move(rows);
      finished[i] = 1;
      while (next_emit < cells.size() && finished[next_emit]) {
        if (run.on_row) {
          for (const auto& row : done[next_emit]) run.on_row(row);
        }
        ++next_emit;
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(run.jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SweepResults results;
  for (auto& rows : done) {
    for (auto& row : rows) results.rows.push_back(std::move(row));
  }
  return results;
}

std::vector<SummaryRow> summarize(const SweepResults& results, bool pool_scenes) {
  std::vector<SummaryRow> summary;
  std::vector<std::vector<double>> samples;
  std::vector<double> iteration_sums, time_sums;
  for (const auto& row : results.rows) {
    const std::string scene = pool_scenes ? "*" : row.scene;
    auto it = std::find_if(summary.begin(), summary.end(), [&](const SummaryRow& s) {
      return s.scene == scene && s.solver == row.solver && s.ratio == row.ratio &&
             s.size == row.size && s.noise_level == row.noise_level;
    });
    std::size_t idx;
    if (it == summary.end()) {
      SummaryRow s;
      s.scene = scene;
      s.solver = row.solver;
      s.ratio = row.ratio;
      s.size = row.size;
      s.noise_level = row.noise_level;
      summary.push_back(s);
      samples.emplace_back();
      iteration_sums.push_back(0.0);
      time_sums.push_back(0.0);
      idx = summary.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - summary.begin());
    }
    ++summary[idx].count;
    if (!row.ok()) {
      ++summary[idx].failures;
      continue;
    }
    samples[idx].push_back(*row.rmse);
    iteration_sums[idx] += static_cast<double>(row.iterations);
    time_sums[idx] += row.wall_time_s;
  }
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const auto& v = samples[i];
    if (v.empty()) {
      summary[i].rmse_mean = summary[i].rmse_std = std::nan("");
      continue;
    }
    const double k = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= k;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    summary[i].rmse_mean = mean;
    summary[i].rmse_std = v.size() > 1 ? std::sqrt(var / (k - 1.0)) : 0.0;
    summary[i].iterations_mean = iteration_sums[i] / k;
    summary[i].wall_time_mean = time_sums[i] / k;
  }
  return summary;
}

std::string format_summary_csv(const std::vector<SummaryRow>& summary) {
  std::string out =
      "scene,solver,ratio,size,noise_level,count,failures,rmse_mean,rmse_std,iterations_mean,"
      "wall_time_mean_s\r\n";
  for (const auto& s : summary) {
    out += csv_escape(s.scene) + "," + csv_escape(s.solver) + "," + format_float(s.ratio) + "," +
           std::to_string(s.size.width) + "x" + std::to_string(s.size.height) + "," +
           format_float(s.noise_level) + "," + std::to_string(s.count) + "," +
           std::to_string(s.failures) + "," + format_float(s.rmse_mean) + "," +
           format_float(s.rmse_std) + "," + format_float(s.iterations_mean) + "," +
           format_float(s.wall_time_mean) + "\r\n";
  }
  return out;
}

}  // namespace spi
