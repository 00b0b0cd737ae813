#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "spi/bench.hpp"
#include "spi/errors.hpp"
#include "spi/io.hpp"
#include "spi/metrics.hpp"
#include "spi/model.hpp"
#include "spi/scenes.hpp"
#include "spi/solvers.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Thrown for argument combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenPatternsArgs {
  std::size_t m = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::string dist = "uniform01";
  std::uint64_t seed = 0;
  std::string out;
};

struct SimulateArgs {
  std::string patterns;
  std::string scene;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> width;
  std::optional<std::size_t> height;
  std::string out;
};

struct ReconstructArgs {
  std::string solver;
  std::string patterns;
  std::string measurements;
  std::string out;
  std::string trace;
  std::optional<std::size_t> width;
  std::optional<std::size_t> height;
  spi::StopCriteria stop;
};

struct BenchmarkArgs {
  std::string config;
  std::string out;
  std::string summary;
  bool desk = false;
  std::size_t jobs = 0;
};

struct MetricsArgs {
  std::string truth;
  std::string estimate;
  bool mean_square = false;
};

// Bundles carry the pixel count only. Missing dimensions are filled in from
// the other one, or as a square.
spi::ImageShape resolve_shape(std::size_t n, std::optional<std::size_t> width,
                              std::optional<std::size_t> height) {
  if (width && height) {
    if (*width * *height != n) {
      throw UsageError("--width x --height does not match the " + std::to_string(n) +
                       "-pixel patterns");
    }
    return {*width, *height};
  }
  if (width || height) {
    const std::size_t known = width ? *width : *height;
    if (known == 0 || n % known != 0) {
      throw UsageError("image dimension does not divide the pattern length " + std::to_string(n));
    }
    return width ? spi::ImageShape{known, n / known} : spi::ImageShape{n / known, known};
  }
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw UsageError("patterns are not square; pass --width or --height");
  }
  return {side, side};
}

void write_trace(const spi::SolverReport& report, const std::filesystem::path& path) {
  std::string text = "iteration,residual_norm,objective,prior_gap\r\n";
  for (const auto& t : report.trace) {
    text += std::to_string(t.iteration) + ',' + spi::format_float(t.residual_norm) + ',' +
            spi::format_float(t.objective) + ',' + spi::format_float(t.prior_gap) + "\r\n";
  }
  spi::write_file(path, text);
}

int run_gen_patterns(const GenPatternsArgs& a) {
  const auto dist = spi::parse_distribution(a.dist);
  const auto patterns = spi::generate_patterns(a.m, a.width, a.height, dist, a.seed);
  spi::save_patterns(patterns, a.out);
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  const auto patterns = spi::load_patterns(a.patterns);
  const auto shape = resolve_shape(patterns.n(), a.width, a.height);
  const auto scene = spi::load_scene(a.scene, shape);
  auto meas = spi::synthesize(patterns, scene);
  if (a.noise_level > 0.0) {
    meas = spi::add_noise(meas, spi::NoiseModel::from_level(a.noise_level, shape.pixel_count()),
                          a.seed);
  }
  spi::save_measurements(meas, patterns.n(), a.out);
  return 0;
}

int run_reconstruct(const ReconstructArgs& a) {
  const auto& entry = spi::find_solver(a.solver);
  const auto patterns = spi::load_patterns(a.patterns);
  std::size_t pixel_count = 0;
  const auto meas = spi::load_measurements(a.measurements, &pixel_count);
  if (pixel_count != patterns.n() || meas.m() != patterns.m()) {
    throw spi::InvalidArgument("measurement bundle (m=" + std::to_string(meas.m()) +
                               ", n=" + std::to_string(pixel_count) +
                               ") does not match the patterns (m=" +
                               std::to_string(patterns.m()) + ", n=" +
                               std::to_string(patterns.n()) + ")");
  }
  const auto shape = resolve_shape(patterns.n(), a.width, a.height);
  spi::SolverOptions options;
  options.stop = a.stop;
  const auto report = entry.solve(patterns, meas, shape, options);
  spi::write_image(report.image, a.out);
  if (!a.trace.empty()) write_trace(report, a.trace);
  std::fprintf(stderr, "%s: %zu iterations, %.3f s, stopped by %s\n", entry.name.c_str(),
               report.iterations, report.wall_time,
               std::string(spi::to_string(report.terminated_by)).c_str());
  return 0;
}

int run_benchmark(const BenchmarkArgs& a) {
  if (a.config.empty() && !a.desk) throw UsageError("benchmark needs --config or --desk");
  const auto base = a.desk ? spi::SweepSpec::desk() : spi::SweepSpec::defaults();
  auto spec = a.config.empty() ? base : spi::load_sweep_config(a.config, base);
  if (a.desk) spi::apply_desk_preset(spec);
  spec.validate();

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw spi::IoError("cannot open " + a.out + " for writing");
  out << spi::kResultsHeader << "\r\n";
  spi::SweepRunOptions run;
  run.jobs = a.jobs != 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  run.on_row = [&out](const spi::SweepRow& row) {
    out << spi::format_result_row(row) << "\r\n";
    out.flush();
  };
  const auto results = spi::run_sweep(spec, run);
  out.close();
  if (!out) throw spi::IoError("failed writing " + a.out);
  if (!a.summary.empty()) {
    spi::write_file(a.summary, spi::format_summary_csv(spi::summarize(results)));
  }
  std::size_t failed = 0;
  for (const auto& row : results.rows) failed += row.status != "ok";
  std::fprintf(stderr, "benchmark: %zu rows, %zu failed\n", results.rows.size(), failed);
  return 0;
}

int run_metrics(const MetricsArgs& a) {
  const auto truth = spi::read_image(a.truth);
  const auto estimate = spi::read_image(a.estimate);
  const auto norm = a.mean_square ? spi::RmseNormalization::mean_square
                                  : spi::RmseNormalization::mean;
  std::printf("%.9f\n", spi::normalized_rmse(truth, estimate, norm));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-pixel imaging reconstruction toolkit"};
  app.require_subcommand(1);

  GenPatternsArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-patterns", "Generate a pattern bundle");
  gen_cmd->add_option("--m", gen.m, "Number of patterns")->required();
  gen_cmd->add_option("--width", gen.width, "Pattern width")->required();
  gen_cmd->add_option("--height", gen.height, "Pattern height")->required();
  gen_cmd->add_option("--dist", gen.dist, "uniform01 or binary")
      ->check(CLI::IsMember({"uniform01", "binary"}));
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output bundle")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Synthesize measurements of a scene");
  sim_cmd->add_option("--patterns", sim.patterns, "Pattern bundle")->required();
  sim_cmd->add_option("--scene", sim.scene, "PGM path or built-in scene name")->required();
  sim_cmd->add_option("--noise-level", sim.noise_level, "Noise level, sigma = level * n")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--seed", sim.seed, "Noise seed");
  sim_cmd->add_option("--width", sim.width, "Image width");
  sim_cmd->add_option("--height", sim.height, "Image height");
  sim_cmd->add_option("--out", sim.out, "Output bundle")->required();

  ReconstructArgs rec;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Reconstruct an image from a bundle pair");
  rec_cmd->add_option("--solver", rec.solver, "Solver name")->required();
  rec_cmd->add_option("--patterns", rec.patterns, "Pattern bundle")->required();
  rec_cmd->add_option("--measurements", rec.measurements, "Measurement bundle")->required();
  rec_cmd->add_option("--out", rec.out, "Output PGM")->required();
  rec_cmd->add_option("--trace", rec.trace, "Per-iteration trace CSV");
  rec_cmd->add_option("--width", rec.width, "Image width");
  rec_cmd->add_option("--height", rec.height, "Image height");
  rec_cmd->add_option("--threshold", rec.stop.residual_change_threshold,
                      "Residual change stop threshold");
  rec_cmd->add_option("--min-iter", rec.stop.min_iterations, "Minimum iterations");
  rec_cmd->add_option("--max-iter-factor", rec.stop.max_iterations_factor,
                      "Maximum iterations per pixel");

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run a parameter sweep");
  bench_cmd->add_option("--config", bench.config, "key=value sweep config")
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "Results CSV")->required();
  bench_cmd->add_option("--summary", bench.summary, "Per-cell summary CSV");
  bench_cmd->add_flag("--desk", bench.desk, "32x32 images, 5 repeats");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (default: all cores)");

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "Normalized RMSE between two images");
  met_cmd->add_option("--truth", met.truth, "Ground truth PGM")->required();
  met_cmd->add_option("--estimate", met.estimate, "Estimate PGM")->required();
  met_cmd->add_flag("--mean-square", met.mean_square, "Normalize by mean(truth^2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*gen_cmd) return run_gen_patterns(gen);
    if (*sim_cmd) return run_simulate(sim);
    if (*rec_cmd) return run_reconstruct(rec);
    if (*bench_cmd) return run_benchmark(bench);
    return run_metrics(met);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "spi %s: %s\n", stage.c_str(), e.what());
    return kExitUsage;
  } catch (const spi::UnknownSolver& e) {
    std::fprintf(stderr, "spi %s: %s\n", stage.c_str(), e.what());
    return kExitUsage;
  } catch (const spi::InvalidArgument& e) {
    std::fprintf(stderr, "spi %s: invalid input: %s\n", stage.c_str(), e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spi %s: %s\n", stage.c_str(), e.what());
    return kExitFailure;
  }
}
