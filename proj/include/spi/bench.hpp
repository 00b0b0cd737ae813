#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "spi/image.hpp"
#include "spi/model.hpp"
#include "spi/results.hpp"
#include "spi/solvers.hpp"

namespace spi {

struct SweepSpec {
  std::vector<std::string> scenes;
  std::vector<std::string> solvers;
  std::vector<double> sampling_ratios;
  std::vector<ImageShape> image_sizes;
  std::vector<double> noise_levels;
  std::size_t repeats = 20;
  std::uint64_t base_seed = 0;
  PatternDistribution distribution = PatternDistribution::uniform01;
  SolverOptions options;

  void validate() const;

  /// Sampling-ratio study at 64x64 on the standard scenes, 20 repeats.
  static SweepSpec defaults();

  /// defaults() cut down to two scenes and ratios {0.2, 1} at desk scale.
  static SweepSpec desk();
};

/// Forces 32x32 images and 5 repeats.
void apply_desk_preset(SweepSpec& spec);

/// Line-based key=value config. Keys mirror the SweepSpec fields plus the
/// stop criteria (threshold, min_iter, max_iter_factor). '#' starts a comment.
SweepSpec parse_sweep_config(std::string_view text, SweepSpec base = SweepSpec::defaults());
SweepSpec load_sweep_config(const std::filesystem::path& path,
                            SweepSpec base = SweepSpec::defaults());

struct CellSpec {
  std::string scene;
  std::string solver;
  double ratio = 1.0;
  ImageShape size{32, 32};
  double noise_level = 0.0;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  PatternDistribution distribution = PatternDistribution::uniform01;
  SolverOptions options;
};

/// Seed for one (scene, ratio, size, repeat) data cell. Solvers and noise
/// levels in the same cell share patterns and the unit noise draw.
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t scene_index, std::size_t ratio_index,
                        std::size_t size_index, std::size_t repeat);

/// Generates patterns, synthesizes measurements, adds noise, reconstructs and
/// scores one cell. Solver failures come back as a failed row.
SweepRow run_cell(const CellSpec& cell);
SweepRow run_cell(const CellSpec& cell, const Image& scene);

struct SweepRunOptions {
  std::size_t jobs = 1;
  /// Called once per row, in the deterministic row order, as soon as the row
  /// and all rows before it are done.
  std::function<void(const SweepRow&)> on_row;
};

SweepResults run_sweep(const SweepSpec& spec, const SweepRunOptions& run = {});

struct SummaryRow {
  std::string scene;  // "*" when averaged over scenes
  std::string solver;
  double ratio = 0.0;
  ImageShape size;
  double noise_level = 0.0;
  std::size_t count = 0;
  std::size_t failures = 0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  double iterations_mean = 0.0;
  double wall_time_mean = 0.0;
};

/// Mean and sample standard deviation over repeats (and over scenes when
/// pool_scenes is set) for each (solver, ratio, size, noise) cell.
std::vector<SummaryRow> summarize(const SweepResults& results, bool pool_scenes = false);
std::string format_summary_csv(const std::vector<SummaryRow>& summary);

}  // namespace spi
