#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "spi/bench.hpp"
#include "spi/io.hpp"
#include "spi/metrics.hpp"
#include "spi/scenes.hpp"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("spi_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult spi(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string(SPI_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = spi::read_file(out);
    r.err = spi::read_file(err);
    return r;
  }

  fs::path dir_;
};

TEST_F(Cli, MetricsIdenticalFiles) {
  spi::write_image(spi::shepp_logan({16, 16}), path("a.pgm"));
  const auto r = spi("metrics --truth " + path("a.pgm") + " --estimate " + path("a.pgm"));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0.000000000\n");
}

TEST_F(Cli, MetricsValue) {
  spi::write_image(spi::Image(2, 2, 1.0), path("t.pgm"));
  spi::write_image(spi::Image(2, 2, {1.0, 1.0, 0.0, 0.0}), path("e.pgm"));
  const auto r = spi("metrics --truth " + path("t.pgm") + " --estimate " + path("e.pgm"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.707106781\n");
}

TEST_F(Cli, UnknownSolverIsUsageError) {
  spi::save_patterns(spi::generate_patterns(4, 2, 2, spi::PatternDistribution::uniform01, 1),
                     path("p.bin"));
  const auto r = spi("reconstruct --solver nosuch --patterns " + path("p.bin") +
                     " --measurements " + path("p.bin") + " --out " + path("x.pgm"));
  EXPECT_EQ(r.code, 1);
  for (const auto& entry : spi::solver_registry()) {
    EXPECT_NE(r.err.find(entry.name), std::string::npos) << entry.name;
  }
  EXPECT_NE(r.err.find("reconstruct"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("x.pgm")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(spi("").code, 1);
  EXPECT_EQ(spi("frobnicate").code, 1);
  EXPECT_EQ(spi("metrics --truth a.pgm").code, 1);
  EXPECT_EQ(spi("gen-patterns --m 4 --width 2 --height 2 --seed 1 --out " + path("p.bin") +
                " --colour red")
                .code,
            1);
  EXPECT_FALSE(fs::exists(path("p.bin")));
  EXPECT_EQ(spi("gen-patterns --m 4 --width 2 --height 2 --seed 1 --dist gaussian --out " +
                path("p.bin"))
                .code,
            1);
  EXPECT_EQ(spi("benchmark --out " + path("r.csv")).code, 1);
}

TEST_F(Cli, RuntimeFailures) {
  const auto missing = spi("metrics --truth " + path("none.pgm") + " --estimate " + path("none.pgm"));
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("metrics"), std::string::npos);
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

  spi::write_file(path("bad.bin"), "not a bundle");
  spi::write_image(spi::shepp_logan({4, 4}), path("s.pgm"));
  const auto bad = spi("simulate --patterns " + path("bad.bin") + " --scene " + path("s.pgm") +
                       " --out " + path("b.bin"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("simulate"), std::string::npos);

  // pinv on an underdetermined system
  EXPECT_EQ(spi("gen-patterns --m 8 --width 4 --height 4 --seed 1 --out " + path("p.bin")).code, 0);
  EXPECT_EQ(spi("simulate --patterns " + path("p.bin") + " --scene phantom --out " + path("m.bin"))
                .code,
            0);
  const auto singular = spi("reconstruct --solver pinv --patterns " + path("p.bin") +
                            " --measurements " + path("m.bin") + " --out " + path("x.pgm"));
  EXPECT_EQ(singular.code, 2);
  EXPECT_NE(singular.err.find("reconstruct"), std::string::npos);
}

TEST_F(Cli, OutputsMatchLibrary) {
  ASSERT_EQ(spi("gen-patterns --m 20 --width 5 --height 4 --dist binary --seed 9 --out " +
                path("p.bin"))
                .code,
            0);
  const auto patterns = spi::generate_patterns(20, 5, 4, spi::PatternDistribution::binary, 9);
  spi::save_patterns(patterns, path("p_lib.bin"));
  EXPECT_EQ(spi::read_file(path("p.bin")), spi::read_file(path("p_lib.bin")));

  ASSERT_EQ(spi("simulate --patterns " + path("p.bin") +
                " --scene blocks --width 5 --noise-level 1e-3 --seed 4 --out " + path("m.bin"))
                .code,
            0);
  const auto scene = spi::load_scene("blocks", {5, 4});
  const auto meas = spi::add_noise(spi::synthesize(patterns, scene),
                                   spi::NoiseModel::from_level(1e-3, 20), 4);
  spi::save_measurements(meas, 20, path("m_lib.bin"));
  EXPECT_EQ(spi::read_file(path("m.bin")), spi::read_file(path("m_lib.bin")));

  ASSERT_EQ(spi("reconstruct --solver cgd --patterns " + path("p.bin") + " --measurements " +
                path("m.bin") + " --height 4 --threshold 1e-3 --min-iter 3 --max-iter-factor 2" +
                " --out " + path("x.pgm") + " --trace " + path("t.csv"))
                .code,
            0);
  spi::SolverOptions opts;
  opts.stop.residual_change_threshold = 1e-3;
  opts.stop.min_iterations = 3;
  opts.stop.max_iterations_factor = 2.0;
  const auto report = spi::find_solver("cgd").solve(patterns, meas, {5, 4}, opts);
  spi::write_image(report.image, path("x_lib.pgm"));
  EXPECT_EQ(spi::read_file(path("x.pgm")), spi::read_file(path("x_lib.pgm")));
  const std::string trace = spi::read_file(path("t.csv"));
  EXPECT_EQ(trace.rfind("iteration,residual_norm,objective,prior_gap\r\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(trace.begin(), trace.end(), '\n')),
            report.trace.size() + 1);
}

TEST_F(Cli, ShapeInference) {
  ASSERT_EQ(spi("gen-patterns --m 6 --width 3 --height 2 --seed 1 --out " + path("p.bin")).code, 0);
  ASSERT_EQ(spi("simulate --patterns " + path("p.bin") + " --scene phantom --out " + path("m.bin"))
                .code,
            1);
  ASSERT_EQ(spi("simulate --patterns " + path("p.bin") + " --scene phantom --width 4 --out " +
                path("m.bin"))
                .code,
            1);
  ASSERT_EQ(spi("simulate --patterns " + path("p.bin") + " --scene phantom --height 2 --out " +
                path("m.bin"))
                .code,
            0);
  ASSERT_EQ(spi("reconstruct --solver pinv --patterns " + path("p.bin") + " --measurements " +
                path("m.bin") + " --width 3 --height 2 --out " + path("x.pgm"))
                .code,
            0);
  EXPECT_EQ(spi::read_image(path("x.pgm")).shape(), (spi::ImageShape{3, 2}));
}

TEST_F(Cli, MismatchedBundles) {
  ASSERT_EQ(spi("gen-patterns --m 16 --width 4 --height 4 --seed 1 --out " + path("p.bin")).code, 0);
  ASSERT_EQ(spi("gen-patterns --m 9 --width 3 --height 3 --seed 1 --out " + path("q.bin")).code, 0);
  ASSERT_EQ(spi("simulate --patterns " + path("q.bin") + " --scene phantom --out " + path("m.bin"))
                .code,
            0);
  const auto r = spi("reconstruct --solver cgd --patterns " + path("p.bin") + " --measurements " +
                     path("m.bin") + " --out " + path("x.pgm"));
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("does not match"), std::string::npos) << r.err;
}

TEST_F(Cli, EndToEndTotalVariation) {
  ASSERT_EQ(spi("gen-patterns --m 4096 --width 64 --height 64 --seed 7 --out " + path("p.bin")).code, 0);
  ASSERT_EQ(spi("simulate --patterns " + path("p.bin") + " --scene cameraman --out " + path("m.bin"))
                .code,
            0);
  ASSERT_EQ(spi("reconstruct --solver cs-tv --patterns " + path("p.bin") + " --measurements " +
                path("m.bin") + " --out " + path("x.pgm"))
                .code,
            0);
  spi::write_image(spi::load_scene("cameraman", {64, 64}), path("truth.pgm"));
  const auto r = spi("metrics --truth " + path("truth.pgm") + " --estimate " + path("x.pgm"));
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(std::stod(r.out), 0.05);
}

TEST_F(Cli, Benchmark) {
  spi::write_file(path("sweep.cfg"),
                  "scenes = phantom, blocks\nsolvers = pinv, dgi\nsampling_ratios = 1\n"
                  "image_sizes = 8\nrepeats = 2\nbase_seed = 3\nnoise_levels = 0, 1e-3\n");
  const auto r = spi("benchmark --config " + path("sweep.cfg") + " --out " + path("r.csv") +
                     " --summary " + path("s.csv") + " --jobs 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto results = spi::parse_results_csv(spi::read_file(path("r.csv")));
  auto spec = spi::load_sweep_config(path("sweep.cfg"));
  const auto expected = spi::run_sweep(spec);
  ASSERT_EQ(results.rows.size(), expected.rows.size());
  ASSERT_EQ(results.rows.size(), 16u);
  for (std::size_t i = 0; i < results.rows.size(); ++i) {
    auto a = results.rows[i];
    auto b = expected.rows[i];
    a.wall_time_s = b.wall_time_s = 0.0;
    EXPECT_EQ(spi::format_result_row(a), spi::format_result_row(b));
  }
  const std::string summary = spi::read_file(path("s.csv"));
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 1 + 8);
}

TEST_F(Cli, BenchmarkBadConfig) {
  spi::write_file(path("sweep.cfg"), "scenes = phantom\nflavour = salty\n");
  const auto r = spi("benchmark --config " + path("sweep.cfg") + " --out " + path("r.csv"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("flavour"), std::string::npos);
}

}  // namespace
