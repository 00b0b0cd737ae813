#include <filesystem>

#include <gtest/gtest.h>

#include "spi/errors.hpp"
#include "spi/io.hpp"
#include "spi/scenes.hpp"

namespace {

TEST(Scenes, PhantomRangeAndStructure) {
  const auto img = spi::shepp_logan({64, 64});
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (double v : img.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
  EXPECT_EQ(img.at(0, 0), 0.0);     // outside the skull
  EXPECT_EQ(img.at(32, 3), 1.0);    // skull rim near the top
  EXPECT_GT(sum / img.pixel_count(), 0.05);
}

TEST(Scenes, BlocksArePiecewiseConstant) {
  const auto img = spi::blocks({32, 32});
  for (double v : img.data()) {
    EXPECT_TRUE(v == 0.4 || v == 0.9 || v == 0.1 || v == 0.7) << v;
  }
}

TEST(Scenes, ResampleAveragesBoxes) {
  const spi::Image img(4, 2, {1, 3, 5, 7, 2, 4, 6, 8});
  const auto half = spi::resample(img, {2, 1});
  EXPECT_DOUBLE_EQ(half.data()[0], 2.5);
  EXPECT_DOUBLE_EQ(half.data()[1], 6.5);
  const auto same = spi::resample(img, {4, 2});
  EXPECT_EQ(same, img);
}

TEST(Scenes, ResamplePreservesMean) {
  const auto img = spi::shepp_logan({30, 30});
  for (spi::ImageShape shape : {spi::ImageShape{7, 11}, spi::ImageShape{45, 45}}) {
    const auto out = spi::resample(img, shape);
    double a = 0.0, b = 0.0;
    for (double v : img.data()) a += v;
    for (double v : out.data()) b += v;
    EXPECT_NEAR(a / img.pixel_count(), b / out.pixel_count(), 1e-12);
  }
}

TEST(Scenes, StandardScenesLoad) {
  for (const auto& name : spi::standard_scene_names()) {
    const auto img = spi::load_scene(name, {32, 32});
    ASSERT_EQ(img.shape(), (spi::ImageShape{32, 32})) << name;
    double sum = 0.0;
    for (double v : img.data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      sum += v;
    }
    EXPECT_GT(sum, 0.0) << name;
  }
}

TEST(Scenes, PathReference) {
  const auto path = std::filesystem::temp_directory_path() / "spi_scene_test.pgm";
  spi::write_image(spi::blocks({8, 8}), path);
  const auto img = spi::load_scene(path.string(), {4, 4});
  EXPECT_EQ(img.shape(), (spi::ImageShape{4, 4}));
  std::filesystem::remove(path);
}

TEST(Scenes, UnknownReference) {
  EXPECT_THROW(spi::load_scene("no-such-scene", {8, 8}), spi::InvalidArgument);
  EXPECT_THROW(spi::load_scene("phantom", {0, 8}), spi::InvalidArgument);
}

}  // namespace
