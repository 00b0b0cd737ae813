#include <cmath>

#include <gtest/gtest.h>

#include "spi/errors.hpp"
#include "spi/image.hpp"
#include "spi/model.hpp"
#include "spi/random.hpp"

namespace {

using spi::PatternDistribution;

TEST(Image, VectorizeIsRowMajor) {
  spi::Image img(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(img.at(1, 0), 2.0);
  EXPECT_EQ(img.at(0, 1), 3.0);
  const Eigen::VectorXd v = spi::vectorize(img);
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v, Eigen::Vector4d(1, 2, 3, 4));
}

TEST(Image, Roundtrip) {
  spi::Rng rng(1);
  spi::Image img(5, 3);
  for (auto& p : img.data()) p = rng.uniform01();
  EXPECT_EQ(spi::devectorize(spi::vectorize(img), 5, 3), img);
}

TEST(Image, DevectorizeLengthMismatch) {
  EXPECT_THROW(spi::devectorize(Eigen::VectorXd::Zero(3), 2, 2), spi::InvalidArgument);
  EXPECT_THROW(spi::Image(2, 2, std::vector<double>(3)), spi::InvalidArgument);
}

TEST(Patterns, ZeroDimensionsRejected) {
  EXPECT_THROW(spi::generate_patterns(0, 4, 4, PatternDistribution::uniform01, 1),
               spi::InvalidArgument);
  EXPECT_THROW(spi::generate_patterns(4, 0, 4, PatternDistribution::uniform01, 1),
               spi::InvalidArgument);
}

TEST(Patterns, SameSeedIsBitIdentical) {
  for (auto dist : {PatternDistribution::uniform01, PatternDistribution::binary}) {
    const auto a = spi::generate_patterns(17, 5, 3, dist, 99);
    const auto b = spi::generate_patterns(17, 5, 3, dist, 99);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.intensities, b.intensities);
    EXPECT_EQ(a.seed, 99u);
    const auto c = spi::generate_patterns(17, 5, 3, dist, 100);
    EXPECT_NE(a.rows, c.rows);
  }
}

TEST(Patterns, RowMajorFillFromOneStream) {
  const auto p = spi::generate_patterns(3, 2, 2, PatternDistribution::uniform01, 8);
  spi::Rng rng(8);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(p.rows(i, j), rng.uniform01());
  }
}

TEST(Patterns, IntensitiesAreRowSums) {
  const auto p = spi::generate_patterns(50, 7, 6, PatternDistribution::uniform01, 4);
  for (Eigen::Index i = 0; i < p.rows.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < p.rows.cols(); ++j) s += p.rows(i, j);
    EXPECT_NEAR(p.intensities[i], s, 1e-12 * s);
  }
}

TEST(Patterns, UniformPixelMeans) {
  const auto p = spi::generate_patterns(100000, 2, 2, PatternDistribution::uniform01, 12);
  const Eigen::VectorXd means = p.rows.colwise().mean();
  for (Eigen::Index j = 0; j < 4; ++j) {
    EXPECT_GE(means[j], 0.49);
    EXPECT_LE(means[j], 0.51);
  }
  EXPECT_GE(p.rows.minCoeff(), 0.0);
  EXPECT_LT(p.rows.maxCoeff(), 1.0);
}

TEST(Patterns, BinaryValues) {
  const auto p = spi::generate_patterns(2000, 4, 4, PatternDistribution::binary, 2);
  EXPECT_TRUE(((p.rows.array() == 0.0) || (p.rows.array() == 1.0)).all());
  const double mean = p.rows.mean();
  EXPECT_NEAR(mean, 0.5, 5.0 * 0.5 / std::sqrt(32000.0));
}

TEST(Patterns, FromRowsValidates) {
  spi::RowMatrix bad(1, 2);
  bad << 1.0, -0.5;
  EXPECT_THROW(spi::PatternSet::from_rows(bad), spi::InvalidArgument);
  bad << 1.0, std::nan("");
  EXPECT_THROW(spi::PatternSet::from_rows(bad), spi::InvalidArgument);
  EXPECT_THROW(spi::PatternSet::from_rows(spi::RowMatrix(0, 3)), spi::InvalidArgument);
}

TEST(Patterns, DistributionNames) {
  EXPECT_EQ(spi::parse_distribution("binary"), PatternDistribution::binary);
  EXPECT_EQ(spi::to_string(spi::parse_distribution("uniform01")), "uniform01");
  EXPECT_THROW(spi::parse_distribution("gaussian"), spi::InvalidArgument);
}

TEST(Synthesize, Identity) {
  const auto p = spi::PatternSet::from_rows(spi::RowMatrix::Identity(4, 4));
  const auto b = spi::synthesize(p, spi::Image(2, 2, {1, 2, 3, 4}));
  EXPECT_EQ(b.values, Eigen::Vector4d(1, 2, 3, 4));
  EXPECT_EQ(b.noise_sigma, 0.0);
}

TEST(Synthesize, ZeroScene) {
  const auto p = spi::generate_patterns(6, 3, 3, PatternDistribution::uniform01, 1);
  EXPECT_TRUE(spi::synthesize(p, spi::Image(3, 3)).values.isZero(0.0));
}

TEST(Synthesize, SmallArithmetic) {
  spi::RowMatrix a(2, 3);
  a << 1, 0, 1, 0, 1, 1;
  const auto b = spi::synthesize(spi::PatternSet::from_rows(a), spi::Image(3, 1, {1, 2, 3}));
  EXPECT_EQ(b.values, Eigen::Vector2d(4, 5));
}

TEST(Synthesize, DimensionMismatch) {
  const auto p = spi::generate_patterns(2, 3, 3, PatternDistribution::uniform01, 1);
  EXPECT_THROW(spi::synthesize(p, spi::Image(2, 2)), spi::InvalidArgument);
}

TEST(Synthesize, Linear) {
  const auto p = spi::generate_patterns(20, 4, 4, PatternDistribution::uniform01, 5);
  spi::Rng rng(6);
  spi::Image x1(4, 4), x2(4, 4), mix(4, 4);
  const double alpha = 0.7, beta = -1.3;
  for (std::size_t k = 0; k < 16; ++k) {
    x1.data()[k] = rng.uniform01();
    x2.data()[k] = rng.uniform01();
    mix.data()[k] = alpha * x1.data()[k] + beta * x2.data()[k];
  }
  const Eigen::VectorXd lhs = spi::synthesize(p, mix).values;
  const Eigen::VectorXd rhs =
      alpha * spi::synthesize(p, x1).values + beta * spi::synthesize(p, x2).values;
  EXPECT_LE((lhs - rhs).norm(), 1e-10 * rhs.norm());
}

TEST(Synthesize, AllOnesSceneMean) {
  const std::size_t m = 10000, n = 16;
  const auto p = spi::generate_patterns(m, 4, 4, PatternDistribution::uniform01, 21);
  const auto b = spi::synthesize(p, spi::Image(4, 4, 1.0));
  // Each measurement is a sum of n U(0,1) draws: mean n/2, variance n/12.
  const double stderr_mean = std::sqrt(n / 12.0 / m);
  EXPECT_NEAR(b.values.mean(), n / 2.0, 3.0 * stderr_mean);
}

TEST(Noise, LevelToSigma) {
  EXPECT_DOUBLE_EQ(spi::NoiseModel::from_level(3e-3, 4096).sigma, 12.288);
  EXPECT_EQ(spi::NoiseModel::from_level(0.0, 4096).sigma, 0.0);
  EXPECT_THROW(spi::NoiseModel::from_level(-1.0, 4), spi::InvalidArgument);
}

TEST(Noise, ZeroSigmaIsIdentity) {
  spi::MeasurementSet meas;
  meas.values = Eigen::Vector3d(1, 2, 3);
  const auto out = spi::add_noise(meas, {0.0, 0.0}, 5);
  EXPECT_EQ(out.values, meas.values);
  EXPECT_EQ(out.noise_seed, 5u);
}

TEST(Noise, SampleStd) {
  spi::MeasurementSet meas;
  meas.values = Eigen::VectorXd::Constant(1000000, 3.0);
  const auto out = spi::add_noise(meas, {1.0, 1.0}, 77);
  const Eigen::VectorXd diff = out.values - meas.values;
  const double mean = diff.mean();
  const double sd = std::sqrt((diff.array() - mean).square().sum() / (diff.size() - 1));
  EXPECT_GE(sd, 0.997);
  EXPECT_LE(sd, 1.003);
  EXPECT_EQ(out.noise_sigma, 1.0);
}

TEST(Noise, SameSeedSameOutput) {
  spi::MeasurementSet meas;
  meas.values = Eigen::VectorXd::LinSpaced(100, 0.0, 1.0);
  const auto noise = spi::NoiseModel::from_level(1e-3, 1024);
  EXPECT_EQ(spi::add_noise(meas, noise, 3).values, spi::add_noise(meas, noise, 3).values);
  EXPECT_NE(spi::add_noise(meas, noise, 3).values, spi::add_noise(meas, noise, 4).values);
}

}  // namespace
