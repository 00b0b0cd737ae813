#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace spi {

struct ImageShape {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t pixel_count() const { return width * height; }
  bool operator==(const ImageShape&) const = default;
};

/// Grayscale image, row-major with the origin at the top-left pixel.
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, double fill = 0.0);
  Image(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  ImageShape shape() const { return {width_, height_}; }
  std::size_t pixel_count() const { return data_.size(); }

  double& at(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

Eigen::VectorXd vectorize(const Image& img);
Image devectorize(const Eigen::VectorXd& v, std::size_t width, std::size_t height);

}  // namespace spi
