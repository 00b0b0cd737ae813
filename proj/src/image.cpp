#include "spi/image.hpp"

#include <string>

#include "spi/errors.hpp"

namespace spi {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width * height) {
    throw InvalidArgument("image data has " + std::to_string(data_.size()) +
                          " values, expected " + std::to_string(width * height));
  }
}

Eigen::VectorXd vectorize(const Image& img) {
  return Eigen::Map<const Eigen::VectorXd>(img.data().data(),
                                           static_cast<Eigen::Index>(img.pixel_count()));
}

Image devectorize(const Eigen::VectorXd& v, std::size_t width, std::size_t height) {
  if (static_cast<std::size_t>(v.size()) != width * height) {
    throw InvalidArgument("vector of length " + std::to_string(v.size()) + " cannot form a " +
                          std::to_string(width) + "x" + std::to_string(height) + " image");
  }
  return Image(width, height, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace spi
