#include "spi/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "spi/errors.hpp"
#include "spi/io.hpp"

#ifndef SPI_DEFAULT_SCENE_DIR
#define SPI_DEFAULT_SCENE_DIR "data/scenes"
#endif

namespace spi {

namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan (Toft): higher contrast, values stay in [0, 1].
constexpr Ellipse kSheppLogan[] = {
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},         {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0}, {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},  {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

void check_shape(ImageShape shape) {
  if (shape.width == 0 || shape.height == 0) throw InvalidArgument("scene size must be positive");
}

// Pixel centers mapped to [-1, 1]^2 with y pointing up.
double center_x(std::size_t x, std::size_t w) { return (2.0 * (x + 0.5)) / w - 1.0; }
double center_y(std::size_t y, std::size_t h) { return 1.0 - (2.0 * (y + 0.5)) / h; }

}  // namespace

const std::vector<std::string>& synthetic_scene_names() {
  static const std::vector<std::string> names = {"phantom", "blocks"};
  return names;
}

const std::vector<std::string>& standard_scene_names() {
  static const std::vector<std::string> names = {"cameraman", "moon",  "coins", "astronaut",
                                                 "chelsea",   "coffee", "clock", "page",
                                                 "rocket",    "brick"};
  return names;
}

std::filesystem::path scene_directory() {
  if (const char* env = std::getenv("SPI_SCENE_DIR"); env && *env) return env;
  return SPI_DEFAULT_SCENE_DIR;
}

Image shepp_logan(ImageShape shape) {
  check_shape(shape);
  Image img(shape.width, shape.height);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      const double px = center_x(x, shape.width);
      const double py = center_y(y, shape.height);
      double v = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = px - e.x0;
        const double dy = py - e.y0;
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double w = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      img.at(x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

Image blocks(ImageShape shape) {
  check_shape(shape);
  Image img(shape.width, shape.height, 0.4);
  for (std::size_t y = 0; y < shape.height; ++y) {
    for (std::size_t x = 0; x < shape.width; ++x) {
      const double px = center_x(x, shape.width);
      const double py = center_y(y, shape.height);
      double v = 0.4;
      if (px > -0.75 && px < -0.1 && py > -0.6 && py < 0.5) v = 0.9;
      if (px > 0.15 && px < 0.8 && py > 0.2 && py < 0.75) v = 0.1;
      if ((px - 0.4) * (px - 0.4) + (py + 0.4) * (py + 0.4) < 0.09) v = 0.7;
      img.at(x, y) = v;
    }
  }
  return img;
}

Image resample(const Image& img, ImageShape shape) {
  check_shape(shape);
  if (img.shape() == shape) return img;
  const double sx = static_cast<double>(img.width()) / shape.width;
  const double sy = static_cast<double>(img.height()) / shape.height;
  Image out(shape.width, shape.height);
  for (std::size_t y = 0; y < shape.height; ++y) {
    const double y0 = y * sy;
    const double y1 = y0 + sy;
    for (std::size_t x = 0; x < shape.width; ++x) {
      const double x0 = x * sx;
      const double x1 = x0 + sx;
      double sum = 0.0;
      for (auto iy = static_cast<std::size_t>(y0); iy < img.height() && iy < y1; ++iy) {
        const double wy = std::min<double>(iy + 1, y1) - std::max<double>(iy, y0);
        if (wy <= 0.0) continue;
        for (auto ix = static_cast<std::size_t>(x0); ix < img.width() && ix < x1; ++ix) {
          const double wx = std::min<double>(ix + 1, x1) - std::max<double>(ix, x0);
          if (wx > 0.0) sum += wx * wy * img.at(ix, iy);
        }
      }
      out.at(x, y) = sum / (sx * sy);
    }
  }
  return out;
}

Image load_scene(std::string_view ref, ImageShape shape) {
  check_shape(shape);
  if (ref == "phantom") return shepp_logan(shape);
  if (ref == "blocks") return blocks(shape);
  const auto& standard = standard_scene_names();
  if (std::find(standard.begin(), standard.end(), ref) != standard.end()) {
    return resample(read_image(scene_directory() / (std::string(ref) + ".pgm")), shape);
  }
  const std::filesystem::path path{std::string(ref)};
  if (!std::filesystem::exists(path)) {
    throw InvalidArgument("unknown scene '" + std::string(ref) +
                          "' (not a built-in name or an existing PGM file)");
  }
  return resample(read_image(path), shape);
}

}  // namespace spi
