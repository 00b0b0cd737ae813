#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "spi/image.hpp"

namespace spi {

/// Piecewise-constant scenes rasterized directly at the requested size.
const std::vector<std::string>& synthetic_scene_names();

/// Grayscale photographs shipped as 256x256 PGMs under the scene directory.
const std::vector<std::string>& standard_scene_names();

/// SPI_SCENE_DIR from the environment, else the directory baked in at build time.
std::filesystem::path scene_directory();

/// Modified Shepp-Logan head phantom, intensities in [0, 1].
Image shepp_logan(ImageShape shape);

/// Two rectangles and a disk on a mid-gray background.
Image blocks(ImageShape shape);

/// Box-filter resampling (exact area averaging).
Image resample(const Image& img, ImageShape shape);

/// Resolves a synthetic name, a standard name, or a path to a PGM file and
/// returns it at the requested size.
Image load_scene(std::string_view ref, ImageShape shape);

}  // namespace spi
