#pragma once

#include <filesystem>
#include <stdexcept>

#include "unifilt/image.hpp"

namespace unifilt {

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8-bit PNG (gray, palette and alpha are converted to RGB; alpha is
/// dropped) or a binary PPM (P6, maxval 255). Channel value v maps to v/255.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG; each value encodes as round(clamp(v,0,1)*255).
void save_image(const Image& image, const std::filesystem::path& path);

/// True for extensions load_image accepts (.png, .ppm), case-insensitive.
bool is_supported_image(const std::filesystem::path& path);

}  // namespace unifilt
