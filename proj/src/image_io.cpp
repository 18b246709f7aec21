#include "unifilt/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace unifilt {

namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ImageIoError("cannot open image file: " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image from_bytes(int height, int width, const unsigned char* rgb) {
  std::vector<double> values(static_cast<std::size_t>(height) * width * kChannels);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = rgb[i] / 255.0;
  return Image(height, width, std::move(values));
}

Image decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()) == 0) {
    throw ImageIoError("invalid PNG " + path.string() + ": " + img.message);
  }
  if ((img.format & PNG_FORMAT_FLAG_LINEAR) != 0) {
    png_image_free(&img);
    throw ImageIoError("16-bit PNG is not supported: " + path.string());
  }
  if (img.width == 0 || img.height == 0) {
    png_image_free(&img);
    throw ImageIoError("zero-dimension PNG: " + path.string());
  }
  img.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> pixels(PNG_IMAGE_SIZE(img));
  if (png_image_finish_read(&img, nullptr, pixels.data(), 0, nullptr) == 0) {
    throw ImageIoError("failed to decode PNG " + path.string() + ": " + img.message);
  }
  return from_bytes(static_cast<int>(img.height), static_cast<int>(img.width), pixels.data());
}

// Netpbm header tokenizer: whitespace separated, '#' comments to end of line.
class PpmHeader {
 public:
  explicit PpmHeader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  long next_int(const std::filesystem::path& path) {
    skip_space_and_comments();
    long value = 0;
    bool any = false;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_]) != 0) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 24)) throw ImageIoError("PPM header value too large: " + path.string());
      any = true;
      ++pos_;
    }
    if (!any) throw ImageIoError("malformed PPM header: " + path.string());
    return value;
  }

  std::size_t position() const { return pos_; }
  void advance() { ++pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_]) != 0) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 2;
};

Image decode_ppm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  PpmHeader header(bytes);
  const long width = header.next_int(path);
  const long height = header.next_int(path);
  const long maxval = header.next_int(path);
  if (width == 0 || height == 0) {
    throw ImageIoError("zero-dimension PPM: " + path.string());
  }
  if (maxval != 255) {
    throw ImageIoError("only 8-bit PPM (maxval 255) is supported: " + path.string());
  }
  if (header.position() >= bytes.size() || std::isspace(bytes[header.position()]) == 0) {
    throw ImageIoError("malformed PPM header: " + path.string());
  }
  header.advance();
  const std::size_t need = static_cast<std::size_t>(width) * height * kChannels;
  if (bytes.size() - header.position() < need) {
    throw ImageIoError("truncated PPM data: " + path.string());
  }
  return from_bytes(static_cast<int>(height), static_cast<int>(width),
                    bytes.data() + header.position());
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, bytes.begin())) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes, path);
  }
  throw ImageIoError("unsupported image format (expected PNG or binary PPM): " + path.string());
}

void save_image(const Image& image, const std::filesystem::path& path) {
  std::vector<unsigned char> pixels(image.size());
  const auto v = image.values();
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    pixels[i] = static_cast<unsigned char>(std::lround(clamp01(v[i]) * 255.0));
  }
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  if (png_image_write_to_file(&img, path.c_str(), 0, pixels.data(), 0, nullptr) == 0) {
    throw ImageIoError("cannot write PNG " + path.string() + ": " + img.message);
  }
}

bool is_supported_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".png" || ext == ".ppm";
}

}  // namespace unifilt
