#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

struct SaveFormat {
  enum class Kind { Png, Jpeg };
  Kind kind = Kind::Png;
  int quality = 95;  // JPEG only, 1..100

  static SaveFormat png() { return {Kind::Png, 0}; }
  static SaveFormat jpeg(int quality) { return {Kind::Jpeg, quality}; }
};

/// Reads a PNG or JPEG file; 8-bit values map to v/255.
ImageBuf load_image(const std::filesystem::path& path);

/// Writes with per-channel quantization round(v*255).
void save_image(const ImageBuf& img, const std::filesystem::path& path, SaveFormat format);

std::vector<std::uint8_t> encode_image(const ImageBuf& img, SaveFormat format);
ImageBuf decode_image(const std::vector<std::uint8_t>& bytes);

/// JPEG encode/decode round trip at the given quality.
ImageBuf jpeg_round_trip(const ImageBuf& img, int quality);

bool jpeg2000_available();

/// JPEG2000 encode/decode round trip at a target compression ratio >= 1.
/// Throws ImageError when the codec is unavailable.
ImageBuf jpeg2000_round_trip(const ImageBuf& img, double compression_ratio);

/// 8-bit quantization round(v*255)/255 without touching the filesystem.
ImageBuf quantize8(const ImageBuf& img);

}  // namespace iqa
