#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqa {

class ImageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major interleaved RGB buffer with channel values in [0,1].
///
/// Every public operation in the toolkit hands back a clamped buffer, so a
/// value outside [0,1] only ever exists transiently inside an operation.
class ImageBuf {
 public:
  static constexpr int kChannels = 3;

  ImageBuf() = default;
  ImageBuf(int width, int height, double fill = 0.0);

  /// Takes ownership of `pixels`; throws if the size does not match or a value
  /// lies outside [0,1].
  static ImageBuf from_pixels(int width, int height, std::vector<double> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }
  double& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  /// Clamps every channel into [0,1]; NaN maps to 0.
  void clamp();

  bool same_shape(const ImageBuf& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageBuf&, const ImageBuf&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

enum class ResampleMode { Box, Nearest, Bilinear, Bicubic };

/// Sentinel returned by psnr() for identical images.
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

/// 10*log10(1/MSE) over all channels on the unit scale.
double psnr(const ImageBuf& a, const ImageBuf& b);

double mean_squared_error(const ImageBuf& a, const ImageBuf& b);

}  // namespace iqa
