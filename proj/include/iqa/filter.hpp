#pragma once

#include <span>
#include <vector>

#include "iqa/image.hpp"

namespace iqa {

/// Dense 2-D correlation kernel, row-major. Dimensions must be odd to be used
/// with convolve2d.
class Kernel {
 public:
  Kernel(int width, int height, std::vector<double> taps);
  Kernel(int width, int height, double fill = 0.0);

  static Kernel identity() { return Kernel(1, 1, 1.0); }
  static Kernel box(int size);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return taps_[static_cast<std::size_t>(y) * width_ + x]; }
  double& at(int x, int y) { return taps_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> taps() const { return taps_; }

  double sum() const;
  /// Scales the taps to sum to one. No-op on an all-zero kernel.
  void normalize();

 private:
  int width_;
  int height_;
  std::vector<double> taps_;
};

/// Per-channel correlation with replicate padding. Zero taps are skipped.
/// Throws ImageError on an even kernel dimension.
ImageBuf convolve2d(const ImageBuf& img, const Kernel& kernel, unsigned threads = 1);

/// Horizontal pass with `kx` followed by a vertical pass with `ky`, replicate
/// padding, clamped once at the end.
ImageBuf convolve_separable(const ImageBuf& img, std::span<const double> kx,
                            std::span<const double> ky, unsigned threads = 1);

/// Normalized sampled Gaussian of odd length `size`.
std::vector<double> gaussian_kernel_1d(double sigma, int size);

/// s_k = round(4*sigma) + 1, bumped to the next odd number when even.
int gaussian_kernel_size(double sigma);

ImageBuf gaussian_blur(const ImageBuf& img, double sigma, int size, unsigned threads = 1);

ImageBuf resample(const ImageBuf& img, int new_width, int new_height, ResampleMode mode);

/// Bilinear sample at continuous coordinates (pixel centers at integers),
/// replicating the border.
double sample_bilinear(const ImageBuf& img, double x, double y, int c);

}  // namespace iqa
