#pragma once

#include <cstdint>

#include "iqa/filter.hpp"
#include "iqa/image.hpp"

// Per-family implementations behind apply_distortion. Every function returns a
// clamped buffer of the input's dimensions.
namespace iqa::families {

// blur.cpp
ImageBuf gaussian(const ImageBuf& img, double sigma, int kernel_size, unsigned threads);
Kernel motion_kernel(double radius, double sigma, double angle);
ImageBuf motion(const ImageBuf& img, double radius, double sigma, std::uint64_t seed, unsigned threads);
ImageBuf glass(const ImageBuf& img, double sigma, int max_shift, int iterations, std::uint64_t seed,
               unsigned threads);
Kernel disk_kernel(int radius);
ImageBuf lens(const ImageBuf& img, int radius, unsigned threads);
ImageBuf zoom(const ImageBuf& img, double max_zoom, int steps, unsigned threads);
ImageBuf jitter(const ImageBuf& img, int max_shift, int copies, std::uint64_t seed, unsigned threads);

// noise.cpp
ImageBuf gaussian_noise_rgb(const ImageBuf& img, double sigma, std::uint64_t seed, unsigned threads);
ImageBuf gaussian_noise_ycbcr(const ImageBuf& img, double sigma_l, double sigma_r, double sigma_b,
                              std::uint64_t seed, unsigned threads);
ImageBuf speckle_noise(const ImageBuf& img, double sigma, std::uint64_t seed, unsigned threads);
ImageBuf correlated_noise(const ImageBuf& img, double sigma, int filter_size, std::uint64_t seed,
                          unsigned threads);
ImageBuf poisson_noise(const ImageBuf& img, double interval, std::uint64_t seed, unsigned threads);
ImageBuf impulse_noise(const ImageBuf& img, double density, std::uint64_t seed, unsigned threads);

// compression.cpp
ImageBuf jpeg(const ImageBuf& img, int quality);
/// Most compressed JPEG2000 round trip whose PSNR still reaches `target_db`.
ImageBuf jpeg2000(const ImageBuf& img, double target_db);

// tone.cpp
ImageBuf shift_hsv_value(const ImageBuf& img, double delta);
ImageBuf shift_rgb(const ImageBuf& img, double delta);
ImageBuf gamma_hsv_value(const ImageBuf& img, double gamma);
ImageBuf gamma_rgb(const ImageBuf& img, double gamma);
ImageBuf contrast_scale(const ImageBuf& img, double alpha);
ImageBuf contrast_stretch(const ImageBuf& img, double alpha, double epsilon);
ImageBuf saturate_hsv(const ImageBuf& img, double scale);
ImageBuf saturate_ycbcr(const ImageBuf& img, double scale);

// sharpen.cpp
ImageBuf over_sharpen(const ImageBuf& img, double alpha, double blur_sigma, int kernel_size, unsigned threads);
ImageBuf pixelate(const ImageBuf& img, double factor);

// quantize.cpp
ImageBuf quantize_hist_equal(const ImageBuf& img, int classes);
ImageBuf quantize_median_cut(const ImageBuf& img, int classes);
ImageBuf quantize_otsu(const ImageBuf& img, int classes);

}  // namespace iqa::families
