#include <algorithm>
#include <cmath>

#include "families.hpp"
#include "iqa/distortion.hpp"
#include "iqa/io.hpp"

namespace iqa {
namespace {

int as_int(const Params& p, std::string_view name) { return static_cast<int>(std::lround(p.get(name))); }

// OpenJPEG's default six resolution levels need tiles of at least 2^5 pixels.
constexpr int kJpeg2000MinSide = 32;

}  // namespace

int required_min_side(SubCategory sub, const Params& p) {
  switch (sub) {
    case SubCategory::GaussianBlur: {
      int size = as_int(p, "kernel_size");
      return size % 2 == 0 ? size + 1 : size;
    }
    case SubCategory::MotionBlur:
      return 2 * std::max(1, as_int(p, "radius")) + 1;
    case SubCategory::GlassBlur:
      return 2 * static_cast<int>(std::ceil(3.0 * p.get("sigma"))) + 1;
    case SubCategory::LensBlur:
      return 2 * as_int(p, "radius") + 1;
    case SubCategory::SpatiallyCorrelatedNoise:
      return as_int(p, "filter_size");
    case SubCategory::Jpeg2000:
      return kJpeg2000MinSide;
    case SubCategory::OverSharpenUnsharp:
      return as_int(p, "kernel_size");
    default:
      return 1;
  }
}

bool distortion_supported(SubCategory sub) {
  return sub != SubCategory::Jpeg2000 || jpeg2000_available();
}

ImageBuf apply_distortion(const ImageBuf& img, const DistortionSpec& spec, unsigned threads) {
  namespace f = families;
  const Params& p = spec.params;
  const auto seed = spec.seed;
  if (!distortion_supported(spec.sub)) {
    throw UnsupportedDistortion(std::string(sub_key(spec.sub)) + " is not supported by this build");
  }
  const int need = required_min_side(spec.sub, p);
  if (std::min(img.width(), img.height()) < need) {
    throw DistortionError(std::string(sub_key(spec.sub)) + " needs an image side of at least " +
                          std::to_string(need) + " pixels, got " + std::to_string(img.width()) + "x" +
                          std::to_string(img.height()));
  }
  switch (spec.sub) {
    case SubCategory::GaussianBlur:
      return f::gaussian(img, p.get("sigma"), as_int(p, "kernel_size"), threads);
    case SubCategory::MotionBlur:
      return f::motion(img, p.get("radius"), p.get("sigma"), seed, threads);
    case SubCategory::GlassBlur:
      return f::glass(img, p.get("sigma"), as_int(p, "max_shift"), as_int(p, "iterations"), seed, threads);
    case SubCategory::LensBlur:
      return f::lens(img, as_int(p, "radius"), threads);
    case SubCategory::ZoomBlur:
      return f::zoom(img, p.get("max_zoom"), as_int(p, "steps"), threads);
    case SubCategory::JitterBlur:
      return f::jitter(img, as_int(p, "max_shift"), as_int(p, "copies"), seed, threads);
    case SubCategory::GaussianNoiseRgb:
      return f::gaussian_noise_rgb(img, p.get("sigma"), seed, threads);
    case SubCategory::GaussianNoiseYCbCr:
      return f::gaussian_noise_ycbcr(img, p.get("sigma_l"), p.get("sigma_r"), p.get("sigma_b"), seed, threads);
    case SubCategory::SpeckleNoise:
      return f::speckle_noise(img, p.get("sigma"), seed, threads);
    case SubCategory::SpatiallyCorrelatedNoise:
      return f::correlated_noise(img, p.get("sigma"), as_int(p, "filter_size"), seed, threads);
    case SubCategory::PoissonNoise:
      return f::poisson_noise(img, p.get("interval"), seed, threads);
    case SubCategory::ImpulseNoise:
      return f::impulse_noise(img, p.get("density"), seed, threads);
    case SubCategory::Jpeg:
      return f::jpeg(img, as_int(p, "quality"));
    case SubCategory::Jpeg2000:
      return f::jpeg2000(img, p.get("quality"));
    case SubCategory::BrightenShiftHsv:
    case SubCategory::DarkenShiftHsv:
      return f::shift_hsv_value(img, p.get("sigma"));
    case SubCategory::BrightenShiftRgb:
    case SubCategory::DarkenShiftRgb:
      return f::shift_rgb(img, p.get("sigma"));
    case SubCategory::BrightenGammaHsv:
    case SubCategory::DarkenGammaHsv:
      return f::gamma_hsv_value(img, p.get("gamma"));
    case SubCategory::BrightenGammaRgb:
    case SubCategory::DarkenGammaRgb:
      return f::gamma_rgb(img, p.get("gamma"));
    case SubCategory::ContrastStrengthenScale:
    case SubCategory::ContrastWeakenScale:
      return f::contrast_scale(img, p.get("alpha"));
    case SubCategory::ContrastStrengthenStretch:
    case SubCategory::ContrastWeakenStretch:
      return f::contrast_stretch(img, p.get("alpha"), p.get("epsilon"));
    case SubCategory::SaturateStrengthenHsv:
    case SubCategory::SaturateWeakenHsv:
      return f::saturate_hsv(img, p.get("scale"));
    case SubCategory::SaturateStrengthenYCbCr:
    case SubCategory::SaturateWeakenYCbCr:
      return f::saturate_ycbcr(img, p.get("scale"));
    case SubCategory::OverSharpenUnsharp:
      return f::over_sharpen(img, p.get("alpha"), p.get("blur_sigma"), as_int(p, "kernel_size"), threads);
    case SubCategory::PixelateBoxNearest:
      return f::pixelate(img, p.get("factor"));
    case SubCategory::QuantizeHistEqual:
      return f::quantize_hist_equal(img, as_int(p, "classes"));
    case SubCategory::QuantizeMedianCut:
      return f::quantize_median_cut(img, as_int(p, "classes"));
    case SubCategory::QuantizeOtsu:
      return f::quantize_otsu(img, as_int(p, "classes"));
  }
  throw DistortionError("unhandled sub-category");
}

}  // namespace iqa
