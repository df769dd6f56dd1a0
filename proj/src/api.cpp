#include "iqa/api.hpp"

#include <stdexcept>
#include <string>

namespace iqa::api {

std::vector<double> apply_distortion(std::span<const double> hwc, int height, int width, std::string_view sub,
                                     int level, std::uint64_t seed) {
  const auto key = sub_from_key(sub);
  if (!key) throw std::invalid_argument("unknown sub-category '" + std::string(sub) + "'");
  if (height < 1 || width < 1 || hwc.size() != static_cast<std::size_t>(height) * width * 3) {
    throw ImageError("expected an array of shape (" + std::to_string(height) + ", " + std::to_string(width) + ", 3)");
  }
  const auto img = ImageBuf::from_pixels(width, height, std::vector<double>(hwc.begin(), hwc.end()));
  const auto out = iqa::apply_distortion(img, DistortionSpec::make(*key, Severity::from_level(level), seed));
  return {out.pixels().begin(), out.pixels().end()};
}

std::filesystem::path build_dataset(const Json& config) {
  const auto c = BuildConfig::from_json(config);
  iqa::build_dataset(c);
  return c.out;
}

}  // namespace iqa::api
