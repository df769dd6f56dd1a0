#include <cmath>
#include <stdexcept>

#include "iqa/distortion.hpp"

namespace iqa {
namespace {

using Level = std::array<double, 5>;

Params one(std::string_view name, const Level& values, int level) {
  return Params{{std::string(name), values[level - 1]}};
}

Params negate_first(Params p) {
  const auto& [name, value] = p.entries().front();
  p.set(name, -value);
  return p;
}

}  // namespace

double Params::get(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw std::out_of_range("missing distortion parameter '" + std::string(name) + "'");
}

std::optional<double> Params::find(std::string_view name) const {
  for (const auto& [k, v] : entries_) {
    if (k == name) return v;
  }
  return std::nullopt;
}

void Params::set(std::string_view name, double value) {
  for (auto& [k, v] : entries_) {
    if (k == name) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::string(name), value);
}

Params resolve_params(SubCategory sub, Severity severity) {
  const int l = severity.level();
  const auto i = static_cast<std::size_t>(l - 1);
  switch (sub) {
    case SubCategory::GaussianBlur: {
      constexpr Level sigma = {0.5, 1.0, 2.0, 3.0, 4.0};
      return Params{{"sigma", sigma[i]}, {"kernel_size", std::round(4.0 * sigma[i]) + 1.0}};
    }
    case SubCategory::MotionBlur: {
      constexpr Level radius = {5, 10, 15, 15, 20};
      constexpr Level sigma = {3, 5, 7, 9, 12};
      return Params{{"radius", radius[i]}, {"sigma", sigma[i]}};
    }
    case SubCategory::GlassBlur: {
      constexpr Level sigma = {0.7, 0.9, 1.2, 1.4, 1.6};
      constexpr Level shift = {1, 2, 2, 3, 4};
      constexpr Level iters = {1, 1, 2, 2, 2};
      return Params{{"sigma", sigma[i]}, {"max_shift", shift[i]}, {"iterations", iters[i]}};
    }
    case SubCategory::LensBlur:
      return one("radius", {1, 2, 4, 6, 8}, l);
    case SubCategory::ZoomBlur: {
      constexpr Level zoom = {1.03, 1.06, 1.10, 1.15, 1.21};
      return Params{{"max_zoom", zoom[i]}, {"steps", 10}};
    }
    case SubCategory::JitterBlur: {
      constexpr Level shift = {1, 2, 3, 4, 5};
      return Params{{"max_shift", shift[i]}, {"copies", 5}};
    }
    case SubCategory::GaussianNoiseRgb:
      return one("sigma", {0.05, 0.1, 0.15, 0.2, 0.25}, l);
    case SubCategory::GaussianNoiseYCbCr: {
      constexpr Level luma = {0.05, 0.06, 0.07, 0.08, 0.09};
      constexpr Level chroma = {1, 1.45, 1.9, 2.35, 2.8};
      return Params{{"sigma_l", luma[i]}, {"sigma_r", chroma[i]}, {"sigma_b", chroma[i]}};
    }
    case SubCategory::SpeckleNoise:
      return one("sigma", {0.14, 0.21, 0.28, 0.35, 0.42}, l);
    case SubCategory::SpatiallyCorrelatedNoise: {
      constexpr Level sigma = {0.05, 0.1, 0.15, 0.2, 0.25};
      return Params{{"sigma", sigma[i]}, {"filter_size", 3}};
    }
    case SubCategory::PoissonNoise:
      return one("interval", {80, 60, 40, 25, 15}, l);
    case SubCategory::ImpulseNoise:
      return one("density", {0.01, 0.03, 0.05, 0.07, 0.10}, l);
    case SubCategory::Jpeg:
      return one("quality", {25, 18, 12, 8, 5}, l);
    case SubCategory::Jpeg2000:
      return one("quality", {29, 27.5, 26, 24.5, 23}, l);
    case SubCategory::BrightenShiftHsv:
      return one("sigma", {0.1, 0.2, 0.3, 0.4, 0.5}, l);
    case SubCategory::BrightenShiftRgb:
      return one("sigma", {0.1, 0.15, 0.2, 0.27, 0.35}, l);
    case SubCategory::BrightenGammaHsv:
    case SubCategory::BrightenGammaRgb:
      return one("gamma", {0.7, 0.58, 0.47, 0.36, 0.25}, l);
    case SubCategory::DarkenShiftHsv:
      return negate_first(resolve_params(SubCategory::BrightenShiftHsv, severity));
    case SubCategory::DarkenShiftRgb:
      return negate_first(resolve_params(SubCategory::BrightenShiftRgb, severity));
    case SubCategory::DarkenGammaHsv:
    case SubCategory::DarkenGammaRgb:
      return one("gamma", {1.5, 1.8, 2.2, 2.7, 3.5}, l);
    case SubCategory::ContrastStrengthenScale:
      return one("alpha", {1.4, 1.7, 2.1, 2.6, 4.0}, l);
    case SubCategory::ContrastWeakenScale:
      return one("alpha", {0.75, 0.6, 0.45, 0.3, 0.2}, l);
    case SubCategory::ContrastStrengthenStretch: {
      constexpr Level alpha = {2, 4, 6, 8, 10};
      return Params{{"alpha", alpha[i]}, {"epsilon", 1e-4}};
    }
    case SubCategory::ContrastWeakenStretch: {
      constexpr Level alpha = {1.0, 0.9, 0.8, 0.6, 0.4};
      return Params{{"alpha", alpha[i]}, {"epsilon", 1e-4}};
    }
    case SubCategory::SaturateStrengthenHsv:
      return one("scale", {3, 6, 12, 20, 64}, l);
    case SubCategory::SaturateWeakenHsv:
      return one("scale", {0.7, 0.55, 0.4, 0.2, 0.0}, l);
    case SubCategory::SaturateStrengthenYCbCr:
      return one("scale", {2, 3, 5, 8, 16}, l);
    case SubCategory::SaturateWeakenYCbCr:
      return one("scale", {0.6, 0.4, 0.2, 0.1, 0.0}, l);
    case SubCategory::OverSharpenUnsharp: {
      constexpr Level alpha = {2, 2.8, 4, 6, 8};
      return Params{{"alpha", alpha[i]}, {"blur_sigma", 2}, {"kernel_size", 9}};
    }
    case SubCategory::PixelateBoxNearest:
      return one("factor", {0.5, 0.4, 0.3, 0.25, 0.2}, l);
    case SubCategory::QuantizeHistEqual:
      return one("classes", {24, 16, 8, 6, 4}, l);
    case SubCategory::QuantizeMedianCut:
      return one("classes", {20, 15, 10, 6, 3}, l);
    case SubCategory::QuantizeOtsu:
      return one("classes", {15, 11, 8, 5, 3}, l);
  }
  throw std::logic_error("unhandled sub-category");
}

bool params_from_literature(SubCategory sub) {
  switch (sub) {
    case SubCategory::GaussianBlur:
    case SubCategory::ZoomBlur:
    case SubCategory::SpatiallyCorrelatedNoise:
    case SubCategory::BrightenGammaRgb:
    case SubCategory::DarkenGammaRgb:
      return false;
    default:
      return true;
  }
}

DistortionSpec DistortionSpec::make(SubCategory sub, Severity severity, std::uint64_t seed) {
  return DistortionSpec{sub, severity, resolve_params(sub, severity), seed};
}

namespace {

// Integral values serialize as JSON integers so the catalog reads like the
// published lists: (15, 7) rather than (15.0, 7.0).
Json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9.0e15) {
    return Json(static_cast<long long>(v));
  }
  return Json(v);
}

}  // namespace

Json params_to_json(const Params& params) {
  Json j = Json::object();
  for (const auto& [k, v] : params.entries()) j[k] = number(v);
  return j;
}

Params params_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("distortion params must be a JSON object");
  Params p;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) throw std::invalid_argument("distortion param '" + k + "' is not a number");
    p.set(k, v.get<double>());
  }
  return p;
}

Json spec_to_json(const DistortionSpec& spec) {
  Json j;
  j["sub"] = std::string(sub_key(spec.sub));
  j["level"] = spec.severity.level();
  j["params"] = params_to_json(spec.params);
  j["seed"] = spec.seed;
  return j;
}

DistortionSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("distortion spec must be a JSON object");
  const auto key = j.at("sub").get<std::string>();
  const auto sub = sub_from_key(key);
  if (!sub) throw std::invalid_argument("unknown sub-category '" + key + "'");
  DistortionSpec spec;
  spec.sub = *sub;
  spec.severity = Severity::from_level(j.at("level").get<int>());
  spec.params = j.contains("params") ? params_from_json(j.at("params")) : resolve_params(*sub, spec.severity);
  spec.seed = j.value("seed", std::uint64_t{0});
  return spec;
}

Json severity_table_json() {
  Json doc;
  doc["version"] = std::string(kSeverityTableVersion);
  Json subs = Json::array();
  for (SubCategory sub : all_sub_categories()) {
    Json entry;
    entry["sub"] = std::string(sub_key(sub));
    entry["name"] = std::string(distortion_name(sub));
    entry["super"] = std::string(distortion_name(super_category(sub)));
    entry["source"] = params_from_literature(sub) ? "published" : "chosen";
    Json levels = Json::array();
    for (int l = Severity::kMin; l <= Severity::kMax; ++l) {
      const auto sev = Severity::from_level(l);
      Json lv;
      lv["level"] = l;
      lv["severity"] = std::string(sev.name());
      lv["params"] = params_to_json(resolve_params(sub, sev));
      levels.push_back(std::move(lv));
    }
    entry["levels"] = std::move(levels);
    subs.push_back(std::move(entry));
  }
  doc["sub_categories"] = std::move(subs);
  return doc;
}

}  // namespace iqa
