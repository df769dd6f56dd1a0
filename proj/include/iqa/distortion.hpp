#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "iqa/image.hpp"
#include "json.hpp"

namespace iqa {

enum class SuperCategory {
  Blur,
  Noise,
  Compression,
  Brighten,
  Darken,
  ContrastStrengthen,
  ContrastWeaken,
  SaturateStrengthen,
  SaturateWeaken,
  OverSharpen,
  Pixelate,
  Quantize,
};

inline constexpr std::array<SuperCategory, 12> kAllSuperCategories = {
    SuperCategory::Blur,         SuperCategory::Noise,
    SuperCategory::Compression,  SuperCategory::Brighten,
    SuperCategory::Darken,       SuperCategory::ContrastStrengthen,
    SuperCategory::ContrastWeaken, SuperCategory::SaturateStrengthen,
    SuperCategory::SaturateWeaken, SuperCategory::OverSharpen,
    SuperCategory::Pixelate,     SuperCategory::Quantize,
};

enum class SubCategory {
  GaussianBlur,
  MotionBlur,
  GlassBlur,
  LensBlur,
  ZoomBlur,
  JitterBlur,
  GaussianNoiseRgb,
  GaussianNoiseYCbCr,
  SpeckleNoise,
  SpatiallyCorrelatedNoise,
  PoissonNoise,
  ImpulseNoise,
  Jpeg,
  Jpeg2000,
  BrightenShiftHsv,
  BrightenShiftRgb,
  BrightenGammaHsv,
  BrightenGammaRgb,
  DarkenShiftHsv,
  DarkenShiftRgb,
  DarkenGammaHsv,
  DarkenGammaRgb,
  ContrastStrengthenScale,
  ContrastStrengthenStretch,
  ContrastWeakenScale,
  ContrastWeakenStretch,
  SaturateStrengthenHsv,
  SaturateStrengthenYCbCr,
  SaturateWeakenHsv,
  SaturateWeakenYCbCr,
  OverSharpenUnsharp,
  PixelateBoxNearest,
  QuantizeHistEqual,
  QuantizeMedianCut,
  QuantizeOtsu,
};

inline constexpr std::size_t kSubCategoryCount = 35;

std::span<const SubCategory> all_sub_categories();
std::span<const SubCategory> sub_categories_of(SuperCategory super);
SuperCategory super_category(SubCategory sub);

/// Five named severity levels, 1 = slight ... 5 = catastrophic.
class Severity {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 5;

  /// Throws std::out_of_range outside [1,5].
  static Severity from_level(int level);
  static std::optional<Severity> from_name(std::string_view name);

  int level() const { return level_; }
  std::string_view name() const;

  friend bool operator==(Severity, Severity) = default;
  friend auto operator<=>(Severity, Severity) = default;

 private:
  explicit constexpr Severity(int level) : level_(level) {}
  int level_ = 1;
};

// ---------------------------------------------------------------------------
// Names

/// Lowercase display names: "noise", "contrast strengthen", "motion blur", ...
std::string_view distortion_name(SuperCategory super);
std::string_view distortion_name(SubCategory sub);

/// Stable kebab-case identifier used on the command line and in JSON:
/// "motion-blur", "jpeg", "brighten-gamma-rgb", ...
std::string_view sub_key(SubCategory sub);
std::optional<SubCategory> sub_from_key(std::string_view key);
std::optional<SuperCategory> super_from_name(std::string_view name);

struct NoMatch {
  friend bool operator==(NoMatch, NoMatch) = default;
};
using ParsedDistortion = std::variant<NoMatch, SubCategory, SuperCategory>;

/// Case-insensitive parse of a whole phrase. Sub-category keys and display
/// names resolve to the sub-category; super-category names and registered
/// synonyms ("jpeg compression", "noisy", ...) resolve to the super-category.
ParsedDistortion parse_distortion_name(std::string_view text);

/// Super-categories mentioned anywhere in free text, in order of first
/// appearance, without duplicates.
std::vector<SuperCategory> find_super_categories(std::string_view text);

/// Lowercases and collapses every run of non-alphanumerics to one space.
std::string normalize_phrase(std::string_view text);

// ---------------------------------------------------------------------------
// Parameters

/// Ordered (name, value) record of resolved numeric parameters.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<std::string, double>> entries) : entries_(entries) {}

  /// Throws std::out_of_range if absent.
  double get(std::string_view name) const;
  std::optional<double> find(std::string_view name) const;
  /// Overwrites an existing entry or appends a new one.
  void set(std::string_view name, double value);

  const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

inline constexpr std::string_view kSeverityTableVersion = "1.0.0";

/// Canonical table entry for (sub, severity). Total.
Params resolve_params(SubCategory sub, Severity severity);

/// True when every value for this sub-category comes from the published
/// parameter lists; false for values this library had to choose.
bool params_from_literature(SubCategory sub);

struct DistortionSpec {
  SubCategory sub = SubCategory::GaussianBlur;
  Severity severity = Severity::from_level(1);
  Params params;
  std::uint64_t seed = 0;

  static DistortionSpec make(SubCategory sub, Severity severity, std::uint64_t seed);

  SuperCategory super() const { return super_category(sub); }
  friend bool operator==(const DistortionSpec&, const DistortionSpec&) = default;
};

class DistortionError : public ImageError {
 public:
  using ImageError::ImageError;
};

/// Raised for sub-categories whose backing codec is not compiled in.
class UnsupportedDistortion : public DistortionError {
 public:
  using DistortionError::DistortionError;
};

/// Smallest image side the sub-category can be applied to with `params`.
int required_min_side(SubCategory sub, const Params& params);

bool distortion_supported(SubCategory sub);

/// Deterministic in (img, spec); `threads` only changes speed, never output.
ImageBuf apply_distortion(const ImageBuf& img, const DistortionSpec& spec, unsigned threads = 1);

// ---------------------------------------------------------------------------
// JSON

using Json = nlohmann::ordered_json;

Json params_to_json(const Params& params);
Params params_from_json(const Json& j);
Json spec_to_json(const DistortionSpec& spec);
DistortionSpec spec_from_json(const Json& j);

/// The versioned severity table as a document.
Json severity_table_json();

}  // namespace iqa
