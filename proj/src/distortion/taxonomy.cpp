#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "iqa/distortion.hpp"

namespace iqa {
namespace {

struct SubInfo {
  SubCategory sub;
  SuperCategory super;
  std::string_view key;
  std::string_view display;
};

constexpr std::array<SubInfo, kSubCategoryCount> kSubs = {{
    {SubCategory::GaussianBlur, SuperCategory::Blur, "gaussian-blur", "gaussian blur"},
    {SubCategory::MotionBlur, SuperCategory::Blur, "motion-blur", "motion blur"},
    {SubCategory::GlassBlur, SuperCategory::Blur, "glass-blur", "glass blur"},
    {SubCategory::LensBlur, SuperCategory::Blur, "lens-blur", "lens blur"},
    {SubCategory::ZoomBlur, SuperCategory::Blur, "zoom-blur", "zoom blur"},
    {SubCategory::JitterBlur, SuperCategory::Blur, "jitter-blur", "jitter blur"},
    {SubCategory::GaussianNoiseRgb, SuperCategory::Noise, "gaussian-noise-rgb", "gaussian noise in rgb space"},
    {SubCategory::GaussianNoiseYCbCr, SuperCategory::Noise, "gaussian-noise-ycbcr", "gaussian noise in ycbcr space"},
    {SubCategory::SpeckleNoise, SuperCategory::Noise, "speckle-noise", "speckle noise"},
    {SubCategory::SpatiallyCorrelatedNoise, SuperCategory::Noise, "spatially-correlated-noise", "spatially correlated noise"},
    {SubCategory::PoissonNoise, SuperCategory::Noise, "poisson-noise", "poisson noise"},
    {SubCategory::ImpulseNoise, SuperCategory::Noise, "impulse-noise", "impulse noise"},
    {SubCategory::Jpeg, SuperCategory::Compression, "jpeg", "jpeg"},
    {SubCategory::Jpeg2000, SuperCategory::Compression, "jpeg2000", "jpeg2000"},
    {SubCategory::BrightenShiftHsv, SuperCategory::Brighten, "brighten-shift-hsv", "shift brighten in hsv space"},
    {SubCategory::BrightenShiftRgb, SuperCategory::Brighten, "brighten-shift-rgb", "shift brighten in rgb space"},
    {SubCategory::BrightenGammaHsv, SuperCategory::Brighten, "brighten-gamma-hsv", "gamma brighten in hsv space"},
    {SubCategory::BrightenGammaRgb, SuperCategory::Brighten, "brighten-gamma-rgb", "gamma brighten in rgb space"},
    {SubCategory::DarkenShiftHsv, SuperCategory::Darken, "darken-shift-hsv", "shift darken in hsv space"},
    {SubCategory::DarkenShiftRgb, SuperCategory::Darken, "darken-shift-rgb", "shift darken in rgb space"},
    {SubCategory::DarkenGammaHsv, SuperCategory::Darken, "darken-gamma-hsv", "gamma darken in hsv space"},
    {SubCategory::DarkenGammaRgb, SuperCategory::Darken, "darken-gamma-rgb", "gamma darken in rgb space"},
    {SubCategory::ContrastStrengthenScale, SuperCategory::ContrastStrengthen, "contrast-strengthen-scale", "contrast strengthen by scaling"},
    {SubCategory::ContrastStrengthenStretch, SuperCategory::ContrastStrengthen, "contrast-strengthen-stretch", "contrast strengthen by stretching"},
    {SubCategory::ContrastWeakenScale, SuperCategory::ContrastWeaken, "contrast-weaken-scale", "contrast weaken by scaling"},
    {SubCategory::ContrastWeakenStretch, SuperCategory::ContrastWeaken, "contrast-weaken-stretch", "contrast weaken by stretching"},
    {SubCategory::SaturateStrengthenHsv, SuperCategory::SaturateStrengthen, "saturate-strengthen-hsv", "saturate strengthen in hsv space"},
    {SubCategory::SaturateStrengthenYCbCr, SuperCategory::SaturateStrengthen, "saturate-strengthen-ycbcr", "saturate strengthen in ycbcr space"},
    {SubCategory::SaturateWeakenHsv, SuperCategory::SaturateWeaken, "saturate-weaken-hsv", "saturate weaken in hsv space"},
    {SubCategory::SaturateWeakenYCbCr, SuperCategory::SaturateWeaken, "saturate-weaken-ycbcr", "saturate weaken in ycbcr space"},
    {SubCategory::OverSharpenUnsharp, SuperCategory::OverSharpen, "oversharpen", "over-sharpen by unsharp masking"},
    {SubCategory::PixelateBoxNearest, SuperCategory::Pixelate, "pixelate", "pixelate by box down-sampling"},
    {SubCategory::QuantizeHistEqual, SuperCategory::Quantize, "quantize-hist-equal", "quantization by histogram equalization"},
    {SubCategory::QuantizeMedianCut, SuperCategory::Quantize, "quantize-median-cut", "quantization by histogram median"},
    {SubCategory::QuantizeOtsu, SuperCategory::Quantize, "quantize-otsu", "quantization by otsu method"},
}};

constexpr std::array<std::string_view, 12> kSuperNames = {
    "blur",     "noise",          "compression",         "brighten",
    "darken",   "contrast strengthen", "contrast weaken", "saturate strengthen",
    "saturate weaken", "over-sharpen", "pixelate",        "quantize",
};

struct Synonym {
  std::string_view phrase;  // already normalized
  SuperCategory super;
};

// Phrases are matched on normalized token sequences; longest match wins.
// "contrast" and "saturation" alone are deliberately absent: they do not say
// which direction.
constexpr Synonym kSynonyms[] = {
    {"blur", SuperCategory::Blur},
    {"blurry", SuperCategory::Blur},
    {"blurred", SuperCategory::Blur},
    {"blurriness", SuperCategory::Blur},
    {"blurring", SuperCategory::Blur},
    {"noise", SuperCategory::Noise},
    {"noisy", SuperCategory::Noise},
    {"grain", SuperCategory::Noise},
    {"grainy", SuperCategory::Noise},
    {"compression", SuperCategory::Compression},
    {"compressed", SuperCategory::Compression},
    {"jpeg compression", SuperCategory::Compression},
    {"jpeg2000 compression", SuperCategory::Compression},
    {"jpeg 2000 compression", SuperCategory::Compression},
    {"jpeg", SuperCategory::Compression},
    {"jpeg2000", SuperCategory::Compression},
    {"jpeg 2000", SuperCategory::Compression},
    {"compression artifacts", SuperCategory::Compression},
    {"brighten", SuperCategory::Brighten},
    {"brightened", SuperCategory::Brighten},
    {"brightening", SuperCategory::Brighten},
    {"overexposed", SuperCategory::Brighten},
    {"overexposure", SuperCategory::Brighten},
    {"over exposed", SuperCategory::Brighten},
    {"too bright", SuperCategory::Brighten},
    {"darken", SuperCategory::Darken},
    {"darkened", SuperCategory::Darken},
    {"darkening", SuperCategory::Darken},
    {"underexposed", SuperCategory::Darken},
    {"underexposure", SuperCategory::Darken},
    {"under exposed", SuperCategory::Darken},
    {"too dark", SuperCategory::Darken},
    {"contrast strengthen", SuperCategory::ContrastStrengthen},
    {"contrast strengthening", SuperCategory::ContrastStrengthen},
    {"contrast strengthened", SuperCategory::ContrastStrengthen},
    {"contrast enhancement", SuperCategory::ContrastStrengthen},
    {"high contrast", SuperCategory::ContrastStrengthen},
    {"increased contrast", SuperCategory::ContrastStrengthen},
    {"contrast weaken", SuperCategory::ContrastWeaken},
    {"contrast weakening", SuperCategory::ContrastWeaken},
    {"contrast weakened", SuperCategory::ContrastWeaken},
    {"low contrast", SuperCategory::ContrastWeaken},
    {"reduced contrast", SuperCategory::ContrastWeaken},
    {"saturate strengthen", SuperCategory::SaturateStrengthen},
    {"saturation strengthen", SuperCategory::SaturateStrengthen},
    {"saturate strengthening", SuperCategory::SaturateStrengthen},
    {"saturation strengthening", SuperCategory::SaturateStrengthen},
    {"oversaturated", SuperCategory::SaturateStrengthen},
    {"oversaturation", SuperCategory::SaturateStrengthen},
    {"over saturated", SuperCategory::SaturateStrengthen},
    {"saturate weaken", SuperCategory::SaturateWeaken},
    {"saturation weaken", SuperCategory::SaturateWeaken},
    {"saturate weakening", SuperCategory::SaturateWeaken},
    {"saturation weakening", SuperCategory::SaturateWeaken},
    {"desaturated", SuperCategory::SaturateWeaken},
    {"desaturation", SuperCategory::SaturateWeaken},
    {"undersaturated", SuperCategory::SaturateWeaken},
    {"over sharpen", SuperCategory::OverSharpen},
    {"over sharpened", SuperCategory::OverSharpen},
    {"over sharpening", SuperCategory::OverSharpen},
    {"oversharpen", SuperCategory::OverSharpen},
    {"oversharpened", SuperCategory::OverSharpen},
    {"oversharpening", SuperCategory::OverSharpen},
    {"pixelate", SuperCategory::Pixelate},
    {"pixelated", SuperCategory::Pixelate},
    {"pixelation", SuperCategory::Pixelate},
    {"pixelization", SuperCategory::Pixelate},
    {"quantize", SuperCategory::Quantize},
    {"quantized", SuperCategory::Quantize},
    {"quantization", SuperCategory::Quantize},
    {"color quantization", SuperCategory::Quantize},
};

const SubInfo& info(SubCategory sub) { return kSubs[static_cast<std::size_t>(sub)]; }

std::vector<std::string_view> split_tokens(std::string_view normalized) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < normalized.size()) {
    const std::size_t j = normalized.find(' ', i);
    const std::size_t end = j == std::string_view::npos ? normalized.size() : j;
    if (end > i) out.push_back(normalized.substr(i, end - i));
    i = end + 1;
  }
  return out;
}

std::string to_lower_trimmed(std::string_view text) {
  std::string s;
  for (char ch : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

struct PhraseTable {
  std::vector<std::pair<std::vector<std::string>, SuperCategory>> phrases;
  std::size_t max_len = 0;

  PhraseTable() {
    auto add = [this](std::string_view phrase, SuperCategory super) {
      const std::string norm = normalize_phrase(phrase);
      std::vector<std::string> toks;
      for (auto t : split_tokens(norm)) toks.emplace_back(t);
      max_len = std::max(max_len, toks.size());
      phrases.emplace_back(std::move(toks), super);
    };
    for (std::size_t i = 0; i < kSuperNames.size(); ++i) add(kSuperNames[i], kAllSuperCategories[i]);
    for (const auto& s : kSynonyms) add(s.phrase, s.super);
    for (const auto& s : kSubs) add(s.display, s.super);
  }
};

const PhraseTable& phrase_table() {
  static const PhraseTable table;
  return table;
}

}  // namespace

std::span<const SubCategory> all_sub_categories() {
  static const auto subs = [] {
    std::array<SubCategory, kSubCategoryCount> out{};
    for (std::size_t i = 0; i < kSubs.size(); ++i) out[i] = kSubs[i].sub;
    return out;
  }();
  return subs;
}

std::span<const SubCategory> sub_categories_of(SuperCategory super) {
  static const auto groups = [] {
    std::array<std::vector<SubCategory>, 12> g;
    for (const auto& s : kSubs) g[static_cast<std::size_t>(s.super)].push_back(s.sub);
    return g;
  }();
  return groups[static_cast<std::size_t>(super)];
}

SuperCategory super_category(SubCategory sub) { return info(sub).super; }

Severity Severity::from_level(int level) {
  if (level < kMin || level > kMax) {
    throw std::out_of_range("severity level must be in [1,5], got " + std::to_string(level));
  }
  return Severity(level);
}

std::optional<Severity> Severity::from_name(std::string_view name) {
  const std::string s = to_lower_trimmed(name);
  for (int l = kMin; l <= kMax; ++l) {
    if (Severity(l).name() == s) return Severity(l);
  }
  return std::nullopt;
}

std::string_view Severity::name() const {
  static constexpr std::array<std::string_view, 5> kNames = {"slight", "moderate", "obvious", "serious",
                                                             "catastrophic"};
  return kNames[level_ - 1];
}

std::string_view distortion_name(SuperCategory super) { return kSuperNames[static_cast<std::size_t>(super)]; }
std::string_view distortion_name(SubCategory sub) { return info(sub).display; }
std::string_view sub_key(SubCategory sub) { return info(sub).key; }

std::optional<SubCategory> sub_from_key(std::string_view key) {
  const std::string k = to_lower_trimmed(key);
  for (const auto& s : kSubs) {
    if (s.key == k) return s.sub;
  }
  return std::nullopt;
}

std::optional<SuperCategory> super_from_name(std::string_view name) {
  const std::string n = normalize_phrase(name);
  for (std::size_t i = 0; i < kSuperNames.size(); ++i) {
    if (normalize_phrase(kSuperNames[i]) == n) return kAllSuperCategories[i];
  }
  return std::nullopt;
}

std::string normalize_phrase(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isalnum(uc)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

ParsedDistortion parse_distortion_name(std::string_view text) {
  const std::string lowered = to_lower_trimmed(text);
  if (lowered.empty()) return NoMatch{};
  const std::string norm = normalize_phrase(lowered);
  // A super-category name wins over a single sub-category sharing it.
  for (std::size_t i = 0; i < kSuperNames.size(); ++i) {
    if (normalize_phrase(kSuperNames[i]) == norm) return kAllSuperCategories[i];
  }
  for (const auto& s : kSubs) {
    if (s.key == lowered || s.display == lowered) return s.sub;
  }
  for (const auto& s : kSubs) {
    if (normalize_phrase(s.display) == norm) return s.sub;
  }
  for (const auto& syn : kSynonyms) {
    if (syn.phrase == norm) return syn.super;
  }
  return NoMatch{};
}

std::vector<SuperCategory> find_super_categories(std::string_view text) {
  const std::string norm = normalize_phrase(text);
  const auto tokens = split_tokens(norm);
  const auto& table = phrase_table();
  std::vector<SuperCategory> found;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t best_len = 0;
    SuperCategory best{};
    for (const auto& [phrase, super] : table.phrases) {
      if (phrase.size() <= best_len || i + phrase.size() > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < phrase.size(); ++k) {
        if (tokens[i + k] != phrase[k]) {
          match = false;
          break;
        }
      }
      if (match) {
        best_len = phrase.size();
        best = super;
      }
    }
    if (best_len == 0) {
      ++i;
      continue;
    }
    if (std::find(found.begin(), found.end(), best) == found.end()) found.push_back(best);
    i += best_len;
  }
  return found;
}

}  // namespace iqa
