#include "iqa/composition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iqa/rng.hpp"

namespace iqa {
namespace {

using S = SuperCategory;

// Row order follows the published table; second entries keep its order too.
const std::array<std::vector<S>, 12>& combination_rows() {
  static const std::array<std::vector<S>, 12> rows = [] {
    std::array<std::vector<S>, 12> r;
    auto set = [&r](S first, std::vector<S> second) { r[static_cast<std::size_t>(first)] = std::move(second); };
    set(S::Blur, {S::Brighten, S::Compression, S::ContrastStrengthen, S::ContrastWeaken, S::Darken, S::Noise,
                  S::Quantize, S::SaturateStrengthen, S::SaturateWeaken});
    set(S::Brighten, {S::Blur, S::Compression, S::Noise, S::Pixelate, S::Quantize});
    set(S::Compression, {S::Blur, S::Brighten, S::ContrastStrengthen, S::ContrastWeaken, S::Darken, S::Noise,
                         S::SaturateStrengthen, S::SaturateWeaken});
    set(S::ContrastStrengthen, {S::Blur, S::Compression, S::Noise, S::Pixelate, S::Quantize});
    set(S::ContrastWeaken, {S::Blur, S::Compression, S::Noise, S::Pixelate, S::Quantize});
    set(S::Darken, {S::Blur, S::Compression, S::Noise, S::Pixelate, S::Quantize});
    set(S::Noise, {S::Blur, S::Brighten, S::Compression, S::ContrastStrengthen, S::ContrastWeaken, S::Darken,
                   S::OverSharpen, S::Pixelate, S::SaturateStrengthen, S::SaturateWeaken});
    set(S::OverSharpen, {S::Brighten});
    set(S::Pixelate, {S::Brighten, S::ContrastStrengthen, S::ContrastWeaken, S::Darken, S::Noise, S::OverSharpen,
                      S::Quantize, S::SaturateStrengthen, S::SaturateWeaken});
    set(S::Quantize, {S::Brighten, S::ContrastStrengthen, S::ContrastWeaken, S::Darken, S::Noise, S::OverSharpen,
                      S::Pixelate, S::SaturateStrengthen, S::SaturateWeaken});
    set(S::SaturateStrengthen, {S::Blur, S::Compression, S::Noise, S::OverSharpen, S::Pixelate, S::Quantize});
    set(S::SaturateWeaken, {S::Blur, S::Compression, S::Noise, S::OverSharpen, S::Pixelate, S::Quantize});
    return r;
  }();
  return rows;
}

constexpr std::array<S, 12> kTableRowOrder = {
    S::Blur,   S::Brighten,    S::Compression, S::ContrastStrengthen, S::ContrastWeaken,     S::Darken,
    S::Noise,  S::OverSharpen, S::Pixelate,    S::Quantize,           S::SaturateStrengthen, S::SaturateWeaken,
};

constexpr std::uint64_t kTagPristine = 0x70726973ULL;
constexpr std::uint64_t kTagArity = 0x61726974ULL;
constexpr std::uint64_t kTagPair = 0x70616972ULL;
constexpr std::uint64_t kTagSpec = 0x73706563ULL;

// Draws one (sub, level) spec, redrawing while the setting forbids it.
DistortionSpec draw_spec(std::uint64_t seed, std::uint64_t slot, std::span<const SubCategory> pool,
                         ReferenceSetting setting) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterRng rng(seed, {kTagSpec, slot, attempt});
    const auto sub = pool[rng.below(pool.size())];
    const auto level = static_cast<int>(rng.range(Severity::kMin, Severity::kMax));
    auto spec = DistortionSpec::make(sub, Severity::from_level(level), derive_key(seed, {kTagSpec, slot, 0xFFFF}));
    if (spec_allowed(spec, setting)) return spec;
  }
}

}  // namespace

std::vector<SuperCategory> Recipe::supers() const {
  std::vector<SuperCategory> out;
  for (const auto& s : specs) out.push_back(s.super());
  return out;
}

std::span<const SuperCategory> allowed_second(SuperCategory first) {
  return combination_rows()[static_cast<std::size_t>(first)];
}

bool combination_allowed(SuperCategory first, SuperCategory second) {
  const auto row = allowed_second(first);
  return std::find(row.begin(), row.end(), second) != row.end();
}

const std::vector<std::pair<SuperCategory, SuperCategory>>& allowed_pairs() {
  static const auto pairs = [] {
    std::vector<std::pair<S, S>> out;
    for (S first : kTableRowOrder) {
      for (S second : allowed_second(first)) out.emplace_back(first, second);
    }
    return out;
  }();
  return pairs;
}

std::string_view setting_name(ReferenceSetting s) {
  return s == ReferenceSetting::FullReference ? "full-reference" : "non-reference";
}

std::optional<ReferenceSetting> setting_from_name(std::string_view name) {
  if (name == "full-reference") return ReferenceSetting::FullReference;
  if (name == "non-reference") return ReferenceSetting::NonReference;
  return std::nullopt;
}

bool excluded_when_slight(SuperCategory super) {
  switch (super) {
    case S::Brighten:
    case S::Darken:
    case S::ContrastWeaken:
    case S::ContrastStrengthen:
    case S::SaturateWeaken:
    case S::SaturateStrengthen:
    case S::Quantize:
    case S::OverSharpen:
      return true;
    default:
      return false;
  }
}

bool spec_allowed(const DistortionSpec& spec, ReferenceSetting setting) {
  return setting == ReferenceSetting::FullReference || spec.severity.level() != 1 ||
         !excluded_when_slight(spec.super());
}

Recipe sample_recipe(std::uint64_t seed, const SampleMode& mode, ReferenceSetting setting) {
  if (mode.pristine_frac < 0.0 || mode.pristine_frac > 1.0 || mode.multi_frac < 0.0 || mode.multi_frac > 1.0) {
    throw std::invalid_argument("sample_recipe: fractions must lie in [0,1]");
  }
  bool multi = mode.kind == SampleMode::Kind::Multi;
  if (mode.kind == SampleMode::Kind::Mixed) {
    if (CounterRng(seed, {kTagPristine}).uniform() < mode.pristine_frac) return Recipe{};
    multi = CounterRng(seed, {kTagArity}).uniform() < mode.multi_frac;
  }
  Recipe recipe;
  if (!multi) {
    recipe.specs.push_back(draw_spec(seed, 0, all_sub_categories(), setting));
    return recipe;
  }
  const auto& pairs = allowed_pairs();
  const auto [first, second] = pairs[CounterRng(seed, {kTagPair}).below(pairs.size())];
  recipe.specs.push_back(draw_spec(seed, 0, sub_categories_of(first), setting));
  recipe.specs.push_back(draw_spec(seed, 1, sub_categories_of(second), setting));
  return recipe;
}

std::vector<RecipeViolation> validate_recipe(const Recipe& recipe, std::optional<ReferenceSetting> setting) {
  std::vector<RecipeViolation> out;
  using K = RecipeViolation::Kind;
  const auto& specs = recipe.specs;
  if (specs.size() > kMaxDistortions) {
    out.push_back({K::TooManyDistortions,
                   "recipe has " + std::to_string(specs.size()) + " distortions, at most 2 are allowed"});
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      if (specs[i].super() == specs[j].super()) {
        out.push_back({K::DuplicateSuperCategory,
                       "super-category '" + std::string(distortion_name(specs[i].super())) + "' appears twice"});
      }
    }
  }
  if (specs.size() == 2 && specs[0].super() != specs[1].super() &&
      !combination_allowed(specs[0].super(), specs[1].super())) {
    out.push_back({K::PairNotAllowed, "'" + std::string(distortion_name(specs[0].super())) + "' followed by '" +
                                          std::string(distortion_name(specs[1].super())) +
                                          "' is not an allowed combination"});
  }
  if (setting) {
    for (const auto& s : specs) {
      if (!spec_allowed(s, *setting)) {
        out.push_back({K::SlightExcluded, "slight '" + std::string(distortion_name(s.super())) +
                                              "' is excluded in the non-reference setting"});
      }
    }
  }
  return out;
}

OodSide ood_split(SubCategory sub) {
  switch (sub) {
    case SubCategory::GaussianBlur:
    case SubCategory::JitterBlur:
    case SubCategory::GaussianNoiseRgb:
    case SubCategory::ImpulseNoise:
    case SubCategory::Jpeg2000:
    case SubCategory::BrightenGammaRgb:
    case SubCategory::DarkenGammaRgb:
    case SubCategory::ContrastStrengthenStretch:
    case SubCategory::ContrastWeakenStretch:
    case SubCategory::SaturateStrengthenYCbCr:
    case SubCategory::SaturateWeakenYCbCr:
    case SubCategory::QuantizeHistEqual:
      return OodSide::Validation;
    default:
      return OodSide::Train;
  }
}

Json recipe_to_json(const Recipe& recipe) {
  Json arr = Json::array();
  for (const auto& s : recipe.specs) arr.push_back(spec_to_json(s));
  return arr;
}

Recipe recipe_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("recipe must be a JSON array");
  Recipe r;
  for (const auto& s : j) r.specs.push_back(spec_from_json(s));
  return r;
}

Json combination_table_json() {
  Json doc = Json::object();
  for (S first : kTableRowOrder) {
    Json row = Json::array();
    for (S second : allowed_second(first)) row.push_back(std::string(distortion_name(second)));
    doc[std::string(distortion_name(first))] = std::move(row);
  }
  return doc;
}

Json ood_table_json() {
  Json doc = Json::object();
  for (S super : kAllSuperCategories) {
    Json entry;
    entry["train"] = Json::array();
    entry["validation"] = Json::array();
    for (SubCategory sub : sub_categories_of(super)) {
      entry[ood_split(sub) == OodSide::Train ? "train" : "validation"].push_back(std::string(sub_key(sub)));
    }
    doc[std::string(distortion_name(super))] = std::move(entry);
  }
  return doc;
}

}  // namespace iqa
