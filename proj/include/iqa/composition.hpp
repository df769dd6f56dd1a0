#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iqa/distortion.hpp"

namespace iqa {

/// Up to two distortions applied in order to one reference image. An empty
/// recipe is a pristine sample.
struct Recipe {
  std::vector<DistortionSpec> specs;

  bool pristine() const { return specs.empty(); }
  std::vector<SuperCategory> supers() const;
  friend bool operator==(const Recipe&, const Recipe&) = default;
};

inline constexpr std::size_t kMaxDistortions = 2;

/// The ordered table of legal (first, second) super-category pairs.
std::span<const SuperCategory> allowed_second(SuperCategory first);
bool combination_allowed(SuperCategory first, SuperCategory second);
/// Every legal ordered pair, in table order.
const std::vector<std::pair<SuperCategory, SuperCategory>>& allowed_pairs();

enum class ReferenceSetting { FullReference, NonReference };

std::string_view setting_name(ReferenceSetting s);
std::optional<ReferenceSetting> setting_from_name(std::string_view name);

/// Super-categories whose slight level is dropped without a reference.
bool excluded_when_slight(SuperCategory super);
/// True when `spec` is legal under `setting`.
bool spec_allowed(const DistortionSpec& spec, ReferenceSetting setting);

struct SampleMode {
  enum class Kind { Single, Multi, Mixed };
  Kind kind = Kind::Mixed;
  double pristine_frac = 0.05;  // Mixed only
  double multi_frac = 0.5;      // Mixed only; applies to non-pristine draws

  static SampleMode single() { return {Kind::Single, 0.0, 0.0}; }
  static SampleMode multi() { return {Kind::Multi, 0.0, 1.0}; }
  static SampleMode mixed(double pristine_frac, double multi_frac) {
    return {Kind::Mixed, pristine_frac, multi_frac};
  }
};

/// Pure function of (seed, mode, setting).
Recipe sample_recipe(std::uint64_t seed, const SampleMode& mode, ReferenceSetting setting);

struct RecipeViolation {
  enum class Kind { TooManyDistortions, PairNotAllowed, DuplicateSuperCategory, SlightExcluded };
  Kind kind;
  std::string message;
};

/// Every violated invariant; empty means valid. The setting check only runs
/// when a setting is given.
std::vector<RecipeViolation> validate_recipe(const Recipe& recipe,
                                             std::optional<ReferenceSetting> setting = std::nullopt);

enum class OodSide { Train, Validation };

OodSide ood_split(SubCategory sub);

Json recipe_to_json(const Recipe& recipe);
Recipe recipe_from_json(const Json& j);
Json combination_table_json();
Json ood_table_json();

}  // namespace iqa
