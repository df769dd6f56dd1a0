#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "iqa/dataset.hpp"

namespace iqa {

/// Everything `build` needs. Key names match the command-line flags.
struct BuildConfig {
  std::filesystem::path refs;               // directory of reference images
  Task task = Task::DistortionIdentification;
  ReferenceSetting setting = ReferenceSetting::FullReference;
  std::size_t count = 100;
  double pristine_frac = 0.05;
  double multi_frac = 0.5;
  std::uint64_t seed = 0;
  std::filesystem::path out;                // dataset JSONL; images go next to it
  std::optional<std::filesystem::path> mos;  // instant-rating only
  unsigned parallel = 1;

  static BuildConfig from_json(const Json& j);
  Json to_json() const;
};

/// Throws ConfigError naming the offending key.
void validate(const BuildConfig& config);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct BuildSummary {
  std::size_t records = 0;
  std::size_t pristine = 0;
  std::size_t single = 0;
  std::size_t multi = 0;
  std::map<std::string, std::size_t> per_super;     // spec counts by super-category
  std::map<std::string, std::size_t> per_severity;  // spec counts by severity name
  std::size_t slight_in_excluded = 0;               // slight specs in the non-reference exclusion set

  Json to_json() const;
};

/// Sorted PNG/JPEG files directly inside `dir`.
std::vector<std::filesystem::path> list_reference_images(const std::filesystem::path& dir);

/// Per-record seed: a pure function of the global seed and record index.
std::uint64_t record_seed(std::uint64_t global_seed, std::size_t index);

/// Builds the dataset, writes the JSONL at config.out and images under
/// `<out dir>/images`. Output is identical for every value of `parallel`.
BuildSummary build_dataset(const BuildConfig& config);

/// Tallies recipes of already built records.
BuildSummary summarize(std::span<const SampleRecord> records);

}  // namespace iqa
