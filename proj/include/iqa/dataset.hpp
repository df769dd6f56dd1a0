#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iqa/composition.hpp"
#include "iqa/image.hpp"

namespace iqa {

enum class Task { DistortionIdentification, InstantRating, AssessmentReasoningPrompt, ComparisonReasoningPrompt };

/// "distortion-identification", "instant-rating", "assessment-reasoning-prompt",
/// "comparison-reasoning-prompt".
std::string_view task_name(Task task);
std::optional<Task> task_from_name(std::string_view name);
bool is_brief(Task task);

struct ImageRefs {
  std::optional<std::string> reference;
  std::string image_a;
  std::optional<std::string> image_b;
  friend bool operator==(const ImageRefs&, const ImageRefs&) = default;
};

struct SampleRecord {
  std::string id;
  Task task = Task::DistortionIdentification;
  ReferenceSetting setting = ReferenceSetting::FullReference;
  ImageRefs images;
  std::string question;
  std::string response;  // empty for the prompt tasks
  // Canonical brief answer: comma-joined distortion names, "none", "Image A"
  // or "Image B". Used as ground truth by evaluation and the oracle.
  std::string answer;
  bool short_answer = false;
  Json recipe_meta = Json::array();  // one serialized recipe per evaluated image
  std::string generator_prompt;      // prompt tasks only

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Throws std::invalid_argument describing the first broken invariant.
void check_record(const SampleRecord& record);

// ---------------------------------------------------------------------------
// Templates

inline constexpr std::string_view kShortAnswerSuffix = "Answer the question using a single word or phrase.";
inline constexpr std::size_t kTemplatePoolSize = 20;

std::span<const std::string_view> question_templates(Task task);
/// Brief tasks only; throws std::invalid_argument for prompt tasks.
std::span<const std::string_view> response_templates(Task task);

/// Replaces every {NAME} slot; throws std::invalid_argument on a slot with
/// no value or an unterminated brace.
std::string fill_template(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string>> slots);

/// Comma-joined super-category names in recipe order; "none" when pristine.
std::string distortion_list(const Recipe& recipe);

// ---------------------------------------------------------------------------
// MOS tables

struct MosRow {
  std::string image_path;      // resolved against the table's directory
  std::string reference_path;  // may be empty
  std::string content_group_id;
  double mos = 0.0;
};

struct MosTable {
  std::vector<MosRow> rows;

  /// Group ids in first-appearance order.
  std::vector<std::string> groups() const;
  std::vector<const MosRow*> group(std::string_view id) const;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with header image_path,reference_path,content_group_id,mos. Relative
/// paths resolve against the CSV's directory. Throws DatasetError naming the
/// line for malformed rows, non-finite MOS or missing image files.
MosTable read_mos_csv(const std::filesystem::path& path, bool check_files = true);

// ---------------------------------------------------------------------------
// Sample builders

/// Where builders write images and how paths are recorded. Paths in records
/// are relative to `root` when the file lives under it.
struct OutputLayout {
  std::filesystem::path root;
  std::string image_subdir = "images";

  std::filesystem::path image_path(std::string_view id, std::string_view suffix = "") const;
  std::string record_path(const std::filesystem::path& file) const;
};

/// Applies `recipe` to `reference`, writes the distorted PNG and returns the
/// record. Throws DatasetError when the recipe is illegal for `setting`.
SampleRecord build_identification_sample(const ImageBuf& reference, const std::filesystem::path& reference_path,
                                         const Recipe& recipe, ReferenceSetting setting, std::uint64_t seed,
                                         std::string id, const OutputLayout& out, unsigned threads = 1);

/// Picks two images of `group` without replacement; the higher MOS wins.
/// Throws DatasetError when the group has fewer than two images or every
/// drawn pair would tie.
SampleRecord build_rating_sample(const MosTable& table, std::string_view group, ReferenceSetting setting,
                                 std::uint64_t seed, std::string id, const OutputLayout& out);

enum class Winner { A, B };

std::string_view winner_label(Winner w);  // "Image A" / "Image B"

/// GT-informed generator prompt. `images` are record paths, `recipes` one per
/// evaluated image. Comparison needs two recipes and a winner.
SampleRecord build_reasoning_prompt(Task task, ReferenceSetting setting, const ImageRefs& images,
                                    std::span<const Recipe> recipes, std::optional<Winner> winner,
                                    std::uint64_t seed, std::string id);

// ---------------------------------------------------------------------------
// JSONL

Json record_to_json(const SampleRecord& record);
SampleRecord record_from_json(const Json& j);

void write_jsonl(std::span<const SampleRecord> records, const std::filesystem::path& path);
/// Throws DatasetError naming the 1-based line of a malformed record.
std::vector<SampleRecord> read_jsonl(const std::filesystem::path& path);

/// Generic helpers shared with other line-oriented files.
std::vector<Json> read_json_lines(const std::filesystem::path& path);
void write_json_lines(std::span<const Json> rows, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Splits

struct SplitPolicy {
  enum class Kind { Random, OodDistortion };
  Kind kind = Kind::Random;
  double test_frac = 0.1;
  std::uint64_t seed = 0;

  static SplitPolicy random(double test_frac, std::uint64_t seed) { return {Kind::Random, test_frac, seed}; }
  static SplitPolicy ood() { return {Kind::OodDistortion, 0.0, 0}; }
};

struct Split {
  std::vector<SampleRecord> train;
  std::vector<SampleRecord> test;
};

/// Record order is preserved within each side.
Split split_dataset(std::span<const SampleRecord> records, const SplitPolicy& policy);

/// Recipes stored in a record's metadata.
std::vector<Recipe> record_recipes(const SampleRecord& record);

}  // namespace iqa
