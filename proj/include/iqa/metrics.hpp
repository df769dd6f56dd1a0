#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iqa/dataset.hpp"

namespace iqa {

/// One identification label; nullopt is the "none" label of a pristine image.
using IdLabel = std::optional<SuperCategory>;

/// |pred ∩ gt| / |gt| with pred cut to its first |gt| labels. Throws
/// std::invalid_argument when gt is empty.
double identification_accuracy(std::span<const IdLabel> pred, std::span<const IdLabel> gt);

/// Labels in order of mention; {nullopt} for an explicit "none" style
/// answer; std::nullopt when nothing recognizable is present.
std::optional<std::vector<IdLabel>> parse_identification(std::string_view text);

/// Gold labels of a recipe.
std::vector<IdLabel> recipe_labels(const Recipe& recipe);

/// Winner named in free text: the first of "image a"/"image b" mentioned,
/// or a bare "a"/"b" answer.
std::optional<Winner> parse_winner(std::string_view text);

double rating_accuracy(Winner pred, Winner gt);
/// Mean of exact matches; unparseable predictions (nullopt) count as wrong.
double rating_accuracy(std::span<const std::optional<Winner>> pred, std::span<const Winner> gt);

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Average ranks, 1-based; ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);
/// Throws MetricError for length mismatch, fewer than 3 values or a
/// constant vector.
double plcc(std::span<const double> x, std::span<const double> y);
double srcc(std::span<const double> x, std::span<const double> y);

/// Lowercase alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);
/// BLEU-4, uniform weights, add-one smoothing for n >= 2, brevity penalty.
double bleu(std::string_view candidate, std::string_view reference);
/// LCS F1.
double rouge_l(std::string_view candidate, std::string_view reference);

struct Prediction {
  std::string id;
  std::string text;
};

/// {"id", "text"} per line; a "response" field stands in for a missing "text".
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
void write_predictions(std::span<const Prediction> preds, const std::filesystem::path& path);

/// Every join problem at once: ids missing on either side and duplicates.
class JoinError : public std::runtime_error {
 public:
  explicit JoinError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct ReportCell {
  std::string setting;  // "all", "full-reference", "non-reference"
  std::string arity;    // "all", "pristine", "single", "multi"
  std::size_t count = 0;
  std::map<std::string, double> values;
};

struct MetricReport {
  Task task = Task::DistortionIdentification;
  std::size_t count = 0;
  std::size_t unparseable = 0;
  std::vector<ReportCell> cells;  // first cell is the overall one

  double unparseable_rate() const { return count ? static_cast<double>(unparseable) / count : 0.0; }
  const ReportCell& overall() const { return cells.front(); }
  Json to_json() const;
  std::string to_table() const;
};

/// Joins predictions to the gold records of `task` by id. Brief tasks report
/// accuracy; prompt tasks report BLEU and ROUGE-L against gold responses.
MetricReport evaluate_run(std::span<const Prediction> predictions, std::span<const SampleRecord> gold, Task task);

}  // namespace iqa
