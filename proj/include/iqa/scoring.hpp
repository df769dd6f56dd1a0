#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "iqa/distortion.hpp"

namespace iqa {

struct PlanStrategy {
  enum class Kind { RoundRobin, RandomK };
  Kind kind = Kind::RoundRobin;
  std::size_t k = 0;
  std::uint64_t seed = 0;

  static PlanStrategy round_robin(std::uint64_t seed = 0) { return {Kind::RoundRobin, 0, seed}; }
  static PlanStrategy random_k(std::size_t k, std::uint64_t seed) { return {Kind::RandomK, k, seed}; }
};

/// One comparison; `a` is presented first (as Image A).
struct PlannedPair {
  std::string a;
  std::string b;
  friend bool operator==(const PlannedPair&, const PlannedPair&) = default;
};

struct ComparisonPlan {
  std::string group_id;
  PlanStrategy strategy;
  std::vector<PlannedPair> pairs;
};

/// RoundRobin: every unordered pair once. RandomK: each image picks k
/// distinct partners from its group; a pair drawn by both images occurs
/// twice. Presentation order is randomized by the seed in both modes.
/// Throws std::invalid_argument for groups under two images, duplicate ids
/// or k outside [1, n-1].
ComparisonPlan make_plan(std::string group_id, std::span<const std::string> images, const PlanStrategy& strategy);

enum class Side { I, J };

struct ComparisonOutcome {
  std::string i;
  std::string j;
  Side winner = Side::I;
  double confidence = 1.0;
  friend bool operator==(const ComparisonOutcome&, const ComparisonOutcome&) = default;
};

enum class Weighting { Unweighted, ConfidenceWeighted };

struct ScoreEntry {
  double score = 0.0;
  std::size_t comparisons_used = 0;
};

using QualityScoreTable = std::map<std::string, ScoreEntry>;

/// Throws std::invalid_argument for self-pairs or confidences outside [0,1].
QualityScoreTable win_rate_scores(std::span<const ComparisonOutcome> outcomes, Weighting weighting);

/// Raises std::invalid_argument when unweighted scoring is requested with
/// too few comparisons per image (k <= 2) to give a usable score.
void check_weighting(const PlanStrategy& strategy, Weighting weighting);

struct ConfidenceModel {
  double correct_a = 9.0, correct_b = 1.0;  // Beta for right answers
  double wrong_a = 2.0, wrong_b = 2.0;      // Beta for wrong answers
};

/// Noisy judge over ground-truth MOS. Each outcome is a pure function of
/// (seed, pair index, ids), so evaluation order does not matter.
class SimulatedComparator {
 public:
  /// Throws std::invalid_argument unless 0 <= eps < 0.5.
  SimulatedComparator(std::map<std::string, double> truth, double eps, ConfidenceModel model, std::uint64_t seed);

  ComparisonOutcome judge(const PlannedPair& pair, std::size_t index) const;
  std::vector<ComparisonOutcome> run(const ComparisonPlan& plan) const;

 private:
  std::map<std::string, double> truth_;
  double eps_;
  ConfidenceModel model_;
  std::uint64_t seed_;
};

Json outcome_to_json(const ComparisonOutcome& o);
ComparisonOutcome outcome_from_json(const Json& j);

/// CSV with header image_id,score,comparisons_used, rows sorted by id.
std::string scores_to_csv(const QualityScoreTable& table);

}  // namespace iqa
