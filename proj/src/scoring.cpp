#include "iqa/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

#include "iqa/rng.hpp"

namespace iqa {
namespace {

constexpr std::uint64_t kTagOrder = 0x6F726472ULL;
constexpr std::uint64_t kTagPartner = 0x70617274ULL;
constexpr std::uint64_t kTagJudge = 0x6A756467ULL;

std::uint64_t id_hash(const std::string& s) { return fnv1a(s.data(), s.size()); }

}  // namespace

ComparisonPlan make_plan(std::string group_id, std::span<const std::string> images, const PlanStrategy& strategy) {
  const std::size_t n = images.size();
  if (n < 2) throw std::invalid_argument("group " + group_id + " needs at least two images");
  if (std::set<std::string>(images.begin(), images.end()).size() != n) {
    throw std::invalid_argument("group " + group_id + " has duplicate image ids");
  }
  ComparisonPlan plan{std::move(group_id), strategy, {}};
  auto add = [&](std::size_t x, std::size_t y) {
    const std::size_t idx = plan.pairs.size();
    const bool swap = CounterRng(strategy.seed, {kTagOrder, idx, id_hash(images[x]), id_hash(images[y])}).bernoulli(0.5);
    plan.pairs.push_back(swap ? PlannedPair{images[y], images[x]} : PlannedPair{images[x], images[y]});
  };
  if (strategy.kind == PlanStrategy::Kind::RoundRobin) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) add(x, y);
    }
    return plan;
  }
  if (strategy.k < 1 || strategy.k > n - 1) {
    throw std::invalid_argument("k=" + std::to_string(strategy.k) + " must lie in [1, " + std::to_string(n - 1) + "]");
  }
  for (std::size_t x = 0; x < n; ++x) {
    // Partial Fisher-Yates over the other n-1 images.
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t y = 0; y < n; ++y) {
      if (y != x) others.push_back(y);
    }
    CounterRng rng(strategy.seed, {kTagPartner, id_hash(images[x])});
    for (std::size_t t = 0; t < strategy.k; ++t) {
      const std::size_t pick = t + rng.below(others.size() - t);
      std::swap(others[t], others[pick]);
      add(x, others[t]);
    }
  }
  return plan;
}

QualityScoreTable win_rate_scores(std::span<const ComparisonOutcome> outcomes, Weighting weighting) {
  struct Acc {
    double won = 0.0, total = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& o : outcomes) {
    if (o.i == o.j) throw std::invalid_argument("self-comparison of " + o.i);
    if (!(o.confidence >= 0.0 && o.confidence <= 1.0)) {
      throw std::invalid_argument("confidence outside [0,1] for pair " + o.i + "/" + o.j);
    }
    const double w = weighting == Weighting::Unweighted ? 1.0 : o.confidence;
    auto& ai = acc[o.i];
    auto& aj = acc[o.j];
    ai.total += w;
    aj.total += w;
    ++ai.n;
    ++aj.n;
    (o.winner == Side::I ? ai : aj).won += w;
  }
  QualityScoreTable out;
  for (const auto& [id, a] : acc) out[id] = {a.total > 0.0 ? a.won / a.total : 0.5, a.n};
  return out;
}

void check_weighting(const PlanStrategy& strategy, Weighting weighting) {
  if (weighting == Weighting::Unweighted && strategy.kind == PlanStrategy::Kind::RandomK && strategy.k <= 2) {
    throw std::invalid_argument("unweighted win rate needs more than 2 comparisons per image; use confidence weighting");
  }
}

SimulatedComparator::SimulatedComparator(std::map<std::string, double> truth, double eps, ConfidenceModel model,
                                         std::uint64_t seed)
    : truth_(std::move(truth)), eps_(eps), model_(model), seed_(seed) {
  if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("eps must lie in [0, 0.5)");
}

ComparisonOutcome SimulatedComparator::judge(const PlannedPair& pair, std::size_t index) const {
  auto mos = [this](const std::string& id) {
    auto it = truth_.find(id);
    if (it == truth_.end()) throw std::invalid_argument("no ground truth for image " + id);
    return it->second;
  };
  const double ma = mos(pair.a);
  const double mb = mos(pair.b);
  if (ma == mb) throw std::invalid_argument("equal MOS for " + pair.a + " and " + pair.b);
  CounterRng rng(seed_, {kTagJudge, index, id_hash(pair.a), id_hash(pair.b)});
  const bool correct = !rng.bernoulli(eps_);
  const Side truth_side = ma > mb ? Side::I : Side::J;
  const Side said = correct ? truth_side : (truth_side == Side::I ? Side::J : Side::I);
  const double conf = correct ? rng.beta(model_.correct_a, model_.correct_b) : rng.beta(model_.wrong_a, model_.wrong_b);
  return {pair.a, pair.b, said, conf};
}

std::vector<ComparisonOutcome> SimulatedComparator::run(const ComparisonPlan& plan) const {
  std::vector<ComparisonOutcome> out;
  out.reserve(plan.pairs.size());
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) out.push_back(judge(plan.pairs[i], i));
  return out;
}

Json outcome_to_json(const ComparisonOutcome& o) {
  Json j;
  j["i"] = o.i;
  j["j"] = o.j;
  j["winner"] = o.winner == Side::I ? "I" : "J";
  j["confidence"] = o.confidence;
  return j;
}

ComparisonOutcome outcome_from_json(const Json& j) {
  ComparisonOutcome o;
  o.i = j.at("i").get<std::string>();
  o.j = j.at("j").get<std::string>();
  const auto w = j.at("winner").get<std::string>();
  if (w != "I" && w != "J") throw std::invalid_argument("winner must be \"I\" or \"J\", got \"" + w + "\"");
  o.winner = w == "I" ? Side::I : Side::J;
  o.confidence = j.at("confidence").get<double>();
  return o;
}

std::string scores_to_csv(const QualityScoreTable& table) {
  std::string out = "image_id,score,comparisons_used\n";
  char buf[64];
  for (const auto& [id, e] : table) {
    std::snprintf(buf, sizeof buf, ",%.17g,%zu\n", e.score, e.comparisons_used);
    out += id;
    out += buf;
  }
  return out;
}

}  // namespace iqa
