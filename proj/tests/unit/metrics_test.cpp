#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "iqa/client.hpp"
#include "iqa/metrics.hpp"
#include "iqa/rng.hpp"
#include "test_support.hpp"

using namespace iqa;
using S = SuperCategory;

namespace {

// Independent references: O(n^2) rank counting and long-double Pearson.
long double pearson_ref(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks_ref(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      less += v < x[i];
      equal += v == x[i];
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

std::vector<IdLabel> labels(std::initializer_list<IdLabel> l) { return l; }

SampleRecord ident_record(std::string id, ReferenceSetting setting, Recipe recipe) {
  SampleRecord r;
  r.id = std::move(id);
  r.setting = setting;
  r.images.image_a = "a.png";
  if (setting == ReferenceSetting::FullReference) r.images.reference = "r.png";
  r.answer = distortion_list(recipe);
  r.response = r.answer;
  r.recipe_meta = Json::array({recipe_to_json(recipe)});
  return r;
}

Recipe recipe_of(std::initializer_list<SubCategory> subs) {
  Recipe r;
  for (auto s : subs) r.specs.push_back(DistortionSpec::make(s, Severity::from_level(3), 0));
  return r;
}

}  // namespace

TEST(IdentificationAccuracy, PartialCredit) {
  EXPECT_EQ(identification_accuracy(labels({S::Blur}), labels({S::Blur, S::Darken})), 0.5);
  EXPECT_EQ(identification_accuracy(labels({S::Darken, S::Blur}), labels({S::Blur, S::Darken})), 1.0);
  EXPECT_EQ(identification_accuracy(labels({S::Noise, S::Blur, S::Darken}), labels({S::Blur, S::Darken})), 0.5);
  EXPECT_EQ(identification_accuracy(labels({std::nullopt}), labels({std::nullopt})), 1.0);
  EXPECT_EQ(identification_accuracy(labels({}), labels({S::Noise})), 0.0);
  EXPECT_THROW(identification_accuracy(labels({S::Noise}), labels({})), std::invalid_argument);
}

TEST(IdentificationAccuracy, SymmetricInGtOrderAndBounded) {
  CounterRng rng(4);
  for (int t = 0; t < 500; ++t) {
    std::vector<IdLabel> gt{kAllSuperCategories[rng.below(12)]};
    if (rng.bernoulli(0.5)) gt.push_back(kAllSuperCategories[rng.below(12)]);
    std::vector<IdLabel> pred;
    for (int k = 0; k < 3; ++k)
      if (rng.bernoulli(0.6)) pred.push_back(kAllSuperCategories[rng.below(12)]);
    const double a = identification_accuracy(pred, gt);
    std::reverse(gt.begin(), gt.end());
    EXPECT_EQ(identification_accuracy(pred, gt), a);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(ParseIdentification, Forms) {
  EXPECT_EQ(parse_identification("The image suffers from noise and blur."), labels({S::Noise, S::Blur}));
  EXPECT_EQ(parse_identification("none"), labels({std::nullopt}));
  EXPECT_EQ(parse_identification("No distortion is present."), labels({std::nullopt}));
  EXPECT_FALSE(parse_identification("It looks fine to me?"));
  for (const auto& answer : legal_identification_answers()) EXPECT_TRUE(parse_identification(answer)) << answer;
}

TEST(RatingAccuracy, Examples) {
  EXPECT_EQ(rating_accuracy(Winner::A, Winner::A), 1.0);
  EXPECT_EQ(rating_accuracy(Winner::B, Winner::A), 0.0);
  const std::vector<std::optional<Winner>> pred{Winner::A, Winner::B, Winner::A, Winner::A};
  const std::vector<Winner> gt{Winner::A, Winner::B, Winner::A, Winner::B};
  EXPECT_EQ(rating_accuracy(pred, gt), 0.75);
  const std::vector<std::optional<Winner>> unparsed{std::nullopt};
  EXPECT_EQ(rating_accuracy(unparsed, std::vector<Winner>{Winner::A}), 0.0);
}

TEST(ParseWinner, Forms) {
  EXPECT_EQ(parse_winner("Image B is clearly better than image A."), Winner::B);
  EXPECT_EQ(parse_winner("a"), Winner::A);
  EXPECT_EQ(parse_winner("B."), Winner::B);
  EXPECT_FALSE(parse_winner("They are equally good."));
}

TEST(Correlation, Examples) {
  const std::vector<double> x{1, 2, 3, 4}, y{1, 3, 2, 4}, rev{4, 3, 2, 1};
  EXPECT_NEAR(srcc(x, y), 0.8, 1e-15);
  EXPECT_NEAR(srcc(x, x), 1.0, 1e-15);
  EXPECT_NEAR(plcc(x, x), 1.0, 1e-15);
  EXPECT_NEAR(srcc(x, rev), -1.0, 1e-15);
  EXPECT_THROW(srcc(x, std::vector<double>{2, 2, 2, 2}), MetricError);
  EXPECT_THROW(plcc(std::vector<double>{1, 2}, std::vector<double>{1, 2}), MetricError);
  EXPECT_THROW(plcc(x, std::vector<double>{1, 2, 3}), MetricError);
  EXPECT_EQ(average_ranks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Correlation, MatchesBruteForce) {
  CounterRng rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(60);
    const bool ties = t % 2 == 0;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? static_cast<double>(rng.below(5)) : rng.normal();
      y[i] = ties ? static_cast<double>(rng.below(4)) : rng.uniform() * 10;
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) x[0] += 1;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1;
    EXPECT_NEAR(plcc(x, y), static_cast<double>(pearson_ref(x, y)), 1e-12);
    EXPECT_NEAR(srcc(x, y), static_cast<double>(pearson_ref(ranks_ref(x), ranks_ref(y))), 1e-12);
  }
}

TEST(Correlation, TransformInvariance) {
  CounterRng rng(77);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(20), y(20), fx(20), ax(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal();
      fx[i] = std::exp(3 * x[i]);
      ax[i] = 2.5 * x[i] - 7;
    }
    EXPECT_NEAR(srcc(fx, y), srcc(x, y), 1e-12);
    EXPECT_NEAR(plcc(ax, y), plcc(x, y), 1e-12);
  }
}

TEST(TextMetrics, BleuFixtures) {
  EXPECT_NEAR(bleu("the cat sat", "the cat sat down"), 0.7165313105737893, 1e-9);
  EXPECT_NEAR(bleu("the cat sat on the mat", "the cat is on the mat"), 0.48549177170732344, 1e-9);
  EXPECT_NEAR(bleu("A quick test, indeed!", "a quick test indeed"), 1.0, 1e-12);
  EXPECT_LT(bleu("alpha beta gamma", "delta epsilon zeta"), 0.05);
  EXPECT_EQ(bleu("", "reference text"), 0.0);
  EXPECT_LT(bleu("the cat sat", "the sat cat"), 1.0);
}

TEST(TextMetrics, RougeFixtures) {
  EXPECT_NEAR(rouge_l("a b c d", "a c d e"), 0.75, 1e-12);
  EXPECT_NEAR(rouge_l("the cat sat on the mat", "the cat is on the mat"), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(rouge_l("x y", "x y"), 1.0);
  EXPECT_EQ(rouge_l("x y", "p q"), 0.0);
  EXPECT_EQ(rouge_l("", "p q"), 0.0);
  EXPECT_LT(rouge_l("x y z", "x z y"), 1.0);
}

TEST(EvaluateRun, PlantedCells) {
  std::vector<SampleRecord> gold;
  std::vector<Prediction> pred;
  // Full reference: 4 single (3 right), 2 multi (one half right, one right).
  for (int i = 0; i < 4; ++i) {
    gold.push_back(ident_record("s" + std::to_string(i), ReferenceSetting::FullReference,
                                recipe_of({SubCategory::SpeckleNoise})));
    pred.push_back({gold.back().id, i == 0 ? "blur" : "noise"});
  }
  gold.push_back(ident_record("m0", ReferenceSetting::FullReference,
                              recipe_of({SubCategory::LensBlur, SubCategory::DarkenShiftRgb})));
  pred.push_back({"m0", "blur"});
  gold.push_back(ident_record("m1", ReferenceSetting::FullReference,
                              recipe_of({SubCategory::LensBlur, SubCategory::DarkenShiftRgb})));
  pred.push_back({"m1", "darken, blur"});
  // Non reference: 2 pristine, one unparseable.
  gold.push_back(ident_record("p0", ReferenceSetting::NonReference, Recipe{}));
  pred.push_back({"p0", "none"});
  gold.push_back(ident_record("p1", ReferenceSetting::NonReference, Recipe{}));
  pred.push_back({"p1", "hmm"});

  const auto report = evaluate_run(pred, gold, Task::DistortionIdentification);
  EXPECT_EQ(report.count, 8u);
  EXPECT_EQ(report.unparseable, 1u);
  EXPECT_NEAR(report.overall().values.at("accuracy"), (3 + 1.5 + 1) / 8.0, 1e-15);
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, double>> got;
  for (const auto& c : report.cells) got[{c.setting, c.arity}] = {c.count, c.values.at("accuracy")};
  EXPECT_EQ(got.at({"full-reference", "single"}), std::make_pair(std::size_t{4}, 0.75));
  EXPECT_EQ(got.at({"full-reference", "multi"}), std::make_pair(std::size_t{2}, 0.75));
  EXPECT_EQ(got.at({"full-reference", "all"}).first, 6u);
  EXPECT_EQ(got.at({"non-reference", "pristine"}), std::make_pair(std::size_t{2}, 0.5));
  EXPECT_EQ(got.at({"non-reference", "all"}), std::make_pair(std::size_t{2}, 0.5));
  EXPECT_FALSE(got.count({"non-reference", "single"}));

  const auto j = report.to_json();
  EXPECT_EQ(j.at("unparseable"), 1);
  const auto table = report.to_table();
  EXPECT_EQ(table, report.to_table());
  EXPECT_NE(table.find("non-reference"), std::string::npos);
}

TEST(EvaluateRun, GoldAsPredictionsIsPerfect) {
  std::vector<SampleRecord> gold;
  std::vector<Prediction> pred;
  for (int i = 0; i < 12; ++i) {
    gold.push_back(ident_record("g" + std::to_string(i), i % 2 ? ReferenceSetting::FullReference : ReferenceSetting::NonReference,
                                i % 3 ? recipe_of({SubCategory::Jpeg, SubCategory::GlassBlur}) : recipe_of({SubCategory::QuantizeOtsu})));
    pred.push_back({gold.back().id, gold.back().response});
  }
  for (const auto& c : evaluate_run(pred, gold, Task::DistortionIdentification).cells)
    EXPECT_EQ(c.values.at("accuracy"), 1.0) << c.setting << "/" << c.arity;
}

TEST(EvaluateRun, JoinErrorsListEverything) {
  std::vector<SampleRecord> gold{ident_record("a", ReferenceSetting::FullReference, Recipe{}),
                                 ident_record("b", ReferenceSetting::FullReference, Recipe{})};
  const std::vector<Prediction> pred{{"a", "none"}, {"a", "none"}, {"zz", "none"}};
  try {
    evaluate_run(pred, gold, Task::DistortionIdentification);
    FAIL();
  } catch (const JoinError& e) {
    std::string all;
    for (const auto& p : e.problems()) all += p + "\n";
    EXPECT_EQ(e.problems().size(), 3u) << all;
    EXPECT_NE(all.find("b"), std::string::npos);
    EXPECT_NE(all.find("zz"), std::string::npos);
  }
}

TEST(EvaluateRun, RatingHalfWrong) {
  std::vector<SampleRecord> gold;
  std::vector<Prediction> pred;
  for (int i = 0; i < 10; ++i) {
    SampleRecord r;
    r.id = "r" + std::to_string(i);
    r.task = Task::InstantRating;
    r.setting = ReferenceSetting::NonReference;
    r.images = {std::nullopt, "a.png", "b.png"};
    r.answer = r.response = i % 3 ? "Image A" : "Image B";
    gold.push_back(r);
    const bool flip = i < 5;
    pred.push_back({r.id, flip ? (r.answer == "Image A" ? "Image B" : "Image A") : r.answer});
  }
  EXPECT_EQ(evaluate_run(pred, gold, Task::InstantRating).overall().values.at("accuracy"), 0.5);
}

TEST(Predictions, FileRoundTripAndResponseFallback) {
  const auto dir = iqa::testing::scratch_dir("preds");
  const std::vector<Prediction> p{{"a", "noise"}, {"b", "Image A"}};
  write_predictions(p, dir / "p.jsonl");
  const auto back = read_predictions(dir / "p.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].text, "Image A");
  std::ofstream(dir / "g.jsonl") << R"({"id":"x","response":"blur"})" << "\n";
  EXPECT_EQ(read_predictions(dir / "g.jsonl").front().text, "blur");
}
