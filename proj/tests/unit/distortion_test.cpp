#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "iqa/api.hpp"
#include "iqa/color.hpp"
#include "iqa/distortion.hpp"
#include "iqa/io.hpp"
#include "iqa/rng.hpp"
#include "test_support.hpp"

using namespace iqa;

namespace {

DistortionSpec with_params(SubCategory sub, Params p, std::uint64_t seed = 1) {
  auto spec = DistortionSpec::make(sub, Severity::from_level(1), seed);
  spec.params = std::move(p);
  return spec;
}

std::size_t distinct_colors(const ImageBuf& img) {
  std::set<std::array<long, 3>> seen;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      seen.insert({std::lround(img.at(x, y, 0) * 1e9), std::lround(img.at(x, y, 1) * 1e9),
                   std::lround(img.at(x, y, 2) * 1e9)});
  return seen.size();
}

}  // namespace

TEST(Taxonomy, CountsAndMapping) {
  EXPECT_EQ(all_sub_categories().size(), kSubCategoryCount);
  const std::map<SuperCategory, std::size_t> expected = {
      {SuperCategory::Blur, 6},           {SuperCategory::Noise, 6},
      {SuperCategory::Compression, 2},    {SuperCategory::Brighten, 4},
      {SuperCategory::Darken, 4},         {SuperCategory::ContrastStrengthen, 2},
      {SuperCategory::ContrastWeaken, 2}, {SuperCategory::SaturateStrengthen, 2},
      {SuperCategory::SaturateWeaken, 2}, {SuperCategory::OverSharpen, 1},
      {SuperCategory::Pixelate, 1},       {SuperCategory::Quantize, 3}};
  std::size_t total = 0;
  for (auto super : kAllSuperCategories) {
    const auto subs = sub_categories_of(super);
    EXPECT_EQ(subs.size(), expected.at(super)) << distortion_name(super);
    for (auto sub : subs) EXPECT_EQ(super_category(sub), super);
    total += subs.size();
  }
  EXPECT_EQ(total, 35u);
}

TEST(Taxonomy, SeverityNames) {
  const char* names[] = {"slight", "moderate", "obvious", "serious", "catastrophic"};
  for (int l = 1; l <= 5; ++l) {
    const auto s = Severity::from_level(l);
    EXPECT_EQ(s.name(), names[l - 1]);
    EXPECT_EQ(Severity::from_name(names[l - 1]), s);
  }
  EXPECT_THROW(Severity::from_level(0), std::out_of_range);
  EXPECT_THROW(Severity::from_level(6), std::out_of_range);
  EXPECT_FALSE(Severity::from_name("mild"));
}

TEST(Taxonomy, NamesAndSynonyms) {
  EXPECT_EQ(distortion_name(SuperCategory::Noise), "noise");
  EXPECT_EQ(parse_distortion_name("JPEG compression"), ParsedDistortion{SuperCategory::Compression});
  EXPECT_EQ(parse_distortion_name("sharpened too much"), ParsedDistortion{NoMatch{}});
  EXPECT_EQ(parse_distortion_name("motion-blur"), ParsedDistortion{SubCategory::MotionBlur});
  EXPECT_EQ(parse_distortion_name("Motion Blur"), ParsedDistortion{SubCategory::MotionBlur});
  for (auto super : kAllSuperCategories) {
    EXPECT_EQ(parse_distortion_name(distortion_name(super)), ParsedDistortion{super});
    EXPECT_EQ(super_from_name(distortion_name(super)), super);
  }
  for (auto sub : all_sub_categories()) {
    EXPECT_EQ(sub_from_key(sub_key(sub)), sub);
  }
}

TEST(Taxonomy, FindSuperCategoriesInText) {
  const auto found = find_super_categories("The image is darkened and has some noise, plus more noise.");
  ASSERT_EQ(found.size(), 2u);
  EXPECT_EQ(found[0], SuperCategory::Darken);
  EXPECT_EQ(found[1], SuperCategory::Noise);
  const auto longest = find_super_categories("contrast strengthen, saturate weaken");
  ASSERT_EQ(longest.size(), 2u);
  EXPECT_EQ(longest[0], SuperCategory::ContrastStrengthen);
  EXPECT_EQ(longest[1], SuperCategory::SaturateWeaken);
}

TEST(SeverityTable, PublishedSpotChecks) {
  const auto motion = resolve_params(SubCategory::MotionBlur, Severity::from_level(3));
  EXPECT_EQ(motion.get("radius"), 15);
  EXPECT_EQ(motion.get("sigma"), 7);
  EXPECT_EQ(resolve_params(SubCategory::ImpulseNoise, Severity::from_level(5)).get("density"), 0.10);
  const double q[] = {25, 18, 12, 8, 5};
  for (int l = 1; l <= 5; ++l) {
    EXPECT_EQ(resolve_params(SubCategory::Jpeg, Severity::from_level(l)).get("quality"), q[l - 1]);
  }
  EXPECT_EQ(resolve_params(SubCategory::SaturateStrengthenHsv, Severity::from_level(5)).get("scale"), 64);
  EXPECT_FALSE(params_from_literature(SubCategory::GaussianBlur));
  EXPECT_FALSE(params_from_literature(SubCategory::ZoomBlur));
  EXPECT_TRUE(params_from_literature(SubCategory::Jpeg));
}

TEST(SeverityTable, Complete) {
  const auto doc = severity_table_json();
  EXPECT_EQ(doc.at("version"), std::string(kSeverityTableVersion));
  ASSERT_EQ(doc.at("sub_categories").size(), 35u);
  for (const auto& entry : doc.at("sub_categories")) EXPECT_EQ(entry.at("levels").size(), 5u);
}

TEST(SpecJson, RoundTrip) {
  const auto spec = DistortionSpec::make(SubCategory::GlassBlur, Severity::from_level(4), 0xFFFFFFFFFFFFFFF1ULL);
  const auto j = spec_to_json(spec);
  EXPECT_EQ(j.at("sub"), "glass-blur");
  EXPECT_EQ(j.at("level"), 4);
  EXPECT_EQ(spec_from_json(j), spec);
  EXPECT_EQ(spec_from_json(Json::parse(j.dump())), spec);
}

TEST(Distortion, ContrastWeakenFixedPoint) {
  const ImageBuf gray(8, 8, 0.5);
  const auto out = apply_distortion(gray, with_params(SubCategory::ContrastWeakenScale, {{"alpha", 0.2}}));
  for (double v : out.pixels()) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Distortion, SaturateZeroGivesGray) {
  const auto img = iqa::testing::pattern_image(24, 24);
  const auto out = apply_distortion(img, DistortionSpec::make(SubCategory::SaturateWeakenHsv, Severity::from_level(5), 0));
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) {
      EXPECT_NEAR(out.at(x, y, 0), out.at(x, y, 1), 1e-6);
      EXPECT_NEAR(out.at(x, y, 1), out.at(x, y, 2), 1e-6);
    }
}

TEST(Distortion, BrightenShiftOnBlack) {
  const auto out = apply_distortion(ImageBuf(8, 8, 0.0),
                                    DistortionSpec::make(SubCategory::BrightenShiftRgb, Severity::from_level(1), 0));
  for (double v : out.pixels()) EXPECT_EQ(v, 0.1);
  std::vector<double> zeros(8 * 8 * 3, 0.0);
  for (double v : api::apply_distortion(zeros, 8, 8, "brighten-shift-rgb", 1, 0)) EXPECT_EQ(v, 0.1);
}

TEST(Distortion, PixelateLevelFiveIsGlobalMean) {
  ImageBuf img(4, 4);
  double mean[3] = {0, 0, 0};
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = ((x * 3 + y * 5 + c * 7) % 11) / 10.0;
        mean[c] += img.at(x, y, c) / 16.0;
      }
  const auto out = apply_distortion(img, DistortionSpec::make(SubCategory::PixelateBoxNearest, Severity::from_level(5), 0));
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(x, y, c), mean[c], 1e-15);
}

TEST(Distortion, IdentityLimits) {
  const auto img = iqa::testing::pattern_image(20, 20);
  EXPECT_EQ(apply_distortion(img, with_params(SubCategory::GaussianBlur, {{"sigma", 0.1}, {"kernel_size", 1}})), img);
  EXPECT_EQ(apply_distortion(img, with_params(SubCategory::ImpulseNoise, {{"density", 0.0}})), img);
  const auto sat = apply_distortion(img, with_params(SubCategory::SaturateStrengthenHsv, {{"scale", 1.0}}));
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(sat.pixels()[i], img.pixels()[i], 1e-9);
}

TEST(Distortion, AllSubsPreserveShapeAndRange) {
  const auto img = iqa::testing::pattern_image(56, 48);
  for (auto sub : all_sub_categories()) {
    for (int level : {1, 5}) {
      const auto out = apply_distortion(img, DistortionSpec::make(sub, Severity::from_level(level), 42));
      EXPECT_TRUE(out.same_shape(img)) << sub_key(sub);
      for (double v : out.pixels()) {
        ASSERT_GE(v, 0.0) << sub_key(sub);
        ASSERT_LE(v, 1.0) << sub_key(sub);
      }
    }
  }
}

TEST(Distortion, DeterministicAcrossThreadCounts) {
  const auto img = iqa::testing::pattern_image(64, 48, 3);
  for (auto sub : all_sub_categories()) {
    const auto spec = DistortionSpec::make(sub, Severity::from_level(3), 99);
    const auto a = apply_distortion(img, spec, 1);
    EXPECT_EQ(a, apply_distortion(img, spec, 1)) << sub_key(sub);
    EXPECT_EQ(a, apply_distortion(img, spec, 4)) << sub_key(sub);
  }
}

TEST(Distortion, SeedChangesStochasticOutput) {
  const auto img = iqa::testing::pattern_image(32, 32);
  const auto a = apply_distortion(img, DistortionSpec::make(SubCategory::GaussianNoiseRgb, Severity::from_level(2), 1));
  const auto b = apply_distortion(img, DistortionSpec::make(SubCategory::GaussianNoiseRgb, Severity::from_level(2), 2));
  EXPECT_NE(a, b);
}

TEST(Distortion, PoissonPreservesMean) {
  const ImageBuf img(100, 100, 0.4);
  const auto out = apply_distortion(img, DistortionSpec::make(SubCategory::PoissonNoise, Severity::from_level(5), 5));
  double mean = 0.0;
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) mean += out.at(x, y, 0) / 10000.0;
  // Per-pixel std of Poisson(v*I)/I is sqrt(v/I).
  const double se = std::sqrt(0.4 / 15.0) / 100.0;
  EXPECT_NEAR(mean, 0.4, 3 * se);
}

TEST(Distortion, QuantizeColorBudget) {
  const auto img = load_image(iqa::testing::data_dir() / "coffee.png");
  for (int level = 1; level <= 5; ++level) {
    const auto sev = Severity::from_level(level);
    for (auto sub : {SubCategory::QuantizeHistEqual, SubCategory::QuantizeMedianCut, SubCategory::QuantizeOtsu}) {
      const auto out = apply_distortion(img, DistortionSpec::make(sub, sev, 0));
      const auto c = static_cast<std::size_t>(resolve_params(sub, sev).get("classes"));
      EXPECT_LE(distinct_colors(out), c) << sub_key(sub);
    }
  }
}

TEST(Distortion, JpegSubMatchesCodecQuality) {
  const auto img = iqa::testing::pattern_image(64, 64);
  const auto out = apply_distortion(img, DistortionSpec::make(SubCategory::Jpeg, Severity::from_level(5), 0));
  EXPECT_EQ(out, jpeg_round_trip(img, 5));
}

TEST(Distortion, TooSmallImageRejected) {
  EXPECT_THROW(apply_distortion(ImageBuf(8, 8), DistortionSpec::make(SubCategory::MotionBlur, Severity::from_level(5), 0)),
               DistortionError);
}

TEST(Distortion, Jpeg2000TargetsPsnr) {
  if (!distortion_supported(SubCategory::Jpeg2000)) GTEST_SKIP() << "built without JPEG2000";
  const auto img = load_image(iqa::testing::data_dir() / "astronaut.png");
  for (int level : {1, 5}) {
    const auto sev = Severity::from_level(level);
    const auto out = apply_distortion(img, DistortionSpec::make(SubCategory::Jpeg2000, sev, 0));
    EXPECT_GE(psnr(img, out), resolve_params(SubCategory::Jpeg2000, sev).get("quality"));
  }
}

TEST(Api, RawArrayMatchesNative) {
  const auto img = iqa::testing::pattern_image(16, 12);
  std::vector<double> raw(img.pixels().begin(), img.pixels().end());
  const auto out = api::apply_distortion(raw, 12, 16, "speckle-noise", 3, 77);
  const auto native = apply_distortion(img, DistortionSpec::make(SubCategory::SpeckleNoise, Severity::from_level(3), 77));
  ASSERT_EQ(out.size(), native.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], native.pixels()[i]);
  EXPECT_THROW(api::apply_distortion(raw, 12, 12, "speckle-noise", 3, 77), ImageError);
  EXPECT_THROW(api::apply_distortion(raw, 12, 16, "sparkle", 3, 77), std::invalid_argument);
}
