// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Criteria 2 and 9 work on 128x128 copies of the committed images.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "iqa/client.hpp"
#include "iqa/composition.hpp"
#include "iqa/dataset.hpp"
#include "iqa/distortion.hpp"
#include "iqa/io.hpp"
#include "iqa/metrics.hpp"
#include "iqa/rng.hpp"
#include "iqa/scoring.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using iqa::Json;
using iqa::testing::run_cli;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed checks; the first few messages end up in the report line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome result() const {
    if (failures_ == 0) return {true, notes_};
    return {false, std::to_string(failures_) + " failed check(s): " + messages_ + (notes_.empty() ? "" : " | " + notes_)};
  }

 private:
  int failures_ = 0;
  std::string messages_;
  std::string notes_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Json* find_sub(const Json& catalog, const std::string& key) {
  for (const auto& s : catalog.at("severity_table").at("sub_categories"))
    if (s.at("sub") == key) return &s;
  return nullptr;
}

std::string params_at(const Json& sub, int level) { return sub.at("levels").at(level - 1).at("params").dump(); }

// ---------------------------------------------------------------------------

Outcome catalog_fidelity() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_cli({"catalog"});
  const double elapsed = seconds_since(t0);
  c.expect(r.exit_code == 0, "catalog exit " + std::to_string(r.exit_code));
  const auto j = Json::parse(r.out);
  const auto* motion = find_sub(j, "motion-blur");
  const auto* impulse = find_sub(j, "impulse-noise");
  const auto* jpeg = find_sub(j, "jpeg");
  const auto* sat = find_sub(j, "saturate-strengthen-hsv");
  const auto* sharp = find_sub(j, "oversharpen");
  c.expect(motion && impulse && jpeg && sat && sharp, "sub-category missing from catalog");
  if (!(motion && impulse && jpeg && sat && sharp)) return c.result();

  c.expect(params_at(*motion, 3) == R"({"radius":15,"sigma":7})", "motion blur level 3 = " + params_at(*motion, 3));
  c.expect(params_at(*impulse, 5) == R"({"density":0.1})", "impulse level 5 = " + params_at(*impulse, 5));
  c.expect(impulse->at("levels").at(4).at("params").at("density").get<double>() == 0.10, "impulse density != 0.10");
  const char* q[] = {R"({"quality":25})", R"({"quality":18})", R"({"quality":12})", R"({"quality":8})",
                     R"({"quality":5})"};
  for (int l = 1; l <= 5; ++l) c.expect(params_at(*jpeg, l) == q[l - 1], "jpeg level " + std::to_string(l));
  c.expect(params_at(*sat, 5) == R"({"scale":64})", "saturate hsv level 5 = " + params_at(*sat, 5));
  const double alpha[] = {2, 2.8, 4, 6, 8};
  const char* alpha_text[] = {"2", "2.8", "4", "6", "8"};
  for (int l = 1; l <= 5; ++l) {
    const auto& p = sharp->at("levels").at(l - 1).at("params");
    c.expect(p.at("alpha").get<double>() == alpha[l - 1] &&
                 p.at("alpha").dump() == alpha_text[l - 1],
             "oversharpen alpha level " + std::to_string(l) + " = " + p.at("alpha").dump());
  }
  for (const auto& s : j.at("severity_table").at("sub_categories")) {
    c.expect(s.at("levels").size() == 5, "levels != 5 for " + s.at("sub").get<std::string>());
  }
  c.expect(j.at("severity_table").at("sub_categories").size() == 35, "catalog does not list 35 sub-categories");
  c.expect(elapsed < 1.0, "took " + fmt("%.2f s", elapsed));
  c.note("catalog in " + fmt("%.3f s", elapsed));
  return c.result();
}

Outcome determinism(const std::vector<fs::path>& small_refs, const fs::path& work) {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto subs = iqa::all_sub_categories();
  iqa::CounterRng rng(20241016);
  int identical = 0;
  for (int i = 0; i < 50; ++i) {
    const auto& img = small_refs[rng.below(small_refs.size())];
    const auto sub = std::string(iqa::sub_key(subs[rng.below(subs.size())]));
    const auto level = std::to_string(1 + rng.below(5));
    const auto seed = std::to_string(rng.next_u64() >> 1);
    std::string outputs[2];
    for (int p = 0; p < 2; ++p) {
      const auto out = work / ("d" + std::to_string(i) + "-" + std::to_string(p) + ".png");
      const auto r = run_cli({"--seed", seed, "--parallel", p ? "4" : "1", "distort", "--input", img.string(), "--sub",
                              sub, "--level", level, "--output", out.string()});
      c.expect(r.exit_code == 0, sub + " exit " + std::to_string(r.exit_code) + ": " + r.err);
      outputs[p] = iqa::testing::read_file(out);
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    c.expect(same, "outputs differ for " + sub + " level " + level);
    identical += same;
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 30.0, "took " + fmt("%.1f s", elapsed));
  c.note(std::to_string(identical) + "/50 byte-identical in " + fmt("%.1f s", elapsed));
  return c.result();
}

Outcome monotonicity() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<iqa::ImageBuf> images;
  for (const auto& p : iqa::testing::natural_images()) {
    images.push_back(iqa::load_image(p));
    c.expect(images.back().width() == 512 && images.back().height() == 512, p.filename().string() + " is not 512x512");
  }
  c.expect(images.size() == 5, "expected 5 test images");
  double worst = -1e9;
  std::string worst_at;
  int checked = 0;
  for (auto sub : iqa::all_sub_categories()) {
    if (!iqa::distortion_supported(sub)) {
      c.expect(false, std::string(iqa::sub_key(sub)) + " unsupported in this build");
      continue;
    }
    for (std::size_t k = 0; k < images.size(); ++k) {
      const auto seed = iqa::derive_key(7, {static_cast<std::uint64_t>(sub), k});
      double prev = 0.0;
      for (int level = 1; level <= 5; ++level) {
        const auto spec = iqa::DistortionSpec::make(sub, iqa::Severity::from_level(level), seed);
        const double v = iqa::psnr(images[k], iqa::apply_distortion(images[k], spec));
        if (level > 1) {
          const double rise = v - prev;
          if (rise > worst) {
            worst = rise;
            worst_at = std::string(iqa::sub_key(sub)) + " image " + std::to_string(k) + " level " + std::to_string(level);
          }
          c.expect(rise <= 0.5, std::string(iqa::sub_key(sub)) + " image " + std::to_string(k) + " level " +
                                    std::to_string(level) + " rises " + fmt("%.3f dB", rise));
          ++checked;
        }
        prev = v;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(checked == 35 * 5 * 4, "only " + std::to_string(checked) + " steps checked");
  c.expect(elapsed < 300.0, "took " + fmt("%.0f s", elapsed));
  c.note(std::to_string(checked) + " steps, largest rise " + fmt("%.3f dB", worst) + " (" + worst_at + "), " +
         fmt("%.0f s", elapsed));
  return c.result();
}

Outcome composition_validity() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 10000;
  int legal = 0, too_many = 0;
  for (int i = 0; i < n; ++i) {
    const auto r = iqa::sample_recipe(iqa::derive_key(41, {static_cast<std::uint64_t>(i)}), iqa::SampleMode::multi(),
                                      iqa::ReferenceSetting::FullReference);
    too_many += r.specs.size() > iqa::kMaxDistortions;
    legal += r.specs.size() == 2 && iqa::combination_allowed(r.specs[0].super(), r.specs[1].super()) &&
             iqa::validate_recipe(r).empty();
  }
  int pristine = 0;
  for (int i = 0; i < n; ++i) {
    const auto r = iqa::sample_recipe(iqa::derive_key(43, {static_cast<std::uint64_t>(i)}),
                                      iqa::SampleMode::mixed(0.05, 0.5), iqa::ReferenceSetting::FullReference);
    pristine += r.pristine();
    too_many += r.specs.size() > iqa::kMaxDistortions;
  }
  const double frac = pristine / double(n);
  const double elapsed = seconds_since(t0);
  c.expect(legal == n, std::to_string(n - legal) + " multi recipes outside the table");
  c.expect(too_many == 0, std::to_string(too_many) + " recipes with more than two distortions");
  c.expect(std::abs(frac - 0.05) <= 0.01, "pristine fraction " + fmt("%.4f", frac));
  c.expect(elapsed < 10.0, "took " + fmt("%.1f s", elapsed));
  c.note(std::to_string(legal) + "/10000 legal pairs, pristine " + fmt("%.4f", frac) + ", " + fmt("%.2f s", elapsed));
  return c.result();
}

Outcome non_reference_filter() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, specs = 0, slight = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto r = iqa::sample_recipe(iqa::derive_key(47, {static_cast<std::uint64_t>(i)}), iqa::SampleMode{},
                                      iqa::ReferenceSetting::NonReference);
    for (const auto& s : r.specs) {
      ++specs;
      slight += s.severity.level() == 1;
      bad += s.severity.level() == 1 && iqa::excluded_when_slight(s.super());
    }
  }
  const double elapsed = seconds_since(t0);
  c.expect(bad == 0, std::to_string(bad) + " slight specs in excluded categories");
  c.expect(slight > 0, "no slight specs at all (filter too broad)");
  c.expect(elapsed < 10.0, "took " + fmt("%.1f s", elapsed));
  c.note(std::to_string(specs) + " specs, " + std::to_string(slight) + " slight (all in allowed categories), " +
         fmt("%.2f s", elapsed));
  return c.result();
}

Outcome win_rate_exactness() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 16;
  iqa::CounterRng rng(53);
  std::vector<std::string> ids;
  std::map<std::string, double> truth;
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("img" + std::to_string(i));
    // Evenly spaced levels with small jitter, assigned in a shuffled order.
    truth[ids.back()] = 1.0 + 4.0 * static_cast<double>((i * 7) % n) / (n - 1) + 0.02 * (rng.uniform() - 0.5);
  }
  const iqa::SimulatedComparator perfect(truth, 0.0, {}, 1);
  const auto plan = iqa::make_plan("g", ids, iqa::PlanStrategy::round_robin(9));
  c.expect(plan.pairs.size() == n * (n - 1) / 2, "round robin pair count");
  const auto table = iqa::win_rate_scores(perfect.run(plan), iqa::Weighting::Unweighted);
  std::vector<double> scores, mos;
  for (const auto& id : ids) {
    scores.push_back(table.at(id).score);
    mos.push_back(truth.at(id));
  }
  // Brute-force total order: an image's score is the share of images below it.
  for (const auto& id : ids) {
    double below = 0;
    for (const auto& other : ids) below += truth.at(other) < truth.at(id);
    c.expect(table.at(id).score == below / (n - 1), "score of " + id + " is not its rank share");
  }
  const double s = iqa::srcc(scores, mos);
  const double p = iqa::plcc(scores, mos);
  const double elapsed = seconds_since(t0);
  c.expect(s == 1.0, "SRCC " + fmt("%.17g", s));
  c.expect(p >= 0.99, "PLCC " + fmt("%.6f", p));
  c.expect(elapsed < 5.0, "took " + fmt("%.1f s", elapsed));
  c.note("SRCC " + fmt("%.6f", s) + ", PLCC " + fmt("%.6f", p));
  return c.result();
}

Outcome comparison_degradation() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = 100;
  const std::size_t ks[] = {1, 2, 5, 25};
  double mean[4] = {0, 0, 0, 0};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    iqa::CounterRng rng(seed, {61});
    std::vector<std::string> ids;
    std::map<std::string, double> truth;
    std::vector<double> mos;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("s" + std::to_string(seed) + "-" + std::to_string(i));
      mos.push_back(1.0 + 4.0 * rng.uniform());
      truth[ids.back()] = mos.back();
    }
    const iqa::SimulatedComparator judge(truth, 0.1, {}, seed);
    for (int ki = 0; ki < 4; ++ki) {
      const auto strategy = iqa::PlanStrategy::random_k(ks[ki], iqa::derive_key(seed, {67, ks[ki]}));
      const auto weighting = ks[ki] <= 2 ? iqa::Weighting::ConfidenceWeighted : iqa::Weighting::Unweighted;
      iqa::check_weighting(strategy, weighting);
      const auto table = iqa::win_rate_scores(judge.run(iqa::make_plan("g", ids, strategy)), weighting);
      std::vector<double> scores;
      for (const auto& id : ids) scores.push_back(table.at(id).score);
      mean[ki] += iqa::srcc(scores, mos) / 100.0;
    }
  }
  const double elapsed = seconds_since(t0);
  for (int i = 1; i < 4; ++i) {
    c.expect(mean[i] > mean[i - 1], "SRCC not increasing from k=" + std::to_string(ks[i - 1]) + " to k=" +
                                        std::to_string(ks[i]));
  }
  c.expect(mean[3] - mean[0] >= 0.1, "SRCC(25) - SRCC(1) = " + fmt("%.4f", mean[3] - mean[0]));
  c.expect(elapsed < 120.0, "took " + fmt("%.1f s", elapsed));
  std::string note = "mean SRCC";
  for (int i = 0; i < 4; ++i) note += " k=" + std::to_string(ks[i]) + ":" + fmt("%.4f", mean[i]);
  c.note(note + ", " + fmt("%.1f s", elapsed));
  return c.result();
}

// Independent references for criterion 8.
long double pearson_ref(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
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

Outcome metric_oracles() {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  iqa::CounterRng rng(71);
  double worst = 0.0;
  int with_ties = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(98);
    const bool ties = t % 2 == 1;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = ties ? static_cast<double>(rng.below(6)) : rng.normal() * 3.0;
      y[i] = ties ? std::floor(rng.uniform() * 4) : x[i] * 0.5 + rng.normal();
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) x[0] += 1.0;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1.0;
    std::set<double> ux(x.begin(), x.end());
    with_ties += ux.size() < n;
    const double dp = std::abs(iqa::plcc(x, y) - static_cast<double>(pearson_ref(x, y)));
    const double ds = std::abs(iqa::srcc(x, y) - static_cast<double>(pearson_ref(ranks_ref(x), ranks_ref(y))));
    worst = std::max({worst, dp, ds});
  }
  c.expect(worst < 1e-12, "max |delta| " + fmt("%.3g", worst));
  c.expect(with_ties >= 400, "too few tied vectors");

  const std::vector<iqa::IdLabel> pred{iqa::SuperCategory::Blur};
  const std::vector<iqa::IdLabel> gt{iqa::SuperCategory::Blur, iqa::SuperCategory::Darken};
  const double acc = iqa::identification_accuracy(pred, gt);
  c.expect(acc == 0.5, "identification accuracy " + fmt("%.17g", acc));

  const double b = iqa::bleu("the cat sat", "the cat sat down");
  const double b2 = iqa::bleu("the cat sat on the mat", "the cat is on the mat");
  const double r1 = iqa::rouge_l("a b c d", "a c d e");
  const double r2 = iqa::rouge_l("the cat sat on the mat", "the cat is on the mat");
  // BLEU: exp(1 - 4/3) from the brevity penalty with all smoothed precisions 1,
  // and (5/6 * 4/6 * 2/5 * 1/4)^(1/4) = (1/18)^(1/4).
  c.expect(std::abs(b - 0.7165313105737893) < 1e-9, "bleu fixture 1 = " + fmt("%.17g", b));
  c.expect(std::abs(b2 - 0.48549177170732344) < 1e-9, "bleu fixture 2 = " + fmt("%.17g", b2));
  c.expect(std::abs(r1 - 0.75) < 1e-9, "rouge fixture 1 = " + fmt("%.17g", r1));
  c.expect(std::abs(r2 - 5.0 / 6.0) < 1e-9, "rouge fixture 2 = " + fmt("%.17g", r2));
  c.expect(iqa::bleu("same words here", "same words here") == 1.0, "bleu identity");
  c.expect(iqa::rouge_l("same words here", "same words here") == 1.0, "rouge identity");

  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 30.0, "took " + fmt("%.1f s", elapsed));
  c.note("max correlation |delta| " + fmt("%.2g", worst) + ", accuracy 0.5, BLEU " + fmt("%.10f", b) + ", ROUGE-L " +
         fmt("%.2f", r1));
  return c.result();
}

double overall_accuracy(const std::string& report_json) {
  const auto j = Json::parse(report_json);
  return j.at("cells").at(0).at("accuracy").get<double>();
}

Outcome end_to_end(const fs::path& refs, const fs::path& work) {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();

  // MOS table: per reference, a ladder of JPEG and blur variants. Lower
  // level means higher MOS, jittered so no two images tie.
  const auto mos_dir = work / "mos";
  fs::create_directories(mos_dir);
  {
    std::ofstream csv(mos_dir / "mos.csv");
    csv << "image_path,reference_path,content_group_id,mos\n";
    iqa::CounterRng rng(83);
    for (const auto& ref : iqa::testing::natural_images()) {
      const auto stem = ref.stem().string();
      const auto small_ref = refs / ref.filename();
      const auto img = iqa::load_image(small_ref);
      for (auto sub : {iqa::SubCategory::Jpeg, iqa::SubCategory::GaussianBlur, iqa::SubCategory::SpeckleNoise}) {
        for (int level = 1; level <= 5; ++level) {
          const auto name = stem + "-" + std::string(iqa::sub_key(sub)) + "-" + std::to_string(level) + ".png";
          const auto spec = iqa::DistortionSpec::make(sub, iqa::Severity::from_level(level), 89);
          iqa::save_image(iqa::apply_distortion(img, spec), mos_dir / name, iqa::SaveFormat::png());
          csv << name << "," << fs::absolute(small_ref).string() << "," << stem << ","
              << fmt("%.6f", 5.0 - level + 0.4 * (rng.uniform() - 0.5)) << "\n";
        }
      }
    }
  }

  struct Run {
    std::string task, label;
    std::vector<std::string> extra;
  };
  const Run runs[] = {{"distortion-identification", "identification", {}},
                      {"instant-rating", "rating", {"--mos", (mos_dir / "mos.csv").string()}}};
  std::string note;
  for (const auto& run : runs) {
    const auto gold = work / run.label / "data.jsonl";
    const auto preds = work / run.label / "pred.jsonl";
    std::vector<std::string> build = {"--seed", "97", "build", "--refs", refs.string(), "--task", run.task,
                                      "--count", "500", "--out", gold.string()};
    build.insert(build.end(), run.extra.begin(), run.extra.end());
    const auto b = run_cli(build);
    c.expect(b.exit_code == 0, run.label + " build failed: " + b.err);
    if (b.exit_code != 0) continue;
    const auto records = iqa::read_jsonl(gold);
    c.expect(records.size() == 500, run.label + " has " + std::to_string(records.size()) + " records");

    const auto p = run_cli({"--seed", "101", "predict", "--gold", gold.string(), "--task", run.task, "--oracle", "0.15",
                            "--out", preds.string()});
    c.expect(p.exit_code == 0, run.label + " predict failed: " + p.err);
    const auto e = run_cli({"eval", "--pred", preds.string(), "--gold", gold.string(), "--task", run.task, "--report",
                            "json"});
    c.expect(e.exit_code == 0, run.label + " eval failed: " + e.err);
    if (e.exit_code != 0) continue;
    const double acc = overall_accuracy(e.out);
    c.expect(std::abs(acc - 0.85) <= 0.04, run.label + " accuracy " + fmt("%.4f", acc));
    note += (note.empty() ? "" : ", ") + run.label + " " + fmt("%.4f", acc);
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 180.0, "took " + fmt("%.0f s", elapsed));
  c.note(note + ", " + fmt("%.1f s", elapsed));
  return c.result();
}

Outcome confidence_extraction() {
  Checker c;
  using R = iqa::InferenceResponse;
  const std::vector<std::string> ident = iqa::brief_key_tokens(iqa::Task::DistortionIdentification);
  const std::vector<std::string> rating = iqa::brief_key_tokens(iqa::Task::InstantRating);

  // exp(0) = 1 on the single key token.
  const auto one = iqa::extract_confidence(R{"", std::vector<iqa::TokenLogprob>{{"Answer", -3.0}, {":", -1.0},
                                                                                  {" noise", 0.0}}},
                                           ident);
  c.expect(one && *one == 1.0, "single key token");

  // (0.8 + 0.6) / 2 = 0.7; the comma is not a key token.
  const auto two = iqa::extract_confidence(
      R{"", std::vector<iqa::TokenLogprob>{{"blur", std::log(0.8)}, {",", std::log(0.1)}, {" darken", std::log(0.6)}}},
      ident);
  c.expect(two && std::abs(*two - 0.7) < 1e-15, "two key tokens: " + (two ? fmt("%.17g", *two) : "none"));

  // "Image B" spans two tokens: (0.9 + 0.5) / 2 = 0.7.
  const auto span = iqa::extract_confidence(
      R{"", std::vector<iqa::TokenLogprob>{{"Image", std::log(0.9)}, {" B", std::log(0.5)}, {".", std::log(0.2)}}},
      rating);
  c.expect(span && std::abs(*span - 0.7) < 1e-15, "multi-token key: " + (span ? fmt("%.17g", *span) : "none"));

  // "over-sharpen" spans three tokens: (0.25 + 0.5 + 0.75) / 3 = 0.5.
  const auto three = iqa::extract_confidence(
      R{"", std::vector<iqa::TokenLogprob>{{"over", std::log(0.25)}, {"-", std::log(0.5)}, {"sharpen", std::log(0.75)}}},
      ident);
  c.expect(three && std::abs(*three - 0.5) < 1e-15, "three-token key: " + (three ? fmt("%.17g", *three) : "none"));

  // Unavailable: no key token in the answer, and missing logprobs.
  const auto none = iqa::extract_confidence(
      R{"", std::vector<iqa::TokenLogprob>{{"Hard", -0.1}, {" to", -0.1}, {" say", -0.1}}}, rating);
  c.expect(!none, "answer without a key token is not unavailable");
  bool threw = false;
  try {
    iqa::extract_confidence(R{"Image A", std::nullopt}, rating);
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  c.expect(threw, "missing logprobs did not raise");
  c.note("1.0, 0.7, 0.7, 0.5 and unavailable as computed by hand");
  return c.result();
}

}  // namespace

int main() {
  const auto work = iqa::testing::scratch_dir("acceptance");
  const auto small = iqa::testing::write_small_refs(work / "refs", 128);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "catalog fidelity", catalog_fidelity},
      {2, "determinism across --parallel", [&] { return determinism(small, work); }},
      {3, "severity monotonicity", monotonicity},
      {4, "composition validity", composition_validity},
      {5, "non-reference filter", non_reference_filter},
      {6, "win-rate oracle exactness", win_rate_exactness},
      {7, "comparison-number degradation", comparison_degradation},
      {8, "metric oracles", metric_oracles},
      {9, "end-to-end oracle pipeline", [&] { return end_to_end(work / "refs", work); }},
      {10, "confidence extraction", confidence_extraction},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d %-32s %s  %s\n", cr.id, cr.name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
