// iqa: batch front end over the toolkit.
//
//   iqa distort --input in.png --sub jpeg --level 5 --output out.png
//   iqa build   --refs refs/ --task distortion-identification --count 100 --out data/train.jsonl
//   iqa predict --gold data/test.jsonl --task instant-rating --oracle 0.1 --out pred.jsonl
//   iqa score   --groups groups.jsonl --strategy random-k --k 5 --oracle 0.1 --out scores.csv
//   iqa eval    --pred pred.jsonl --gold data/test.jsonl --task instant-rating --report table
//   iqa catalog
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "iqa/build.hpp"
#include "iqa/client.hpp"
#include "iqa/composition.hpp"
#include "iqa/dataset.hpp"
#include "iqa/distortion.hpp"
#include "iqa/io.hpp"
#include "iqa/metrics.hpp"
#include "iqa/rng.hpp"
#include "iqa/scoring.hpp"

namespace fs = std::filesystem;
using iqa::Json;

namespace {

// Problems found before any work starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON config: top-level keys are global options, objects are subcommand
// sections. Underscores in keys match dashes in flag names.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    walk(doc, {}, items);
    return items;
  }

 private:
  static std::string flag_name(std::string key) {
    for (auto& c : key) {
      if (c == '_') c = '-';
    }
    return key;
  }

  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static void walk(const Json& obj, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(value, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = flag_name(key);
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

void require_file(const std::string& path, const char* flag) {
  if (!fs::is_regular_file(path)) throw UsageError(std::string(flag) + ": no such file " + path);
}

iqa::SaveFormat format_for(const fs::path& out) {
  auto ext = out.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".png") return iqa::SaveFormat::png();
  if (ext == ".jpg" || ext == ".jpeg") return iqa::SaveFormat::jpeg(95);
  throw UsageError("--output must end in .png, .jpg or .jpeg");
}

iqa::Task parse_task(const std::string& name) {
  auto t = iqa::task_from_name(name);
  if (!t) throw UsageError("unknown task '" + name + "'");
  return *t;
}

void write_text(const std::string& path, const std::string& text) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct Globals {
  std::uint64_t seed = 0;
  unsigned parallel = 1;
};

// ---------------------------------------------------------------------------

struct DistortArgs {
  std::string input, sub, output;
  int level = 3;
};

int run_distort(const DistortArgs& a, const Globals& g) {
  const auto sub = iqa::sub_from_key(a.sub);
  if (!sub) throw UsageError("unknown sub-category '" + a.sub + "' (see `iqa catalog`)");
  if (a.level < iqa::Severity::kMin || a.level > iqa::Severity::kMax) throw UsageError("--level must lie in [1,5]");
  require_file(a.input, "--input");
  const auto format = format_for(a.output);
  if (!iqa::distortion_supported(*sub)) throw UsageError(a.sub + " is not supported by this build");

  const auto spec = iqa::DistortionSpec::make(*sub, iqa::Severity::from_level(a.level), g.seed);
  const auto img = iqa::load_image(a.input);
  const auto out = iqa::apply_distortion(img, spec, g.parallel);
  if (fs::path(a.output).has_parent_path()) fs::create_directories(fs::path(a.output).parent_path());
  iqa::save_image(out, a.output, format);

  Json j;
  j["sub"] = std::string(iqa::sub_key(spec.sub));
  j["name"] = std::string(iqa::distortion_name(spec.sub));
  j["super"] = std::string(iqa::distortion_name(spec.super()));
  j["level"] = a.level;
  j["severity"] = std::string(spec.severity.name());
  j["params"] = iqa::params_to_json(spec.params);
  j["seed"] = spec.seed;
  j["output"] = a.output;
  std::cout << j.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string refs, task = "distortion-identification", setting = "full-reference", out, mos;
  std::size_t count = 100;
  double pristine_frac = 0.05, multi_frac = 0.5;
};

int run_build(const BuildArgs& a, const Globals& g) {
  iqa::BuildConfig c;
  c.refs = a.refs;
  c.task = parse_task(a.task);
  auto s = iqa::setting_from_name(a.setting);
  if (!s) throw UsageError("unknown setting '" + a.setting + "'");
  c.setting = *s;
  c.count = a.count;
  c.pristine_frac = a.pristine_frac;
  c.multi_frac = a.multi_frac;
  c.seed = g.seed;
  c.out = a.out;
  if (!a.mos.empty()) c.mos = a.mos;
  c.parallel = g.parallel;
  try {
    iqa::validate(c);
  } catch (const iqa::ConfigError& e) {
    throw UsageError(std::string("--") + e.what());
  }
  const auto summary = iqa::build_dataset(c);
  std::cout << summary.to_json().dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ClientArgs {
  std::string endpoint;
  std::optional<double> oracle;
  double timeout = 30.0;
  int retries = 3;
  std::string auth_env = "IQA_API_TOKEN";

  iqa::EndpointConfig endpoint_config() const {
    iqa::EndpointConfig c;
    c.url = endpoint;
    c.timeout_s = timeout;
    c.max_retries = retries;
    c.auth_env = auth_env;
    return c;
  }

  void check() const {
    if (endpoint.empty() == !oracle.has_value()) throw UsageError("give exactly one of --endpoint or --oracle");
    if (oracle && !(*oracle >= 0.0 && *oracle < 0.5)) throw UsageError("--oracle must lie in [0, 0.5)");
    if (!endpoint.empty()) {
      try {
        endpoint_config().check();
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--endpoint: ") + e.what());
      }
    }
  }
};

struct PredictArgs {
  std::string gold, task, out;
  ClientArgs client;
};

int run_predict(const PredictArgs& a, const Globals& g) {
  a.client.check();
  require_file(a.gold, "--gold");
  const auto task = parse_task(a.task);
  if (!iqa::is_brief(task)) throw UsageError("predict supports the brief tasks only");
  const auto gold = iqa::read_jsonl(a.gold);
  const fs::path root = fs::absolute(a.gold).parent_path();

  std::vector<iqa::InferenceRequest> requests;
  for (const auto& r : gold) {
    if (r.task != task) continue;
    iqa::InferenceRequest req;
    req.question = r.question;
    for (const auto& p : {r.images.reference, std::optional<std::string>(r.images.image_a), r.images.image_b}) {
      if (p) req.images.push_back(fs::path(*p).is_absolute() ? *p : (root / *p).string());
    }
    req.sample_id = r.id;
    requests.push_back(std::move(req));
  }

  std::vector<iqa::Prediction> preds;
  if (a.client.oracle) {
    const auto store = iqa::GroundTruthStore::from_records(gold);
    for (const auto& req : requests) {
      preds.push_back({*req.sample_id, iqa::oracle_infer(req, store, *a.client.oracle, g.seed).text});
    }
  } else {
    iqa::Client client(a.client.endpoint_config(), g.parallel);
    auto res = client.infer_batch(requests);
    if (!res.errors.empty()) {
      std::string msg = std::to_string(res.errors.size()) + " request(s) failed:";
      for (const auto& [i, e] : res.errors) msg += "\n  " + *requests[i].sample_id + ": " + e;
      throw std::runtime_error(msg);
    }
    for (std::size_t i = 0; i < requests.size(); ++i) preds.push_back({*requests[i].sample_id, res.responses[i]->text});
  }
  iqa::write_predictions(preds, a.out);
  std::cerr << "wrote " << preds.size() << " predictions to " << a.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string groups, strategy = "round-robin", weighting = "unweighted", out, outcomes;
  std::optional<std::size_t> k;
  ClientArgs client;
};

struct GroupImage {
  std::string id, path;
  std::optional<double> mos;
};

struct Group {
  std::string id;
  std::vector<GroupImage> images;
};

std::vector<Group> read_groups(const std::string& path) {
  std::vector<Group> out;
  std::set<std::string> seen;
  std::size_t line = 0;
  for (const auto& j : iqa::read_json_lines(path)) {
    ++line;
    try {
      Group g;
      g.id = j.at("group_id").get<std::string>();
      for (const auto& im : j.at("images")) {
        GroupImage gi;
        gi.id = im.at("id").get<std::string>();
        gi.path = im.value("path", std::string{});
        if (im.contains("mos")) gi.mos = im.at("mos").get<double>();
        if (!seen.insert(gi.id).second) throw std::invalid_argument("image id " + gi.id + " appears twice");
        g.images.push_back(std::move(gi));
      }
      if (g.images.size() < 2) throw std::invalid_argument("group " + g.id + " has fewer than two images");
      out.push_back(std::move(g));
    } catch (const std::exception& e) {
      throw UsageError(path + ": record " + std::to_string(line) + ": " + e.what());
    }
  }
  if (out.empty()) throw UsageError(path + ": no groups");
  return out;
}

int run_score(const ScoreArgs& a, const Globals& g) {
  a.client.check();
  require_file(a.groups, "--groups");
  iqa::PlanStrategy strategy;
  if (a.strategy == "round-robin") {
    if (a.k) throw UsageError("--k only applies to --strategy random-k");
    strategy = iqa::PlanStrategy::round_robin(g.seed);
  } else if (a.strategy == "random-k") {
    if (!a.k) throw UsageError("--strategy random-k needs --k");
    strategy = iqa::PlanStrategy::random_k(*a.k, g.seed);
  } else {
    throw UsageError("unknown strategy '" + a.strategy + "'");
  }
  iqa::Weighting weighting;
  if (a.weighting == "unweighted") {
    weighting = iqa::Weighting::Unweighted;
  } else if (a.weighting == "confidence") {
    weighting = iqa::Weighting::ConfidenceWeighted;
  } else {
    throw UsageError("unknown weighting '" + a.weighting + "'");
  }
  try {
    iqa::check_weighting(strategy, weighting);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--weighting: ") + e.what());
  }
  const auto groups = read_groups(a.groups);
  for (const auto& gr : groups) {
    if (strategy.kind == iqa::PlanStrategy::Kind::RandomK && *a.k > gr.images.size() - 1) {
      throw UsageError("--k " + std::to_string(*a.k) + " exceeds group " + gr.id + " size minus one");
    }
    for (const auto& im : gr.images) {
      if (a.client.oracle && !im.mos) throw UsageError("--oracle needs a mos for image " + im.id);
      if (!a.client.oracle && im.path.empty()) throw UsageError("--endpoint needs a path for image " + im.id);
    }
  }

  std::optional<iqa::Client> client;
  if (!a.client.endpoint.empty()) client.emplace(a.client.endpoint_config(), g.parallel);

  std::vector<iqa::ComparisonOutcome> all;
  Json report;
  Json per_group = Json::array();
  double srcc_sum = 0.0, plcc_sum = 0.0;
  std::size_t corr_groups = 0;
  iqa::QualityScoreTable scores;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& gr = groups[gi];
    std::vector<std::string> ids;
    std::map<std::string, const GroupImage*> by_id;
    for (const auto& im : gr.images) {
      ids.push_back(im.id);
      by_id[im.id] = &im;
    }
    auto plan = iqa::make_plan(gr.id, ids, strategy);
    std::vector<iqa::ComparisonOutcome> outcomes;
    if (a.client.oracle) {
      std::map<std::string, double> truth;
      for (const auto& im : gr.images) truth[im.id] = *im.mos;
      iqa::SimulatedComparator sim(truth, *a.client.oracle, {}, iqa::derive_key(g.seed, {gi}));
      outcomes = sim.run(plan);
    } else {
      std::vector<iqa::InferenceRequest> reqs;
      for (const auto& p : plan.pairs) {
        iqa::InferenceRequest r;
        r.question = std::string(iqa::question_templates(iqa::Task::InstantRating)[0]) + " " +
                     std::string(iqa::kShortAnswerSuffix);
        r.images = {by_id[p.a]->path, by_id[p.b]->path};
        r.want_logprobs = weighting == iqa::Weighting::ConfidenceWeighted;
        r.sample_id = gr.id + ":" + p.a + "/" + p.b;
        reqs.push_back(std::move(r));
      }
      auto res = client->infer_batch(reqs);
      std::string failures;
      const auto keys = iqa::brief_key_tokens(iqa::Task::InstantRating);
      for (std::size_t i = 0; i < reqs.size(); ++i) {
        if (!res.responses[i]) continue;
        const auto w = iqa::parse_winner(res.responses[i]->text);
        if (!w) {
          res.errors.emplace_back(i, "unparseable answer '" + res.responses[i]->text + "'");
          continue;
        }
        double conf = 1.0;
        if (weighting == iqa::Weighting::ConfidenceWeighted) {
          // No usable logprobs means the outcome carries no weight.
          conf = res.responses[i]->token_logprobs ? iqa::extract_confidence(*res.responses[i], keys).value_or(0.0) : 0.0;
        }
        outcomes.push_back({plan.pairs[i].a, plan.pairs[i].b, *w == iqa::Winner::A ? iqa::Side::I : iqa::Side::J, conf});
      }
      for (const auto& [i, e] : res.errors) failures += "\n  " + *reqs[i].sample_id + ": " + e;
      if (!failures.empty()) throw std::runtime_error(std::to_string(res.errors.size()) + " comparison(s) failed:" + failures);
    }
    const auto table = iqa::win_rate_scores(outcomes, weighting);
    Json gj;
    gj["group_id"] = gr.id;
    gj["images"] = gr.images.size();
    gj["comparisons"] = outcomes.size();
    const bool have_mos = std::all_of(gr.images.begin(), gr.images.end(), [](const GroupImage& im) { return im.mos.has_value(); });
    if (have_mos && gr.images.size() >= 3) {
      std::vector<double> pred, mos;
      for (const auto& im : gr.images) {
        pred.push_back(table.at(im.id).score);
        mos.push_back(*im.mos);
      }
      try {
        const double s = iqa::srcc(pred, mos);
        const double p = iqa::plcc(pred, mos);
        gj["srcc"] = s;
        gj["plcc"] = p;
        srcc_sum += s;
        plcc_sum += p;
        ++corr_groups;
      } catch (const iqa::MetricError& e) {
        gj["correlation_error"] = e.what();
      }
    }
    per_group.push_back(std::move(gj));
    scores.insert(table.begin(), table.end());
    all.insert(all.end(), outcomes.begin(), outcomes.end());
  }
  write_text(a.out, iqa::scores_to_csv(scores));
  if (!a.outcomes.empty()) {
    std::vector<Json> rows;
    for (const auto& o : all) rows.push_back(iqa::outcome_to_json(o));
    iqa::write_json_lines(rows, a.outcomes);
  }
  report["groups"] = per_group;
  report["comparisons"] = all.size();
  if (corr_groups > 0) {
    report["mean_srcc"] = srcc_sum / static_cast<double>(corr_groups);
    report["mean_plcc"] = plcc_sum / static_cast<double>(corr_groups);
  }
  std::cout << report.dump(2) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gold, task, report = "table", out;
};

int run_eval(const EvalArgs& a) {
  require_file(a.pred, "--pred");
  require_file(a.gold, "--gold");
  const auto task = parse_task(a.task);
  if (a.report != "json" && a.report != "table") throw UsageError("--report must be json or table");
  const auto preds = iqa::read_predictions(a.pred);
  const auto gold = iqa::read_jsonl(a.gold);
  const auto report = iqa::evaluate_run(preds, gold, task);
  const std::string text = a.report == "json" ? report.to_json().dump(2) + "\n" : report.to_table();
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return 0;
}

int run_catalog() {
  Json doc;
  doc["severity_table"] = iqa::severity_table_json();
  doc["combination_table"] = iqa::combination_table_json();
  doc["ood_split"] = iqa::ood_table_json();
  std::cout << doc.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Image quality assessment toolkit: distortions, datasets, pairwise scoring and evaluation", "iqa"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the flags; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Global seed")->capture_default_str();
  app.add_option("--parallel", g.parallel, "Worker cap")->capture_default_str()->check(CLI::Range(1u, 256u));

  DistortArgs da;
  auto* distort = app.add_subcommand("distort", "Apply one distortion to an image");
  distort->add_option("--input", da.input, "Input PNG or JPEG")->required();
  distort->add_option("--sub", da.sub, "Sub-category key, e.g. jpeg or motion-blur")->required();
  distort->add_option("--level", da.level, "Severity level 1-5")->required();
  distort->add_option("--output", da.output, "Output .png/.jpg")->required();

  BuildArgs ba;
  auto* build = app.add_subcommand("build", "Build a dataset JSONL plus images");
  build->add_option("--refs", ba.refs, "Directory of reference images");
  build->add_option("--task", ba.task, "distortion-identification | instant-rating | assessment-reasoning-prompt | comparison-reasoning-prompt")
      ->capture_default_str();
  build->add_option("--setting", ba.setting, "full-reference | non-reference")->capture_default_str();
  build->add_option("--count", ba.count, "Number of records")->capture_default_str();
  build->add_option("--pristine-frac", ba.pristine_frac, "Fraction of undistorted samples")->capture_default_str();
  build->add_option("--multi-frac", ba.multi_frac, "Fraction of two-distortion samples")->capture_default_str();
  build->add_option("--out", ba.out, "Output JSONL")->required();
  build->add_option("--mos", ba.mos, "MOS CSV (instant-rating)");

  auto add_client = [](CLI::App* sub, ClientArgs& c) {
    sub->add_option("--endpoint", c.endpoint, "Model endpoint URL");
    sub->add_option("--oracle", c.oracle, "Answer with the ground-truth oracle at this error rate");
    sub->add_option("--timeout", c.timeout, "Request timeout in seconds")->capture_default_str();
    sub->add_option("--retries", c.retries, "Retries on transient failures")->capture_default_str();
    sub->add_option("--auth-env", c.auth_env, "Environment variable holding the bearer token")->capture_default_str();
  };

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "Answer a brief-task dataset with an endpoint or the oracle");
  predict->add_option("--gold", pa.gold, "Dataset JSONL")->required();
  predict->add_option("--task", pa.task, "distortion-identification | instant-rating")->required();
  predict->add_option("--out", pa.out, "Predictions JSONL")->required();
  add_client(predict, pa.client);

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Pairwise comparisons to win-rate quality scores");
  score->add_option("--groups", sa.groups, "Groups JSONL")->required();
  score->add_option("--strategy", sa.strategy, "round-robin | random-k")->capture_default_str();
  score->add_option("--k", sa.k, "Partners per image for random-k");
  score->add_option("--weighting", sa.weighting, "unweighted | confidence")->capture_default_str();
  score->add_option("--out", sa.out, "Scores CSV")->required();
  score->add_option("--outcomes", sa.outcomes, "Optional outcomes JSONL");
  add_client(score, sa.client);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate predictions against a dataset");
  eval->add_option("--pred", ea.pred, "Predictions JSONL")->required();
  eval->add_option("--gold", ea.gold, "Dataset JSONL")->required();
  eval->add_option("--task", ea.task, "Task to evaluate")->required();
  eval->add_option("--report", ea.report, "json | table")->capture_default_str();
  eval->add_option("--out", ea.out, "Write the report here instead of stdout");

  auto* catalog = app.add_subcommand("catalog", "Dump the severity, combination and OOD tables as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }

  try {
    if (distort->parsed()) return run_distort(da, g);
    if (build->parsed()) return run_build(ba, g);
    if (predict->parsed()) return run_predict(pa, g);
    if (score->parsed()) return run_score(sa, g);
    if (eval->parsed()) return run_eval(ea);
    if (catalog->parsed()) return run_catalog();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
