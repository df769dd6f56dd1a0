#include "iqa/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace iqa {
namespace {

bool contains_seq(const std::vector<std::string>& toks, std::initializer_list<std::string_view> seq,
                  std::size_t* where = nullptr) {
  if (toks.size() < seq.size()) return false;
  for (std::size_t i = 0; i + seq.size() <= toks.size(); ++i) {
    if (std::equal(seq.begin(), seq.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
      if (where) *where = i;
      return true;
    }
  }
  return false;
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError("correlation needs equal lengths");
  if (x.size() < 3) throw MetricError("correlation needs at least 3 values");
}

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  std::map<Ngram, std::size_t> out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++out[Ngram(toks.begin() + static_cast<std::ptrdiff_t>(i), toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

std::string arity_of(const SampleRecord& r) {
  const auto recipes = record_recipes(r);
  if (recipes.empty()) return "all";
  std::size_t most = 0;
  for (const auto& rc : recipes) most = std::max(most, rc.specs.size());
  return most == 0 ? "pristine" : most == 1 ? "single" : "multi";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

double identification_accuracy(std::span<const IdLabel> pred, std::span<const IdLabel> gt) {
  if (gt.empty()) throw std::invalid_argument("identification_accuracy: empty ground truth");
  std::vector<IdLabel> kept;
  for (const auto& p : pred) {
    if (kept.size() == gt.size()) break;
    if (std::find(kept.begin(), kept.end(), p) == kept.end()) kept.push_back(p);
  }
  std::vector<IdLabel> g;
  for (const auto& x : gt) {
    if (std::find(g.begin(), g.end(), x) == g.end()) g.push_back(x);
  }
  std::size_t hit = 0;
  for (const auto& p : kept) hit += std::find(g.begin(), g.end(), p) != g.end();
  return static_cast<double>(hit) / static_cast<double>(g.size());
}

std::optional<std::vector<IdLabel>> parse_identification(std::string_view text) {
  const auto supers = find_super_categories(text);
  if (!supers.empty()) return std::vector<IdLabel>(supers.begin(), supers.end());
  const auto toks = tokenize(text);
  if (contains_seq(toks, {"none"}) || contains_seq(toks, {"no", "distortion"}) ||
      contains_seq(toks, {"no", "distortions"}) || contains_seq(toks, {"undistorted"}) ||
      contains_seq(toks, {"pristine"})) {
    return std::vector<IdLabel>{std::nullopt};
  }
  return std::nullopt;
}

std::vector<IdLabel> recipe_labels(const Recipe& recipe) {
  if (recipe.pristine()) return {std::nullopt};
  std::vector<IdLabel> out;
  for (const auto& s : recipe.specs) out.emplace_back(s.super());
  return out;
}

std::optional<Winner> parse_winner(std::string_view text) {
  const auto toks = tokenize(text);
  std::size_t pa = 0, pb = 0;
  const bool a = contains_seq(toks, {"image", "a"}, &pa);
  const bool b = contains_seq(toks, {"image", "b"}, &pb);
  if (a && (!b || pa < pb)) return Winner::A;
  if (b) return Winner::B;
  if (toks.size() == 1 && toks[0] == "a") return Winner::A;
  if (toks.size() == 1 && toks[0] == "b") return Winner::B;
  return std::nullopt;
}

double rating_accuracy(Winner pred, Winner gt) { return pred == gt ? 1.0 : 0.0; }

double rating_accuracy(std::span<const std::optional<Winner>> pred, std::span<const Winner> gt) {
  if (pred.size() != gt.size()) throw std::invalid_argument("rating_accuracy: length mismatch");
  if (gt.empty()) throw std::invalid_argument("rating_accuracy: empty input");
  double hit = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) hit += pred[i] ? rating_accuracy(*pred[i], gt[i]) : 0.0;
  return hit / static_cast<double>(gt.size());
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}

double plcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError("correlation is undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double srcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return plcc(rx, ry);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double bleu(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  if (r.empty()) throw std::invalid_argument("bleu: empty reference");
  if (c.empty()) return 0.0;
  double log_p = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto cc = ngram_counts(c, n);
    const auto rc = ngram_counts(r, n);
    double match = 0.0, total = 0.0;
    for (const auto& [g, k] : cc) {
      total += static_cast<double>(k);
      auto it = rc.find(g);
      if (it != rc.end()) match += static_cast<double>(std::min(k, it->second));
    }
    if (n == 1) {
      if (match == 0.0) return 0.0;
      log_p += std::log(match / total);
    } else {
      log_p += std::log((match + 1.0) / (total + 1.0));
    }
  }
  const double lc = static_cast<double>(c.size());
  const double lr = static_cast<double>(r.size());
  const double bp = lc >= lr ? 1.0 : std::exp(1.0 - lr / lc);
  return bp * std::exp(log_p / 4.0);
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  if (r.empty()) throw std::invalid_argument("rouge_l: empty reference");
  if (c.empty()) return 0.0;
  std::vector<std::size_t> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
  for (std::size_t i = 1; i <= c.size(); ++i) {
    for (std::size_t j = 1; j <= r.size(); ++j) {
      cur[j] = c[i - 1] == r[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[r.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(c.size());
  const double rec = lcs / static_cast<double>(r.size());
  return 2.0 * p * rec / (p + rec);
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  std::size_t line = 0;
  for (const auto& j : read_json_lines(path)) {
    ++line;
    try {
      // A dataset file works as its own prediction file.
      const auto& text = j.contains("text") ? j.at("text") : j.at("response");
      out.push_back({j.at("id").get<std::string>(), text.get<std::string>()});
    } catch (const Json::exception& e) {
      throw DatasetError(path.string() + ": record " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

void write_predictions(std::span<const Prediction> preds, const std::filesystem::path& path) {
  std::vector<Json> rows;
  for (const auto& p : preds) rows.push_back(Json{{"id", p.id}, {"text", p.text}});
  write_json_lines(rows, path);
}

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
  std::string msg = std::to_string(problems.size()) + " join error(s):";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}
}  // namespace

JoinError::JoinError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

Json MetricReport::to_json() const {
  Json j;
  j["task"] = std::string(task_name(task));
  j["count"] = count;
  j["unparseable"] = unparseable;
  j["unparseable_rate"] = unparseable_rate();
  Json cs = Json::array();
  for (const auto& c : cells) {
    Json cj;
    cj["setting"] = c.setting;
    cj["arity"] = c.arity;
    cj["count"] = c.count;
    for (const auto& [k, v] : c.values) cj[k] = v;
    cs.push_back(std::move(cj));
  }
  j["cells"] = std::move(cs);
  return j;
}

std::string MetricReport::to_table() const {
  std::vector<std::string> metric_names;
  for (const auto& [k, v] : cells.front().values) metric_names.push_back(k);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"setting", "arity", "count"};
  head.insert(head.end(), metric_names.begin(), metric_names.end());
  rows.push_back(head);
  for (const auto& c : cells) {
    std::vector<std::string> row{c.setting, c.arity, std::to_string(c.count)};
    for (const auto& m : metric_names) {
      auto it = c.values.find(m);
      row.push_back(it == c.values.end() ? "-" : fmt(it->second));
    }
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  os << "task: " << task_name(task) << "  samples: " << count << "  unparseable: " << unparseable << " ("
     << fmt(unparseable_rate()) << ")\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) os << "  ";
      // Text columns left-aligned, numbers right-aligned.
      if (i < 2) {
        os << r[i] << std::string(width[i] - r[i].size(), ' ');
      } else {
        os << std::string(width[i] - r[i].size(), ' ') << r[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

MetricReport evaluate_run(std::span<const Prediction> predictions, std::span<const SampleRecord> gold, Task task) {
  std::vector<std::string> problems;
  std::unordered_map<std::string, const SampleRecord*> by_id;
  std::set<std::string> other_task;
  for (const auto& g : gold) {
    if (g.task != task) {
      other_task.insert(g.id);
      continue;
    }
    if (!by_id.emplace(g.id, &g).second) problems.push_back("duplicate gold id " + g.id);
  }
  std::unordered_map<std::string, const Prediction*> pred_by_id;
  for (const auto& p : predictions) {
    if (!by_id.count(p.id)) {
      if (!other_task.count(p.id)) problems.push_back("prediction " + p.id + " has no gold record");
      continue;
    }
    if (!pred_by_id.emplace(p.id, &p).second) problems.push_back("duplicate prediction id " + p.id);
  }
  for (const auto& g : gold) {
    if (g.task == task && !pred_by_id.count(g.id)) problems.push_back("missing prediction for " + g.id);
  }
  if (!problems.empty()) throw JoinError(std::move(problems));
  if (by_id.empty()) throw std::invalid_argument("no gold records for task " + std::string(task_name(task)));

  struct Acc {
    std::size_t n = 0;
    std::map<std::string, double> sum;
  };
  std::map<std::pair<std::string, std::string>, Acc> cells;
  MetricReport report;
  report.task = task;

  for (const auto& g : gold) {
    if (g.task != task) continue;
    const auto& text = pred_by_id.at(g.id)->text;
    std::map<std::string, double> v;
    switch (task) {
      case Task::DistortionIdentification: {
        const auto recipes = record_recipes(g);
        if (recipes.size() != 1) throw std::invalid_argument("record " + g.id + " needs exactly one recipe");
        const auto parsed = parse_identification(text);
        if (!parsed) ++report.unparseable;
        const auto gt = recipe_labels(recipes[0]);
        v["accuracy"] = parsed ? identification_accuracy(*parsed, gt) : 0.0;
        break;
      }
      case Task::InstantRating: {
        const auto gt = parse_winner(g.answer.empty() ? g.response : g.answer);
        if (!gt) throw std::invalid_argument("record " + g.id + " has no gold winner");
        const auto p = parse_winner(text);
        if (!p) ++report.unparseable;
        v["accuracy"] = p ? rating_accuracy(*p, *gt) : 0.0;
        break;
      }
      default:
        if (g.response.empty()) throw std::invalid_argument("record " + g.id + " has no reference response");
        v["bleu"] = bleu(text, g.response);
        v["rouge_l"] = rouge_l(text, g.response);
        break;
    }
    const std::string setting(setting_name(g.setting));
    const std::string arity = task == Task::DistortionIdentification ? arity_of(g) : "all";
    std::set<std::pair<std::string, std::string>> keys{{"all", "all"}, {setting, "all"}, {setting, arity}};
    for (const auto& key : keys) {
      auto& a = cells[key];
      ++a.n;
      for (const auto& [k, x] : v) a.sum[k] += x;
    }
    ++report.count;
  }
  auto emit = [&](const std::string& s, const std::string& a) {
    auto it = cells.find({s, a});
    if (it == cells.end()) return;
    ReportCell c{s, a, it->second.n, {}};
    for (const auto& [k, x] : it->second.sum) c.values[k] = x / static_cast<double>(it->second.n);
    report.cells.push_back(std::move(c));
  };
  emit("all", "all");
  for (const char* s : {"full-reference", "non-reference"}) {
    emit(s, "all");
    if (task == Task::DistortionIdentification) {
      for (const char* a : {"pristine", "single", "multi"}) emit(s, a);
    }
  }
  return report;
}

}  // namespace iqa
