#include "iqa/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "iqa/io.hpp"
#include "iqa/rng.hpp"

namespace iqa {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTagQuestion = 0x7175ULL;
constexpr std::uint64_t kTagResponse = 0x7265ULL;
constexpr std::uint64_t kTagShort = 0x7368ULL;
constexpr std::uint64_t kTagPick = 0x706BULL;
constexpr std::uint64_t kTagSlot = 0x736CULL;
constexpr std::uint64_t kTagSplit = 0x7370ULL;

// Pools written for this toolkit. Identification wording avoids every
// distortion synonym so only the slot carries labels.
constexpr std::array<std::string_view, kTemplatePoolSize> kIdentificationQuestions = {
    "What distortions can be found in this image?",
    "Which distortions does the evaluated image contain?",
    "Identify the distortions present in the image.",
    "What kinds of degradation affect this picture?",
    "Please list the distortions that appear in the image.",
    "Can you name the distortions in this image?",
    "Which types of distortion are visible here?",
    "What is wrong with the quality of this image?",
    "Point out the distortions in the evaluated image.",
    "Which artifacts degrade this photo?",
    "Tell me which distortions this image suffers from.",
    "What distortion types can you identify in the picture?",
    "Name every distortion you can detect in this image.",
    "Is the image distorted? If so, by what?",
    "Describe the distortion categories present in the image.",
    "What has been done to degrade this image?",
    "Determine the distortions applied to this picture.",
    "Which quality issues does the image show?",
    "List the kinds of distortion affecting the evaluated image.",
    "What distortions should be reported for this image?",
};

constexpr std::array<std::string_view, kTemplatePoolSize> kIdentificationResponses = {
    "The distortions in the image are: {DISTORTIONS}.",
    "This image is affected by {DISTORTIONS}.",
    "I can identify {DISTORTIONS} in the image.",
    "The evaluated image shows {DISTORTIONS}.",
    "Distortions present: {DISTORTIONS}.",
    "The picture suffers from {DISTORTIONS}.",
    "After inspection, the distortions are {DISTORTIONS}.",
    "The image contains the following distortions: {DISTORTIONS}.",
    "Visible distortions in this image: {DISTORTIONS}.",
    "The quality is degraded by {DISTORTIONS}.",
    "It exhibits {DISTORTIONS}.",
    "The observed distortions are {DISTORTIONS}.",
    "Looking closely, I see {DISTORTIONS}.",
    "The image has been degraded by {DISTORTIONS}.",
    "Detected distortion types: {DISTORTIONS}.",
    "The photo displays {DISTORTIONS}.",
    "My answer is {DISTORTIONS}.",
    "The distortion categories here are {DISTORTIONS}.",
    "This picture is impaired by {DISTORTIONS}.",
    "The evaluated image is marked by {DISTORTIONS}.",
};

constexpr std::array<std::string_view, kTemplatePoolSize> kRatingQuestions = {
    "Which image has better quality, Image A or Image B?",
    "Compare the two images. Which one looks better?",
    "Between Image A and Image B, which is of higher quality?",
    "Which of the two evaluated images is more visually pleasing?",
    "Please decide which image has the better perceptual quality.",
    "Given two images, which one has fewer quality problems?",
    "Which image would a viewer rate higher?",
    "Select the image with superior quality.",
    "Which picture is of better quality, A or B?",
    "Judge the two images and tell me which one is better.",
    "Which of these two images has higher visual fidelity?",
    "Which evaluated image is closer to a high-quality photo?",
    "Tell me which image shows better quality.",
    "Of Image A and Image B, which one is preferable in quality?",
    "Rate the pair: which image is better?",
    "Which image is less degraded?",
    "Which image has the higher perceived quality?",
    "Looking at both images, which is better in quality?",
    "Which one would you choose as the better-quality image?",
    "Identify the image with better overall quality.",
};

constexpr std::array<std::string_view, kTemplatePoolSize> kRatingResponses = {
    "{WINNER} has better quality.",
    "{WINNER} is better.",
    "The better image is {WINNER}.",
    "{WINNER} shows higher quality.",
    "I would choose {WINNER}.",
    "{WINNER} looks better overall.",
    "The image with higher quality is {WINNER}.",
    "{WINNER} is of superior quality.",
    "Overall, {WINNER} is preferable.",
    "{WINNER} has the better perceptual quality.",
    "My choice is {WINNER}.",
    "{WINNER} is less degraded.",
    "Judging by quality, {WINNER} wins.",
    "{WINNER} is the higher-quality image.",
    "The answer is {WINNER}.",
    "{WINNER} would be rated higher.",
    "{WINNER} is visually more pleasing.",
    "Quality-wise, {WINNER} is better.",
    "{WINNER} is closer to a high-quality photo.",
    "Between the two, {WINNER} is better.",
};

constexpr std::array<std::string_view, kTemplatePoolSize> kAssessmentQuestions = {
    "Assess the quality of this image in detail.",
    "Describe the quality of the evaluated image and explain your reasoning.",
    "Please evaluate the image quality and justify your judgment.",
    "How good is the quality of this image? Explain.",
    "Give a detailed quality assessment of the picture.",
    "Analyze the visual quality of this image.",
    "What can you say about the quality of this image, and why?",
    "Provide a reasoned evaluation of this image's quality.",
    "Examine the image and describe its quality in detail.",
    "Explain how the quality of this image is affected.",
    "Evaluate this picture, covering content, distortions and overall quality.",
    "Write a detailed assessment of the evaluated image.",
    "Discuss the perceptual quality of this image.",
    "Judge the quality of this image and explain the factors involved.",
    "How would you rate this image's quality? Give your reasons.",
    "Describe what you see and how its quality is impacted.",
    "Provide an in-depth quality analysis of the image.",
    "Assess this photo and explain what limits its quality.",
    "Reason about the image quality step by step.",
    "Offer a detailed explanation of the image's quality.",
};

constexpr std::array<std::string_view, kTemplatePoolSize> kComparisonQuestions = {
    "Compare the quality of Image A and Image B in detail.",
    "Which image is better? Explain your reasoning in detail.",
    "Analyze both images and explain which has higher quality.",
    "Provide a detailed comparison of the two images' quality.",
    "Describe the quality differences between Image A and Image B.",
    "Evaluate the two images and justify which one is better.",
    "Compare the two evaluated images and explain your choice.",
    "Which image has better quality, and why?",
    "Give a reasoned quality comparison of the two pictures.",
    "Explain how the two images differ in quality and pick the better one.",
    "Discuss the quality of both images and decide which is superior.",
    "Assess Image A and Image B and explain which is preferable.",
    "Walk through a comparison of the two images' quality.",
    "Which of the two images would a viewer prefer? Give reasons.",
    "Contrast the two images in terms of quality and conclude.",
    "Reason step by step about which image has better quality.",
    "Compare content, distortions and overall quality of both images.",
    "Explain which image is less degraded and why.",
    "Provide an in-depth quality comparison and a final verdict.",
    "Judge which image is better and describe the evidence.",
};

constexpr std::string_view kDimensions =
    "contents, distortions along with their impacts on contents, and overall quality";

template <std::size_t N>
std::size_t pick(std::uint64_t seed, std::uint64_t tag, const std::array<std::string_view, N>&) {
  return static_cast<std::size_t>(CounterRng(seed, {tag}).below(N));
}

std::string with_suffix(std::string question) { return question + " " + std::string(kShortAnswerSuffix); }

std::string describe_recipe(const Recipe& recipe) {
  if (recipe.pristine()) return "undistorted (no distortion was applied)";
  std::string out = "distorted by ";
  for (std::size_t i = 0; i < recipe.specs.size(); ++i) {
    const auto& s = recipe.specs[i];
    if (i > 0) out += ", then by ";
    out += std::string(distortion_name(s.sub)) + " (" + std::string(distortion_name(s.super())) + ") at " +
           std::string(s.severity.name()) + " severity";
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string_view task_name(Task task) {
  switch (task) {
    case Task::DistortionIdentification:
      return "distortion-identification";
    case Task::InstantRating:
      return "instant-rating";
    case Task::AssessmentReasoningPrompt:
      return "assessment-reasoning-prompt";
    case Task::ComparisonReasoningPrompt:
      return "comparison-reasoning-prompt";
  }
  return "?";
}

std::optional<Task> task_from_name(std::string_view name) {
  for (Task t : {Task::DistortionIdentification, Task::InstantRating, Task::AssessmentReasoningPrompt,
                 Task::ComparisonReasoningPrompt}) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

bool is_brief(Task task) { return task == Task::DistortionIdentification || task == Task::InstantRating; }

void check_record(const SampleRecord& r) {
  auto fail = [&r](const std::string& what) { throw std::invalid_argument("record " + r.id + ": " + what); };
  if (r.id.empty()) throw std::invalid_argument("record with empty id");
  if (r.images.image_a.empty()) fail("missing image_a");
  const bool fr = r.setting == ReferenceSetting::FullReference;
  if (fr && !r.images.reference) fail("full-reference record without a reference image");
  if (!fr && r.images.reference) fail("non-reference record carries a reference image");
  const bool pair = r.task == Task::InstantRating || r.task == Task::ComparisonReasoningPrompt;
  if (pair && !r.images.image_b) fail("paired task without image_b");
  if (!pair && r.images.image_b) fail("single-image task with image_b");
  if (r.short_answer && !r.question.ends_with(kShortAnswerSuffix)) fail("short answer without the suffix");
  if (!is_brief(r.task) && !r.response.empty()) fail("prompt task with a response");
  if (!r.recipe_meta.is_array()) fail("recipe_meta must be an array");
}

std::span<const std::string_view> question_templates(Task task) {
  switch (task) {
    case Task::DistortionIdentification:
      return kIdentificationQuestions;
    case Task::InstantRating:
      return kRatingQuestions;
    case Task::AssessmentReasoningPrompt:
      return kAssessmentQuestions;
    case Task::ComparisonReasoningPrompt:
      return kComparisonQuestions;
  }
  throw std::invalid_argument("unknown task");
}

std::span<const std::string_view> response_templates(Task task) {
  switch (task) {
    case Task::DistortionIdentification:
      return kIdentificationResponses;
    case Task::InstantRating:
      return kRatingResponses;
    default:
      throw std::invalid_argument(std::string(task_name(task)) + " has no response templates");
  }
}

std::string fill_template(std::string_view tmpl, std::span<const std::pair<std::string_view, std::string>> slots) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find('{', i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw std::invalid_argument("unterminated slot in template");
    const auto name = tmpl.substr(open + 1, close - open - 1);
    auto it = std::find_if(slots.begin(), slots.end(), [&](const auto& s) { return s.first == name; });
    if (it == slots.end()) throw std::invalid_argument("no value for slot {" + std::string(name) + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

std::string distortion_list(const Recipe& recipe) {
  if (recipe.pristine()) return "none";
  std::string out;
  for (const auto& s : recipe.specs) {
    if (!out.empty()) out += ", ";
    out += distortion_name(s.super());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::string> MosTable::groups() const {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  for (const auto& r : rows) {
    if (seen.insert(r.content_group_id).second) out.push_back(r.content_group_id);
  }
  return out;
}

std::vector<const MosRow*> MosTable::group(std::string_view id) const {
  std::vector<const MosRow*> out;
  for (const auto& r : rows) {
    if (r.content_group_id == id) out.push_back(&r);
  }
  return out;
}

MosTable read_mos_csv(const fs::path& path, bool check_files) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open MOS table " + path.string());
  const fs::path base = fs::absolute(path).parent_path();
  auto resolve = [&base](const std::string& p) {
    if (p.empty()) return p;
    fs::path f(p);
    return (f.is_absolute() ? f : base / f).lexically_normal().string();
  };
  MosTable table;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    for (auto& c : cells) c = trim(c);
    auto where = [&] { return path.string() + ":" + std::to_string(lineno) + ": "; };
    if (!header) {
      if (cells != std::vector<std::string>{"image_path", "reference_path", "content_group_id", "mos"}) {
        throw DatasetError(where() + "expected header image_path,reference_path,content_group_id,mos");
      }
      header = true;
      continue;
    }
    if (cells.size() != 4) throw DatasetError(where() + "expected 4 columns, got " + std::to_string(cells.size()));
    MosRow row;
    row.image_path = resolve(cells[0]);
    row.reference_path = resolve(cells[1]);
    row.content_group_id = cells[2];
    if (cells[0].empty() || row.content_group_id.empty()) throw DatasetError(where() + "empty image or group");
    try {
      std::size_t used = 0;
      row.mos = std::stod(cells[3], &used);
      if (used != cells[3].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw DatasetError(where() + "mos '" + cells[3] + "' is not a number");
    }
    if (!std::isfinite(row.mos)) throw DatasetError(where() + "mos must be finite");
    if (check_files && !fs::exists(row.image_path)) throw DatasetError(where() + "missing image " + row.image_path);
    table.rows.push_back(std::move(row));
  }
  if (!header) throw DatasetError(path.string() + ": empty MOS table");
  return table;
}

// ---------------------------------------------------------------------------

fs::path OutputLayout::image_path(std::string_view id, std::string_view suffix) const {
  return root / image_subdir / (std::string(id) + std::string(suffix) + ".png");
}

std::string OutputLayout::record_path(const fs::path& file) const {
  const fs::path abs = fs::absolute(file).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(root).lexically_normal());
  if (rel.empty() || *rel.begin() == "..") return abs.generic_string();
  return rel.generic_string();
}

SampleRecord build_identification_sample(const ImageBuf& reference, const fs::path& reference_path,
                                         const Recipe& recipe, ReferenceSetting setting, std::uint64_t seed,
                                         std::string id, const OutputLayout& out, unsigned threads) {
  if (auto v = validate_recipe(recipe, setting); !v.empty()) {
    throw DatasetError("record " + id + ": " + v.front().message);
  }
  ImageBuf img = reference;
  for (const auto& spec : recipe.specs) img = apply_distortion(img, spec, threads);
  const fs::path file = out.image_path(id);
  fs::create_directories(file.parent_path());
  save_image(img, file, SaveFormat::png());

  SampleRecord r;
  r.id = std::move(id);
  r.task = Task::DistortionIdentification;
  r.setting = setting;
  if (setting == ReferenceSetting::FullReference) r.images.reference = out.record_path(reference_path);
  r.images.image_a = out.record_path(file);
  r.answer = distortion_list(recipe);
  r.short_answer = CounterRng(seed, {kTagShort}).bernoulli(0.5);
  r.question = std::string(kIdentificationQuestions[pick(seed, kTagQuestion, kIdentificationQuestions)]);
  if (r.short_answer) {
    r.question = with_suffix(r.question);
    r.response = r.answer;
  } else {
    const std::pair<std::string_view, std::string> slot{"DISTORTIONS", r.answer};
    r.response = fill_template(kIdentificationResponses[pick(seed, kTagResponse, kIdentificationResponses)], {&slot, 1});
  }
  r.recipe_meta = Json::array({recipe_to_json(recipe)});
  return r;
}

std::string_view winner_label(Winner w) { return w == Winner::A ? "Image A" : "Image B"; }

SampleRecord build_rating_sample(const MosTable& table, std::string_view group, ReferenceSetting setting,
                                 std::uint64_t seed, std::string id, const OutputLayout& out) {
  const auto rows = table.group(group);
  if (rows.size() < 2) throw DatasetError("group " + std::string(group) + " has fewer than two images");
  const bool distinct = std::any_of(rows.begin(), rows.end(), [&](const MosRow* r) { return r->mos != rows[0]->mos; });
  if (!distinct) throw DatasetError("group " + std::string(group) + ": every MOS is equal, no winner exists");
  const MosRow* x = nullptr;
  const MosRow* y = nullptr;
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterRng rng(seed, {kTagPick, attempt});
    const auto i = rng.below(rows.size());
    auto j = rng.below(rows.size() - 1);
    if (j >= i) ++j;
    if (rows[i]->mos == rows[j]->mos) continue;  // ties are rejected
    x = rows[i];
    y = rows[j];
    break;
  }
  const bool swap = CounterRng(seed, {kTagSlot}).bernoulli(0.5);
  const MosRow* a = swap ? y : x;
  const MosRow* b = swap ? x : y;
  const Winner winner = a->mos > b->mos ? Winner::A : Winner::B;

  SampleRecord r;
  r.id = std::move(id);
  r.task = Task::InstantRating;
  r.setting = setting;
  if (setting == ReferenceSetting::FullReference) {
    if (a->reference_path.empty()) {
      throw DatasetError("group " + std::string(group) + ": full-reference rating needs reference_path");
    }
    r.images.reference = out.record_path(a->reference_path);
  }
  r.images.image_a = out.record_path(a->image_path);
  r.images.image_b = out.record_path(b->image_path);
  r.answer = std::string(winner_label(winner));
  r.short_answer = CounterRng(seed, {kTagShort}).bernoulli(0.5);
  r.question = std::string(kRatingQuestions[pick(seed, kTagQuestion, kRatingQuestions)]);
  if (r.short_answer) {
    r.question = with_suffix(r.question);
    r.response = r.answer;
  } else {
    const std::pair<std::string_view, std::string> slot{"WINNER", r.answer};
    r.response = fill_template(kRatingResponses[pick(seed, kTagResponse, kRatingResponses)], {&slot, 1});
  }
  r.recipe_meta = Json::array();
  return r;
}

SampleRecord build_reasoning_prompt(Task task, ReferenceSetting setting, const ImageRefs& images,
                                    std::span<const Recipe> recipes, std::optional<Winner> winner,
                                    std::uint64_t seed, std::string id) {
  if (is_brief(task)) throw std::invalid_argument("build_reasoning_prompt needs a prompt task");
  const bool comparison = task == Task::ComparisonReasoningPrompt;
  if (recipes.size() != (comparison ? 2u : 1u)) {
    throw std::invalid_argument(std::string(task_name(task)) + " needs " + (comparison ? "two recipes" : "one recipe"));
  }
  if (comparison && !winner) throw std::invalid_argument("comparison prompt needs a comparison result");
  const bool fr = setting == ReferenceSetting::FullReference;

  std::ostringstream p;
  if (comparison) {
    p << "You are shown " << (fr ? "a pristine reference image and " : "") << "two evaluated images, Image A and Image B.\n";
    p << "Ground truth: Image A is " << describe_recipe(recipes[0]) << ".\n";
    p << "Ground truth: Image B is " << describe_recipe(recipes[1]) << ".\n";
    const auto w = winner_label(*winner);
    const auto l = winner_label(*winner == Winner::A ? Winner::B : Winner::A);
    p << "Ground truth: " << w << " is of higher quality than " << l << ".\n";
    p << "Write a detailed comparison that discusses, for both images, the " << kDimensions
      << ", and concludes that " << w << " is better. Do not mention that ground truth was provided.";
  } else {
    p << "You are shown " << (fr ? "a pristine reference image and " : "") << "an evaluated image.\n";
    p << "Ground truth: the evaluated image is " << describe_recipe(recipes[0]) << ".\n";
    p << "Write a detailed quality assessment of the evaluated image that covers three dimensions: " << kDimensions
      << ". Do not mention that ground truth was provided.";
  }

  SampleRecord r;
  r.id = std::move(id);
  r.task = task;
  r.setting = setting;
  r.images = images;
  if (!fr) r.images.reference.reset();
  r.question = std::string(question_templates(task)[CounterRng(seed, {kTagQuestion}).below(kTemplatePoolSize)]);
  r.answer = comparison ? std::string(winner_label(*winner)) : distortion_list(recipes[0]);
  r.recipe_meta = Json::array();
  for (const auto& rec : recipes) r.recipe_meta.push_back(recipe_to_json(rec));
  r.generator_prompt = p.str();
  return r;
}

// ---------------------------------------------------------------------------

Json record_to_json(const SampleRecord& r) {
  Json j;
  j["id"] = r.id;
  j["task"] = std::string(task_name(r.task));
  j["setting"] = std::string(setting_name(r.setting));
  Json images = Json::object();
  if (r.images.reference) images["reference"] = *r.images.reference;
  images["image_a"] = r.images.image_a;
  if (r.images.image_b) images["image_b"] = *r.images.image_b;
  j["images"] = std::move(images);
  j["question"] = r.question;
  j["response"] = r.response;
  j["answer"] = r.answer;
  j["short_answer"] = r.short_answer;
  j["recipe_meta"] = r.recipe_meta;
  if (!r.generator_prompt.empty()) j["generator_prompt"] = r.generator_prompt;
  return j;
}

SampleRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("record must be a JSON object");
  SampleRecord r;
  r.id = j.at("id").get<std::string>();
  const auto task = task_from_name(j.at("task").get<std::string>());
  if (!task) throw std::invalid_argument("unknown task '" + j.at("task").get<std::string>() + "'");
  r.task = *task;
  const auto setting = setting_from_name(j.at("setting").get<std::string>());
  if (!setting) throw std::invalid_argument("unknown setting '" + j.at("setting").get<std::string>() + "'");
  r.setting = *setting;
  const auto& images = j.at("images");
  if (images.contains("reference")) r.images.reference = images.at("reference").get<std::string>();
  r.images.image_a = images.at("image_a").get<std::string>();
  if (images.contains("image_b")) r.images.image_b = images.at("image_b").get<std::string>();
  r.question = j.at("question").get<std::string>();
  r.response = j.at("response").get<std::string>();
  r.answer = j.value("answer", std::string{});
  r.short_answer = j.at("short_answer").get<bool>();
  r.recipe_meta = j.at("recipe_meta");
  r.generator_prompt = j.value("generator_prompt", std::string{});
  return r;
}

std::vector<Json> read_json_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw DatasetError(path.string() + ": line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
    }
  }
  return out;
}

void write_json_lines(std::span<const Json> rows, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write " + path.string());
  for (const auto& r : rows) out << r.dump() << '\n';
  if (!out) throw DatasetError("write failed for " + path.string());
}

void write_jsonl(std::span<const SampleRecord> records, const fs::path& path) {
  std::vector<Json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(record_to_json(r));
  write_json_lines(rows, path);
}

std::vector<SampleRecord> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::vector<SampleRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw DatasetError(path.string() + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Recipe> record_recipes(const SampleRecord& record) {
  std::vector<Recipe> out;
  for (const auto& r : record.recipe_meta) out.push_back(recipe_from_json(r));
  return out;
}

Split split_dataset(std::span<const SampleRecord> records, const SplitPolicy& policy) {
  if (policy.kind == SplitPolicy::Kind::Random && (policy.test_frac < 0.0 || policy.test_frac > 1.0)) {
    throw std::invalid_argument("test_frac must lie in [0,1]");
  }
  Split out;
  for (const auto& r : records) {
    bool test = false;
    if (policy.kind == SplitPolicy::Kind::Random) {
      test = CounterRng(policy.seed, {kTagSplit, fnv1a(r.id.data(), r.id.size())}).uniform() < policy.test_frac;
    } else {
      for (const auto& recipe : record_recipes(r)) {
        for (const auto& s : recipe.specs) test = test || ood_split(s.sub) == OodSide::Validation;
      }
    }
    (test ? out.test : out.train).push_back(r);
  }
  return out;
}

}  // namespace iqa
