#include "iqa/build.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>

#include "iqa/io.hpp"
#include "iqa/parallel.hpp"
#include "iqa/rng.hpp"

namespace iqa {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTagRecord = 0x7265636FULL;
constexpr std::uint64_t kTagRecipe = 0x72637065ULL;
constexpr std::uint64_t kTagRef = 0x72656620ULL;
constexpr std::uint64_t kTagGroup = 0x67727570ULL;
constexpr std::uint64_t kTagSecond = 0x7365636EULL;

std::string make_id(Task task, std::size_t index) {
  const char* prefix = "ident";
  switch (task) {
    case Task::DistortionIdentification:
      break;
    case Task::InstantRating:
      prefix = "rating";
      break;
    case Task::AssessmentReasoningPrompt:
      prefix = "assess";
      break;
    case Task::ComparisonReasoningPrompt:
      prefix = "compare";
      break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", prefix, index);
  return buf;
}

// Reference images decoded on first use, shared across workers.
class RefCache {
 public:
  explicit RefCache(std::vector<fs::path> paths) : paths_(std::move(paths)), images_(paths_.size()), once_(paths_.size()) {}

  std::size_t size() const { return paths_.size(); }
  const fs::path& path(std::size_t i) const { return paths_[i]; }
  const ImageBuf& image(std::size_t i) {
    std::call_once(once_[i], [&] { images_[i] = load_image(paths_[i]); });
    return *images_[i];
  }

 private:
  std::vector<fs::path> paths_;
  std::vector<std::optional<ImageBuf>> images_;
  std::vector<std::once_flag> once_;
};

ImageBuf render(const ImageBuf& ref, const Recipe& recipe) {
  ImageBuf img = ref;
  for (const auto& s : recipe.specs) img = apply_distortion(img, s);
  return img;
}

std::string write_image(const ImageBuf& img, const OutputLayout& out, std::string_view id, std::string_view suffix) {
  const auto file = out.image_path(id, suffix);
  save_image(img, file, SaveFormat::png());
  return out.record_path(file);
}

}  // namespace

BuildConfig BuildConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  BuildConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "refs") {
        c.refs = value.get<std::string>();
      } else if (key == "task") {
        auto t = task_from_name(value.get<std::string>());
        if (!t) throw ConfigError(key, "unknown task '" + value.get<std::string>() + "'");
        c.task = *t;
      } else if (key == "setting") {
        auto s = setting_from_name(value.get<std::string>());
        if (!s) throw ConfigError(key, "unknown setting '" + value.get<std::string>() + "'");
        c.setting = *s;
      } else if (key == "count") {
        c.count = value.get<std::size_t>();
      } else if (key == "pristine_frac" || key == "pristine-frac") {
        c.pristine_frac = value.get<double>();
      } else if (key == "multi_frac" || key == "multi-frac") {
        c.multi_frac = value.get<double>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        c.out = value.get<std::string>();
      } else if (key == "mos") {
        c.mos = value.get<std::string>();
      } else if (key == "parallel") {
        c.parallel = value.get<unsigned>();
      } else {
        throw ConfigError(key, "unknown key");
      }
    } catch (const Json::exception& e) {
      throw ConfigError(key, std::string("wrong type: ") + e.what());
    }
  }
  return c;
}

Json BuildConfig::to_json() const {
  Json j;
  j["refs"] = refs.string();
  j["task"] = std::string(task_name(task));
  j["setting"] = std::string(setting_name(setting));
  j["count"] = count;
  j["pristine_frac"] = pristine_frac;
  j["multi_frac"] = multi_frac;
  j["seed"] = seed;
  j["out"] = out.string();
  if (mos) j["mos"] = mos->string();
  j["parallel"] = parallel;
  return j;
}

void validate(const BuildConfig& c) {
  if (c.out.empty()) throw ConfigError("out", "output path is required");
  if (c.count == 0) throw ConfigError("count", "must be at least 1");
  if (c.pristine_frac < 0.0 || c.pristine_frac > 1.0) throw ConfigError("pristine_frac", "must lie in [0,1]");
  if (c.multi_frac < 0.0 || c.multi_frac > 1.0) throw ConfigError("multi_frac", "must lie in [0,1]");
  if (c.parallel == 0) throw ConfigError("parallel", "must be at least 1");
  if (c.task == Task::InstantRating) {
    if (!c.mos) throw ConfigError("mos", "instant-rating needs a MOS table (--mos)");
    if (!fs::is_regular_file(*c.mos)) throw ConfigError("mos", "no such file " + c.mos->string());
    return;
  }
  if (c.refs.empty()) throw ConfigError("refs", "reference directory is required");
  if (!fs::is_directory(c.refs)) throw ConfigError("refs", "not a directory: " + c.refs.string());
  if (list_reference_images(c.refs).empty()) throw ConfigError("refs", "no PNG or JPEG images in " + c.refs.string());
}

Json BuildSummary::to_json() const {
  Json j;
  j["records"] = records;
  j["pristine"] = pristine;
  j["single"] = single;
  j["multi"] = multi;
  j["per_super_category"] = per_super;
  j["per_severity"] = per_severity;
  j["slight_in_excluded_categories"] = slight_in_excluded;
  return j;
}

std::vector<fs::path> list_reference_images(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t record_seed(std::uint64_t global_seed, std::size_t index) {
  return derive_key(global_seed, {kTagRecord, index});
}

BuildSummary summarize(std::span<const SampleRecord> records) {
  BuildSummary s;
  s.records = records.size();
  for (const auto& r : records) {
    for (const auto& recipe : record_recipes(r)) {
      if (recipe.pristine()) ++s.pristine;
      else if (recipe.specs.size() == 1) ++s.single;
      else ++s.multi;
      for (const auto& spec : recipe.specs) {
        ++s.per_super[std::string(distortion_name(spec.super()))];
        ++s.per_severity[std::string(spec.severity.name())];
        if (spec.severity.level() == 1 && excluded_when_slight(spec.super())) ++s.slight_in_excluded;
      }
    }
  }
  return s;
}

BuildSummary build_dataset(const BuildConfig& c) {
  validate(c);
  OutputLayout layout;
  layout.root = fs::absolute(c.out).parent_path();
  fs::create_directories(layout.root / layout.image_subdir);

  std::vector<SampleRecord> records(c.count);
  const SampleMode mode = SampleMode::mixed(c.pristine_frac, c.multi_frac);

  if (c.task == Task::InstantRating) {
    const MosTable table = read_mos_csv(*c.mos);
    std::vector<std::string> eligible;
    for (const auto& g : table.groups()) {
      const auto rows = table.group(g);
      if (rows.size() >= 2 &&
          std::any_of(rows.begin(), rows.end(), [&](const MosRow* r) { return r->mos != rows[0]->mos; })) {
        eligible.push_back(g);
      }
    }
    if (eligible.empty()) throw DatasetError("MOS table has no group with two distinct scores");
    parallel_for(c.count, c.parallel, [&](std::size_t i) {
      const auto s = record_seed(c.seed, i);
      const auto& g = eligible[CounterRng(s, {kTagGroup}).below(eligible.size())];
      records[i] = build_rating_sample(table, g, c.setting, s, make_id(c.task, i), layout);
    });
  } else {
    RefCache refs(list_reference_images(c.refs));
    parallel_for(c.count, c.parallel, [&](std::size_t i) {
      const auto s = record_seed(c.seed, i);
      const auto id = make_id(c.task, i);
      const std::size_t ri = CounterRng(s, {kTagRef}).below(refs.size());
      const ImageBuf& ref = refs.image(ri);
      const Recipe recipe = sample_recipe(derive_key(s, {kTagRecipe}), mode, c.setting);
      ImageRefs images;
      if (c.setting == ReferenceSetting::FullReference) images.reference = layout.record_path(refs.path(ri));

      switch (c.task) {
        case Task::DistortionIdentification:
          records[i] = build_identification_sample(ref, refs.path(ri), recipe, c.setting, s, id, layout);
          break;
        case Task::AssessmentReasoningPrompt: {
          images.image_a = write_image(render(ref, recipe), layout, id, "");
          const Recipe rs[] = {recipe};
          records[i] = build_reasoning_prompt(c.task, c.setting, images, rs, std::nullopt, s, id);
          break;
        }
        case Task::ComparisonReasoningPrompt: {
          // Redraw the second recipe until the pair has a strict PSNR winner.
          const ImageBuf a = render(ref, recipe);
          const double pa = psnr(ref, quantize8(a));
          for (std::uint64_t attempt = 0;; ++attempt) {
            const Recipe second = sample_recipe(derive_key(s, {kTagSecond, attempt}), mode, c.setting);
            const ImageBuf b = render(ref, second);
            const double pb = psnr(ref, quantize8(b));
            if (pa == pb) continue;
            images.image_a = write_image(a, layout, id, "_a");
            images.image_b = write_image(b, layout, id, "_b");
            const Recipe rs[] = {recipe, second};
            records[i] = build_reasoning_prompt(c.task, c.setting, images, rs, pa > pb ? Winner::A : Winner::B, s, id);
            break;
          }
          break;
        }
        case Task::InstantRating:
          break;
      }
    });
  }
  write_jsonl(records, c.out);
  return summarize(records);
}

}  // namespace iqa
