#include "iqa/client.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "iqa/metrics.hpp"
#include "iqa/parallel.hpp"
#include "iqa/rng.hpp"

namespace iqa {
namespace {

constexpr std::uint64_t kTagOracle = 0x6F72636CULL;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw std::invalid_argument("endpoint url must start with http://, got '" + url + "'");
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == scheme + 3) throw std::invalid_argument("endpoint url has no host: '" + url + "'");
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Splits text into word pieces that keep their leading separators, the way
// subword tokenizers attach spaces.
std::vector<std::string> pseudo_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_word_char(c)) {
      cur.push_back(c);
      continue;
    }
    if (!cur.empty() && is_word_char(cur.back())) {
      out.push_back(std::move(cur));
      cur.clear();
    }
    cur.push_back(c);
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<IdLabel> labels_of(const std::string& answer) {
  auto parsed = parse_identification(answer);
  return parsed ? *parsed : std::vector<IdLabel>{};
}

}  // namespace

void EndpointConfig::check() const {
  split_url(url);
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be non-negative");
}

bool InferenceError::retryable() const {
  switch (kind_) {
    case Kind::Timeout:
    case Kind::Connection:
      return true;
    case Kind::HttpStatus:
      return status_ == 429 || status_ >= 500;
    case Kind::MalformedBody:
      return false;
  }
  return false;
}

std::string serialize_request(const InferenceRequest& r) {
  Json j;
  j["question"] = r.question;
  j["images"] = r.images;
  j["want_logprobs"] = r.want_logprobs;
  return j.dump();
}

InferenceResponse parse_response(std::string_view body) {
  try {
    const auto j = Json::parse(body);
    InferenceResponse r;
    r.text = j.at("text").get<std::string>();
    if (j.contains("token_logprobs") && !j.at("token_logprobs").is_null()) {
      std::vector<TokenLogprob> lp;
      for (const auto& t : j.at("token_logprobs")) {
        if (!t.is_array() || t.size() != 2) throw std::invalid_argument("token_logprobs entries must be [token, logprob]");
        lp.emplace_back(t[0].get<std::string>(), t[1].get<double>());
      }
      r.token_logprobs = std::move(lp);
    }
    return r;
  } catch (const std::exception& e) {
    throw InferenceError(InferenceError::Kind::MalformedBody, std::string("malformed response body: ") + e.what());
  }
}

std::string serialize_response(const InferenceResponse& r) {
  Json j;
  j["text"] = r.text;
  if (r.token_logprobs) {
    Json arr = Json::array();
    for (const auto& [tok, lp] : *r.token_logprobs) arr.push_back(Json::array({tok, lp}));
    j["token_logprobs"] = std::move(arr);
  }
  return j.dump();
}

namespace {

InferenceResponse infer_once(const InferenceRequest& request, const EndpointConfig& config, const ParsedUrl& url) {
  using K = InferenceError::Kind;
  httplib::Client cli(url.origin);
  const auto timeout = std::chrono::microseconds(static_cast<std::int64_t>(config.timeout_s * 1e6));
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config.auth_env.empty()) {
    if (const char* token = std::getenv(config.auth_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto res = cli.Post(url.path, headers, serialize_request(request), "application/json");
  if (!res) {
    const auto err = res.error();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && elapsed >= 0.9 * config.timeout_s);
    if (timed_out) {
      throw InferenceError(K::Timeout, "request timed out after " + std::to_string(config.timeout_s) + " s");
    }
    throw InferenceError(K::Connection, "request failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw InferenceError(K::HttpStatus, "endpoint returned HTTP " + std::to_string(res->status), res->status);
  }
  return parse_response(res->body);
}

}  // namespace

InferenceResponse infer(const InferenceRequest& request, const EndpointConfig& config) {
  config.check();
  const auto url = split_url(config.url);
  double delay = config.backoff_initial_s;
  for (int attempt = 0;; ++attempt) {
    try {
      return infer_once(request, config, url);
    } catch (const InferenceError& e) {
      if (!e.retryable() || attempt >= config.max_retries) throw;
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    delay *= config.backoff_factor;
  }
}

Client::Client(EndpointConfig config, unsigned max_in_flight)
    : config_(std::move(config)),
      limit_(std::clamp<unsigned>(max_in_flight, 1, kMaxInFlight)),
      slots_(static_cast<std::ptrdiff_t>(limit_)) {
  config_.check();
}

InferenceResponse Client::infer(const InferenceRequest& request) {
  slots_.acquire();
  try {
    auto r = iqa::infer(request, config_);
    slots_.release();
    return r;
  } catch (...) {
    slots_.release();
    throw;
  }
}

Client::BatchResult Client::infer_batch(std::span<const InferenceRequest> requests) {
  BatchResult out;
  out.responses.resize(requests.size());
  std::vector<std::optional<std::string>> errors(requests.size());
  parallel_for(requests.size(), limit_, [&](std::size_t i) {
    try {
      out.responses[i] = infer(requests[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) out.errors.emplace_back(i, *errors[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<double> extract_confidence(const InferenceResponse& response, std::span<const std::string> key_tokens) {
  if (!response.token_logprobs) throw std::invalid_argument("response carries no token logprobs");
  const auto& toks = *response.token_logprobs;
  std::string text;
  std::vector<std::size_t> begin;
  for (const auto& [t, lp] : toks) {
    begin.push_back(text.size());
    text += t;
  }
  const std::string hay = lower(text);
  std::vector<bool> hit(toks.size(), false);
  bool any = false;
  for (const auto& key : key_tokens) {
    const std::string k = lower(key);
    if (k.empty()) continue;
    for (std::size_t pos = hay.find(k); pos != std::string::npos; pos = hay.find(k, pos + 1)) {
      const std::size_t end = pos + k.size();
      if ((pos > 0 && is_word_char(hay[pos - 1])) || (end < hay.size() && is_word_char(hay[end]))) continue;
      any = true;
      for (std::size_t t = 0; t < toks.size(); ++t) {
        const std::size_t tb = begin[t];
        const std::size_t te = tb + toks[t].first.size();
        if (tb < end && pos < te) hit[t] = true;
      }
    }
  }
  if (!any) return std::nullopt;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < toks.size(); ++t) {
    if (!hit[t]) continue;
    sum += std::min(1.0, std::exp(toks[t].second));
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<std::string> brief_key_tokens(Task task) {
  if (task == Task::InstantRating) return {"Image A", "Image B"};
  if (task != Task::DistortionIdentification) {
    throw std::invalid_argument(std::string(task_name(task)) + " key tokens need a KeyTokenSelector");
  }
  std::vector<std::string> out{"none"};
  for (auto s : kAllSuperCategories) out.emplace_back(distortion_name(s));
  return out;
}

void GroundTruthStore::add(std::string id, GroundTruth gt) { entries_[std::move(id)] = std::move(gt); }

GroundTruthStore GroundTruthStore::from_records(std::span<const SampleRecord> records) {
  GroundTruthStore store;
  for (const auto& r : records) {
    if (is_brief(r.task)) store.add(r.id, {r.task, r.answer});
  }
  return store;
}

const GroundTruth& GroundTruthStore::at(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw std::out_of_range("unknown sample id " + id);
  return it->second;
}

const std::vector<std::string>& legal_identification_answers() {
  static const auto answers = [] {
    std::vector<std::string> out{"none"};
    for (auto s : kAllSuperCategories) out.emplace_back(distortion_name(s));
    for (const auto& [a, b] : allowed_pairs()) {
      out.push_back(std::string(distortion_name(a)) + ", " + std::string(distortion_name(b)));
    }
    return out;
  }();
  return answers;
}

InferenceResponse oracle_infer(const InferenceRequest& request, const GroundTruthStore& store, double eps,
                               std::uint64_t seed, const ConfidenceModel& model) {
  if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("oracle eps must lie in [0, 0.5)");
  if (!request.sample_id) throw std::invalid_argument("oracle requests need a sample id");
  const auto& gt = store.at(*request.sample_id);
  CounterRng rng(seed, {kTagOracle, fnv1a(request.sample_id->data(), request.sample_id->size())});
  const bool correct = !rng.bernoulli(eps);
  std::string text = gt.answer;
  if (!correct) {
    if (gt.task == Task::InstantRating) {
      text = parse_winner(gt.answer) == Winner::A ? "Image B" : "Image A";
    } else {
      const auto gold = labels_of(gt.answer);
      std::vector<const std::string*> wrong;
      for (const auto& cand : legal_identification_answers()) {
        const auto labels = labels_of(cand);
        const bool shared = std::any_of(labels.begin(), labels.end(), [&](const IdLabel& l) {
          return std::find(gold.begin(), gold.end(), l) != gold.end();
        });
        if (!shared) wrong.push_back(&cand);
      }
      text = *wrong[rng.below(wrong.size())];
    }
  }
  const double conf = correct ? rng.beta(model.correct_a, model.correct_b) : rng.beta(model.wrong_a, model.wrong_b);
  InferenceResponse r;
  r.text = text;
  if (request.want_logprobs) {
    std::vector<TokenLogprob> lp;
    const double l = std::log(std::max(conf, 1e-300));
    for (auto& t : pseudo_tokens(text)) lp.emplace_back(std::move(t), l);
    r.token_logprobs = std::move(lp);
  }
  return r;
}

}  // namespace iqa
