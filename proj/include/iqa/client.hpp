#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <semaphore>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iqa/dataset.hpp"
#include "iqa/scoring.hpp"

namespace iqa {

struct InferenceRequest {
  std::string question;
  std::vector<std::string> images;  // file paths or base64 payloads, in role order
  bool want_logprobs = false;
  std::optional<std::string> sample_id;  // local bookkeeping, not sent

  friend bool operator==(const InferenceRequest&, const InferenceRequest&) = default;
};

using TokenLogprob = std::pair<std::string, double>;

struct InferenceResponse {
  std::string text;
  std::optional<std::vector<TokenLogprob>> token_logprobs;

  friend bool operator==(const InferenceResponse&, const InferenceResponse&) = default;
};

struct EndpointConfig {
  std::string url;  // e.g. http://127.0.0.1:8000/v1/infer
  double timeout_s = 30.0;
  int max_retries = 3;
  double backoff_initial_s = 0.5;
  double backoff_factor = 2.0;
  std::string auth_env = "IQA_API_TOKEN";  // bearer token source; unset means no header

  /// Throws std::invalid_argument for a bad URL or non-positive timeout.
  void check() const;
};

class InferenceError : public std::runtime_error {
 public:
  enum class Kind { Timeout, Connection, HttpStatus, MalformedBody };

  InferenceError(Kind kind, std::string message, int status = 0)
      : std::runtime_error(std::move(message)), kind_(kind), status_(status) {}

  Kind kind() const { return kind_; }
  int status() const { return status_; }
  /// Timeouts, connection failures, 429 and 5xx are worth retrying.
  bool retryable() const;

 private:
  Kind kind_;
  int status_;
};

/// Deterministic wire form: {"question", "images", "want_logprobs"}.
std::string serialize_request(const InferenceRequest& request);
/// Throws InferenceError(MalformedBody).
InferenceResponse parse_response(std::string_view body);
std::string serialize_response(const InferenceResponse& response);

/// One HTTP round trip with retries and exponential backoff. The last error
/// is rethrown once retries are exhausted.
InferenceResponse infer(const InferenceRequest& request, const EndpointConfig& config);

/// Caps the number of requests in flight across threads.
class Client {
 public:
  static constexpr std::ptrdiff_t kMaxInFlight = 64;

  Client(EndpointConfig config, unsigned max_in_flight);

  InferenceResponse infer(const InferenceRequest& request);

  struct BatchResult {
    std::vector<std::optional<InferenceResponse>> responses;
    std::vector<std::pair<std::size_t, std::string>> errors;  // (request index, message)
  };
  /// Runs every request; failures are collected, never thrown.
  BatchResult infer_batch(std::span<const InferenceRequest> requests);

  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  unsigned limit_;
  std::counting_semaphore<kMaxInFlight> slots_;
};

// ---------------------------------------------------------------------------
// Confidence

/// Mean probability of the tokens overlapping any case-insensitive,
/// word-bounded occurrence of a key string in the concatenated token text.
/// nullopt when no key matches. Throws std::invalid_argument when the
/// response has no logprobs.
std::optional<double> extract_confidence(const InferenceResponse& response, std::span<const std::string> key_tokens);

/// Key strings for brief tasks: distortion names and "none" for
/// identification, "Image A"/"Image B" for rating.
std::vector<std::string> brief_key_tokens(Task task);

/// Hook for detailed responses, where key tokens are chosen by a model.
class KeyTokenSelector {
 public:
  virtual ~KeyTokenSelector() = default;
  virtual std::vector<std::string> select(const InferenceRequest& request, const InferenceResponse& response) = 0;
};

class BriefKeyTokenSelector final : public KeyTokenSelector {
 public:
  explicit BriefKeyTokenSelector(Task task) : keys_(brief_key_tokens(task)) {}
  std::vector<std::string> select(const InferenceRequest&, const InferenceResponse&) override { return keys_; }

 private:
  std::vector<std::string> keys_;
};

// ---------------------------------------------------------------------------
// Oracle

struct GroundTruth {
  Task task = Task::DistortionIdentification;
  std::string answer;  // canonical brief answer
};

class GroundTruthStore {
 public:
  void add(std::string id, GroundTruth gt);
  /// Brief-task records keyed by id.
  static GroundTruthStore from_records(std::span<const SampleRecord> records);
  /// Throws std::out_of_range for an unknown id.
  const GroundTruth& at(const std::string& id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, GroundTruth, std::less<>> entries_;
};

/// Answers with the gold answer with probability 1-eps, otherwise with a
/// uniformly drawn legal answer that shares no label with the gold one.
/// Logprobs follow the comparator confidence model. Pure in
/// (request.sample_id, eps, seed). Throws std::invalid_argument unless
/// 0 <= eps < 0.5 and std::out_of_range for an unknown id.
InferenceResponse oracle_infer(const InferenceRequest& request, const GroundTruthStore& store, double eps,
                               std::uint64_t seed, const ConfidenceModel& model = {});

/// Every legal identification answer: "none", each super-category and each
/// allowed ordered pair, as comma-joined names.
const std::vector<std::string>& legal_identification_answers();

}  // namespace iqa
