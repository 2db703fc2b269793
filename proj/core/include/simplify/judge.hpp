#pragma once

// LLM factual-consistency judging: prompt construction, transport with
// retries, and response parsing. The judge itself is an external service.

#include <chrono>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/document.hpp"

namespace simplify {

inline constexpr std::string_view kJudgeSystemRole = "Your task is to rate the summary on one metric.";

struct JudgePrompt {
  std::string system;
  std::string user;
};

// Throws std::invalid_argument for an empty summary.
JudgePrompt build_judge_prompt(const Document& document, std::string_view summary);

// Request body sent to the judge endpoint: {"system": ..., "prompt": ...}.
std::string judge_request_body(const JudgePrompt& prompt);

enum class Verdict { kConsistent, kInconsistent, kIndeterminate };

struct Judgment {
  Verdict verdict = Verdict::kIndeterminate;
  std::string rationale;

  bool inconsistent() const { return verdict == Verdict::kInconsistent; }
};

std::string_view to_string(Verdict v);

// A leading "Yes"/"No" word (case-insensitive) decides the verdict; anything
// else is indeterminate. The rationale is the text after "Why:" when present,
// otherwise whatever follows the verdict word.
Judgment parse_judgment(std::string_view text);

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class JudgeTransport {
 public:
  virtual ~JudgeTransport() = default;
  // Returns the response body; throws TransportError on failure or timeout.
  virtual std::string post(const std::string& body, std::chrono::milliseconds timeout) = 0;
};

// Plain HTTP(S) POST of a JSON body. The API key, when set, is sent as a
// bearer token.
class HttpJudgeTransport final : public JudgeTransport {
 public:
  HttpJudgeTransport(std::string url, std::string api_key = {});
  std::string post(const std::string& body, std::chrono::milliseconds timeout) override;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
};

// Offline stand-in returning canned responses in order, repeating the last.
class StubJudgeTransport final : public JudgeTransport {
 public:
  explicit StubJudgeTransport(std::vector<std::string> responses);
  std::string post(const std::string& body, std::chrono::milliseconds timeout) override;
  const std::vector<std::string>& requests() const { return requests_; }

 private:
  std::vector<std::string> responses_;
  std::vector<std::string> requests_;
  std::size_t next_ = 0;
};

struct RetryPolicy {
  std::size_t max_retries = 3;
  std::chrono::milliseconds initial_backoff{250};  // doubled after each failure
};

// POSTs the prompt, retrying failed attempts with exponential backoff.
// Throws TransportError once the retries are exhausted.
std::string judge_request(JudgeTransport& transport, const JudgePrompt& prompt, std::chrono::milliseconds timeout,
                          const RetryPolicy& retry = {});

struct JudgeEndpoint {
  std::string url;
  std::string api_key;
};

// Reads SIMPLIFY_JUDGE_URL and SIMPLIFY_JUDGE_API_KEY.
std::optional<JudgeEndpoint> judge_endpoint_from_env();

}  // namespace simplify
