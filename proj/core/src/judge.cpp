#include "simplify/judge.hpp"

#include <cctype>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "simplify/numeric_text.hpp"

namespace simplify {
namespace {

bool starts_with_word(std::string_view text, std::string_view word) {
  if (text.size() < word.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) != word[i]) return false;
  }
  return text.size() == word.size() || !std::isalnum(static_cast<unsigned char>(text[word.size()]));
}

std::string_view strip_leading_punct(std::string_view s) {
  while (!s.empty() && (std::ispunct(static_cast<unsigned char>(s.front())) ||
                        std::isspace(static_cast<unsigned char>(s.front())))) {
    s.remove_prefix(1);
  }
  return s;
}

}  // namespace

JudgePrompt build_judge_prompt(const Document& document, std::string_view summary) {
  if (summary.empty()) throw std::invalid_argument("build_judge_prompt: empty summary");
  JudgePrompt prompt;
  prompt.system = std::string(kJudgeSystemRole);
  prompt.user =
      "Human Evaluation of Text Summarization Systems: Factual Consistency: Does the summary have untruthful "
      "or misleading facts that are not supported by the source text?\n"
      "Source Text: " + document.input + "\n"
      "Summary: " + std::string(summary) + "\n"
      "Does the summary contain factual inconsistencies?\n"
      "Answer: \n"
      "Why: ";
  return prompt;
}

std::string judge_request_body(const JudgePrompt& prompt) {
  return nlohmann::json{{"system", prompt.system}, {"prompt", prompt.user}}.dump();
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent:
      return "consistent";
    case Verdict::kInconsistent:
      return "inconsistent";
    case Verdict::kIndeterminate:
      break;
  }
  return "indeterminate";
}

Judgment parse_judgment(std::string_view text) {
  Judgment j;
  std::string_view body = trim(text);
  if (starts_with_word(body, "yes")) {
    j.verdict = Verdict::kInconsistent;
    body.remove_prefix(3);
  } else if (starts_with_word(body, "no")) {
    j.verdict = Verdict::kConsistent;
    body.remove_prefix(2);
  } else {
    j.rationale = std::string(body);
    return j;
  }
  if (const auto why = body.find("Why:"); why != std::string_view::npos) {
    j.rationale = std::string(trim(body.substr(why + 4)));
  } else {
    j.rationale = std::string(trim(strip_leading_punct(body)));
  }
  return j;
}

HttpJudgeTransport::HttpJudgeTransport(std::string url, std::string api_key) : api_key_(std::move(api_key)) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("judge endpoint URL needs a scheme: " + url);
  const auto path = url.find('/', scheme + 3);
  origin_ = url.substr(0, path);
  path_ = path == std::string::npos ? "/" : url.substr(path);
}

std::string HttpJudgeTransport::post(const std::string& body, std::chrono::milliseconds timeout) {
  httplib::Client client(origin_);
  if (!client.is_valid()) throw TransportError("unsupported judge endpoint " + origin_);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const auto res = client.Post(path_, headers, body, "application/json");
  if (!res) throw TransportError("judge request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("judge endpoint returned HTTP " + std::to_string(res->status));
  }
  return res->body;
}

StubJudgeTransport::StubJudgeTransport(std::vector<std::string> responses) : responses_(std::move(responses)) {
  if (responses_.empty()) throw std::invalid_argument("StubJudgeTransport: no canned responses");
}

std::string StubJudgeTransport::post(const std::string& body, std::chrono::milliseconds) {
  requests_.push_back(body);
  const std::string& out = responses_[std::min(next_, responses_.size() - 1)];
  ++next_;
  return out;
}

std::string judge_request(JudgeTransport& transport, const JudgePrompt& prompt, std::chrono::milliseconds timeout,
                          const RetryPolicy& retry) {
  const std::string body = judge_request_body(prompt);
  auto backoff = retry.initial_backoff;
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      return transport.post(body, timeout);
    } catch (const TransportError& e) {
      if (attempt >= retry.max_retries) {
        throw TransportError(std::string(e.what()) + " (after " + std::to_string(attempt + 1) + " attempts)");
      }
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

std::optional<JudgeEndpoint> judge_endpoint_from_env() {
  const char* url = std::getenv("SIMPLIFY_JUDGE_URL");
  if (url == nullptr || *url == '\0') return std::nullopt;
  const char* key = std::getenv("SIMPLIFY_JUDGE_API_KEY");
  return JudgeEndpoint{url, key ? key : ""};
}

}  // namespace simplify
