#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <thread>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"
#include "simplify/corpus.hpp"
#include "simplify/error.hpp"
#include "simplify/judge.hpp"
#include "simplify/run_config.hpp"

namespace simplify {
namespace {

using namespace std::chrono_literals;

const std::string kDataDir = SIMPLIFY_TEST_DATA_DIR;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("simplify_harness_" + name)).string();
}

Document sample_document() {
  return {"cochrane-17",
          "Forty-nine randomised trials involving 3639 participants were included. All trials were conducted "
          "and published in China.",
          "unused", {}};
}

TEST(Jsonl, ParsesValidLines) {
  const auto docs = parse_jsonl(
      "{\"id\":\"a\",\"input\":\"x y\",\"label\":\"x\",\"extra\":1}\n"
      "{\"id\":\"b\",\"input\":\"z\",\"label\":\"z\",\"output\":\"z\"}\n");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].id, "a");
  EXPECT_FALSE(docs[0].output.has_value());
  EXPECT_EQ(docs[1].output, "z");
}

TEST(Jsonl, SkipsBlankLines) {
  EXPECT_EQ(parse_jsonl("\n{\"id\":\"a\",\"input\":\"x\",\"label\":\"x\"}\n\n").size(), 1u);
}

std::string error_of(const std::string& text) {
  try {
    parse_jsonl(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(Jsonl, MissingFieldNamesLine) {
  std::string text;
  for (int i = 1; i <= 6; ++i) text += "{\"id\":\"d" + std::to_string(i) + "\",\"input\":\"x\",\"label\":\"y\"}\n";
  text += "{\"id\":\"d7\",\"input\":\"x\"}\n";
  EXPECT_EQ(error_of(text), "line 7: missing field label");
}

TEST(Jsonl, Errors) {
  EXPECT_NE(error_of("{\"id\":\"a\",\"input\":\"x\",\"label\":\"x\"}\n{nope}\n").find("line 2: malformed JSON"),
            std::string::npos);
  EXPECT_NE(error_of("{\"id\":\"a\",\"input\":\"x\",\"label\":\"x\"}\n{\"id\":\"a\",\"input\":\"y\",\"label\":\"y\"}\n")
                .find("duplicate id"),
            std::string::npos);
  EXPECT_NE(error_of("{\"id\":\"a\",\"input\":\"\",\"label\":\"x\"}").find("empty field input"), std::string::npos);
  EXPECT_NE(error_of("{\"id\":\"a\",\"input\":3,\"label\":\"x\"}").find("not a string"), std::string::npos);
  EXPECT_NE(error_of("[1,2]").find("expected a JSON object"), std::string::npos);
  EXPECT_THROW(load_jsonl("/nonexistent/corpus.jsonl"), DataError);
}

TEST(Jsonl, RoundTripIsLossless) {
  const std::vector<Document> docs{
      {"a", "Unicode \xc3\xa9 and \"quotes\"\tand tabs", "label\nwith newline", {}},
      {"b", "x", "y", std::string("out")},
  };
  const auto path = temp_path("roundtrip.jsonl");
  write_jsonl(path, docs);
  const auto back = load_jsonl(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(back[i].id, docs[i].id);
    EXPECT_EQ(back[i].input, docs[i].input);
    EXPECT_EQ(back[i].label, docs[i].label);
    EXPECT_EQ(back[i].output, docs[i].output);
  }
  EXPECT_EQ(to_jsonl(back), to_jsonl(docs));
}

TEST(Jsonl, IdentityFixture) {
  const auto docs = load_jsonl(kDataDir + "/identity.jsonl");
  ASSERT_EQ(docs.size(), 2u);
  for (const auto& d : docs) EXPECT_EQ(d.output, d.label);
}

TEST(JudgePrompt, GoldenFile) {
  const Document doc = sample_document();
  const JudgePrompt p =
      build_judge_prompt(doc, "Forty-nine trials with 3639 people were included. All of them took place in China.");
  EXPECT_EQ(p.user, read_text_file(kDataDir + "/judge_prompt_golden.txt"));
  EXPECT_EQ(p.system, read_text_file(kDataDir + "/judge_system_golden.txt"));
}

TEST(JudgePrompt, ContainsTemplateLines) {
  const Document doc = sample_document();
  const JudgePrompt p = build_judge_prompt(doc, "A summary.");
  EXPECT_NE(p.user.find("\nDoes the summary contain factual inconsistencies?\n"), std::string::npos);
  EXPECT_NE(p.user.find("Source Text: " + doc.input + "\n"), std::string::npos);
  EXPECT_EQ(p.user.substr(p.user.size() - 5), "Why: ");
  EXPECT_EQ(p.system, "Your task is to rate the summary on one metric.");
  EXPECT_THROW(build_judge_prompt(doc, ""), std::invalid_argument);
}

TEST(JudgePrompt, RequestBody) {
  const JudgePrompt p{"sys", "user \"text\""};
  const auto body = nlohmann::json::parse(judge_request_body(p));
  EXPECT_EQ(body.at("system"), "sys");
  EXPECT_EQ(body.at("prompt"), "user \"text\"");
}

TEST(ParseJudgment, Verdicts) {
  const Judgment yes = parse_judgment("Yes. The summary mentions a trial count the source never gives.");
  EXPECT_TRUE(yes.inconsistent());
  EXPECT_EQ(yes.rationale, "The summary mentions a trial count the source never gives.");
  EXPECT_EQ(parse_judgment("No.").verdict, Verdict::kConsistent);
  EXPECT_FALSE(parse_judgment("No.").inconsistent());
  EXPECT_EQ(parse_judgment("maybe?").verdict, Verdict::kIndeterminate);
  EXPECT_EQ(parse_judgment("maybe?").rationale, "maybe?");
}

TEST(ParseJudgment, CaseWhitespaceAndWhy) {
  const Judgment j = parse_judgment("  YES\nWhy: dosage differs");
  EXPECT_EQ(j.verdict, Verdict::kInconsistent);
  EXPECT_EQ(j.rationale, "dosage differs");
  EXPECT_EQ(parse_judgment("no, it is fine").verdict, Verdict::kConsistent);
  EXPECT_EQ(parse_judgment("Nothing wrong").verdict, Verdict::kIndeterminate);
  EXPECT_EQ(parse_judgment("Yesterday").verdict, Verdict::kIndeterminate);
  EXPECT_EQ(parse_judgment("").verdict, Verdict::kIndeterminate);
  EXPECT_EQ(to_string(Verdict::kIndeterminate), "indeterminate");
}

class FlakyTransport final : public JudgeTransport {
 public:
  explicit FlakyTransport(std::size_t failures) : failures_(failures) {}
  std::string post(const std::string& body, std::chrono::milliseconds) override {
    ++calls;
    last_body = body;
    if (calls <= failures_) throw TransportError("connection reset");
    return "No.";
  }
  std::size_t calls = 0;
  std::string last_body;

 private:
  std::size_t failures_;
};

TEST(JudgeRequest, RetriesThenSucceeds) {
  FlakyTransport t(3);
  const RetryPolicy policy{3, 1ms};
  EXPECT_EQ(judge_request(t, {"s", "p"}, 100ms, policy), "No.");
  EXPECT_EQ(t.calls, 4u);
  EXPECT_EQ(nlohmann::json::parse(t.last_body).at("prompt"), "p");
}

TEST(JudgeRequest, GivesUpAfterRetries) {
  FlakyTransport t(10);
  const RetryPolicy policy{3, 1ms};
  EXPECT_THROW(judge_request(t, {"s", "p"}, 100ms, policy), TransportError);
  EXPECT_EQ(t.calls, 4u);
}

TEST(JudgeRequest, StubRepeatsLastResponse) {
  StubJudgeTransport stub({"Yes. bad", "No."});
  EXPECT_EQ(judge_request(stub, {"s", "p"}, 1ms), "Yes. bad");
  EXPECT_EQ(judge_request(stub, {"s", "p"}, 1ms), "No.");
  EXPECT_EQ(judge_request(stub, {"s", "p"}, 1ms), "No.");
  EXPECT_EQ(stub.requests().size(), 3u);
}

TEST(HttpJudgeTransport, PostsJsonWithBearerToken) {
  httplib::Server server;
  std::string seen_auth;
  std::string seen_body;
  int hits = 0;
  server.Post("/v1/judge", [&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    if (hits == 1) {
      res.status = 503;
      return;
    }
    seen_auth = req.get_header_value("Authorization");
    seen_body = req.body;
    res.set_content("Yes. Why: invented dosage", "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  HttpJudgeTransport transport("http://127.0.0.1:" + std::to_string(port) + "/v1/judge", "secret");
  const JudgePrompt prompt = build_judge_prompt(sample_document(), "Trials were in China.");
  const std::string answer = judge_request(transport, prompt, 2000ms, {3, 1ms});
  server.stop();
  runner.join();

  EXPECT_EQ(hits, 2);
  EXPECT_EQ(seen_auth, "Bearer secret");
  EXPECT_EQ(nlohmann::json::parse(seen_body).at("prompt"), prompt.user);
  const Judgment j = parse_judgment(answer);
  EXPECT_TRUE(j.inconsistent());
  EXPECT_EQ(j.rationale, "invented dosage");
}

TEST(HttpJudgeTransport, UnreachableEndpointFails) {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  HttpJudgeTransport transport("http://127.0.0.1:" + std::to_string(port) + "/x");
  EXPECT_THROW(judge_request(transport, {"s", "p"}, 200ms, {1, 1ms}), TransportError);
  EXPECT_THROW(HttpJudgeTransport("no-scheme"), std::invalid_argument);
}

TEST(RunConfig, Defaults) {
  const RunConfig c;
  EXPECT_EQ(c.loss.lambda_r, 7.5e-4);
  EXPECT_EQ(c.loss.lambda_c, 2.5e-4);
  EXPECT_EQ(c.decoder.beam_width, 4u);
  EXPECT_EQ(c.scorer, ScorerKind::kLexical);
}

TEST(RunConfig, CheckPaths) {
  RunConfig c;
  c.corpus_path = "/nonexistent/c.jsonl";
  EXPECT_THROW(c.check_paths(), DataError);
  c.corpus_path = kDataDir + "/identity.jsonl";
  EXPECT_NO_THROW(c.check_paths());
  c.scorer = ScorerKind::kPrecomputed;
  EXPECT_THROW(c.check_paths(), UsageError);
  c.scores_path = "/nonexistent/s.tsv";
  EXPECT_THROW(c.check_paths(), DataError);
}

TEST(RunConfig, MakeScorerAndExtractor) {
  RunConfig c;
  EXPECT_NE(dynamic_cast<LexicalScorer*>(c.make_scorer().get()), nullptr);
  const auto scores = temp_path("scores.tsv");
  write_text_file(scores, "d1\t0.5\n");
  c.scorer = ScorerKind::kPrecomputed;
  c.scores_path = scores;
  EXPECT_EQ(c.make_scorer()->score({.candidate = "x", .source = "y", .candidate_id = "d1"}), 0.5);
  std::filesystem::remove(scores);
  EXPECT_NE(dynamic_cast<HeuristicEntityExtractor*>(c.make_entity_extractor().get()), nullptr);
}

TEST(ConfigFile, Parse) {
  const auto entries = parse_config_file("# comment\n\nbeam-width = 3\n  rerank-k=7  \n");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].key, "beam-width");
  EXPECT_EQ(entries[0].value, "3");
  EXPECT_EQ(entries[1].key, "rerank-k");
  EXPECT_EQ(entries[1].value, "7");
  EXPECT_EQ(entries[1].line, 4u);
  EXPECT_THROW(parse_config_file("just words\n"), UsageError);
  EXPECT_THROW(parse_config_file(" = 3\n"), UsageError);
}

TEST(JudgeEndpoint, FromEnvironment) {
  ::unsetenv("SIMPLIFY_JUDGE_URL");
  EXPECT_FALSE(judge_endpoint_from_env().has_value());
  ::setenv("SIMPLIFY_JUDGE_URL", "http://localhost:1/j", 1);
  ::setenv("SIMPLIFY_JUDGE_API_KEY", "k", 1);
  const auto e = judge_endpoint_from_env();
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->url, "http://localhost:1/j");
  EXPECT_EQ(e->api_key, "k");
  ::unsetenv("SIMPLIFY_JUDGE_URL");
  ::unsetenv("SIMPLIFY_JUDGE_API_KEY");
}

}  // namespace
}  // namespace simplify
