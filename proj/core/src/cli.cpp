#include "simplify/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "simplify/corpus.hpp"
#include "simplify/decoder.hpp"
#include "simplify/error.hpp"
#include "simplify/judge.hpp"
#include "simplify/language_model.hpp"
#include "simplify/parallel.hpp"
#include "simplify/rerank.hpp"
#include "simplify/run_config.hpp"
#include "simplify/simpeval.hpp"
#include "simplify/ulloss.hpp"

namespace simplify {
namespace {

using nlohmann::json;

// Four decimals with trailing zeros removed: 0.5, 0.2975, 12.
std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_text_file(path, content);
  }
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> expanded = args;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (!config_path) return expanded;
  if (!std::filesystem::exists(*config_path)) throw DataError("config file not found: " + *config_path);
  for (const auto& entry : parse_config_file(read_text_file(*config_path))) {
    if (entry.key == "config") throw UsageError("config files cannot include other config files");
    expanded.push_back("--" + entry.key + "=" + entry.value);
  }
  return expanded;
}

struct Options {
  RunConfig run;
  std::string config_path;
  std::string output_path;
  std::string scorer_name = "lexical";
  bool no_heuristic = false;
  std::size_t limit = 50;
  // score
  std::optional<double> fk;
  std::optional<double> fb;
  std::optional<std::string> candidate;
  std::optional<std::string> source;
  // loss
  std::string distributions_path;
  std::string input_text;
  std::string label_text;
  std::optional<double> nll;
  std::string weights_out;
  std::string hallucinations_out;
  // eval
  std::string format = "table";
  std::string report_path;
  // judge
  std::string endpoint;
  bool offline = false;
  std::string stub_response = "No.";
  long timeout_ms = 30000;
};

void add_scorer_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--scorer", o.scorer_name, "Consistency scorer")
      ->check(CLI::IsMember({"lexical", "precomputed"}));
  cmd->add_option("--scores", o.run.scores_path, "Precomputed id<TAB>score file");
}

void add_entity_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--entities", o.run.entities_path, "External entity list (entity[<TAB>label] per line)");
}

void add_decoder_options(CLI::App* cmd, Options& o) {
  auto& d = o.run.decoder;
  cmd->add_option("--beam-width", d.beam_width, "Beams kept per step")->check(CLI::PositiveNumber);
  cmd->add_option("--rerank-k", d.rerank_interval, "Rerank every k steps")->check(CLI::PositiveNumber);
  cmd->add_option("--max-length", d.max_length, "Maximum generated tokens")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-hallucination-heuristic", o.no_heuristic, "Do not zero beams with unsupported entities");
  cmd->add_option("--length-penalty", d.length_penalty, "Length normalization exponent")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--candidate-multiplier", d.candidate_multiplier,
                  "Rerank pool size as a multiple of the beam width (0 = all)");
}

void finalize(Options& o) {
  o.run.scorer = o.scorer_name == "precomputed" ? ScorerKind::kPrecomputed : ScorerKind::kLexical;
  o.run.entity_source = o.run.entities_path.empty() ? EntitySource::kHeuristic : EntitySource::kExternal;
  o.run.decoder.heuristic_on = !o.no_heuristic;
  o.run.check_paths();
}

// Corpus documents with outputs taken from --outputs when given.
std::vector<Document> documents_with_outputs(const Options& o) {
  auto docs = load_jsonl(o.run.corpus_path);
  if (!o.run.outputs_path.empty()) {
    const auto outputs = load_outputs(o.run.outputs_path);
    for (auto& doc : docs) {
      const auto it = outputs.find(doc.id);
      if (it == outputs.end()) throw DataError("no output for document " + doc.id);
      doc.output = it->second;
    }
  }
  for (const auto& doc : docs) {
    if (!doc.output) throw DataError("document " + doc.id + " has no output");
  }
  return docs;
}

int run_decode(Options& o, std::ostream& out, std::ostream& err) {
  finalize(o);
  auto docs = load_jsonl(o.run.corpus_path);
  const auto training_docs = o.run.train_path.empty() ? docs : load_jsonl(o.run.train_path);
  std::vector<NeighborNGramLM::Pair> pairs;
  for (const auto& d : training_docs) pairs.push_back({d.input, d.label});
  const NeighborNGramLM lm(std::move(pairs), o.run.lm_order, o.run.lm_neighbors);
  const auto scorer = o.run.make_scorer();
  const auto entities = o.run.make_entity_extractor();
  DecoderConfig config = o.run.decoder;
  config.entities = entities.get();
  config.validate();

  std::vector<DecodeResult> results(docs.size());
  parallel_for(docs.size(), o.run.jobs,
               [&](std::size_t i) { results[i] = beam_search(lm, docs[i].input, config, *scorer); });
  for (std::size_t i = 0; i < docs.size(); ++i) {
    docs[i].output = results[i].text;
    if (results[i].hallucination_warning) {
      err << "warning: " << docs[i].id << ": every candidate had unsupported entities\n";
    }
  }
  emit(o.output_path, to_jsonl(docs), out);
  return kExitOk;
}

int run_eval(Options& o, std::ostream& out, std::ostream&) {
  finalize(o);
  const auto docs = documents_with_outputs(o);
  std::vector<std::string> outputs;
  for (const auto& d : docs) outputs.push_back(*d.output);
  const auto scorer = o.run.make_scorer();
  const EvalReport report = evaluate_corpus(docs, outputs, *scorer, o.run.jobs);
  if (!o.report_path.empty()) write_text_file(o.report_path, report.to_tsv());
  out << (o.format == "tsv" ? report.to_tsv() : report.to_table());
  return kExitOk;
}

int run_score(Options& o, std::ostream& out, std::ostream&) {
  finalize(o);
  const bool direct = o.fk || o.fb;
  const bool text = o.candidate || o.source;
  if (direct == text) throw UsageError("score needs either --fk and --fb, or --candidate and --source");
  BeamScore s;
  if (direct) {
    if (!o.fk || !o.fb) throw UsageError("score needs both --fk and --fb");
    s.f_f = GradeScore{*o.fk};
    s.f_b = *o.fb;
    if (!(s.f_b >= 0.0 && s.f_b <= 1.0)) throw DataError("--fb must lie in [0,1]");
    s.r_f = readability_subscore(s.f_f);
    s.r_b = consistency_subscore(s.f_b);
    s.r = composite_score(s.r_f, s.r_b);
  } else {
    if (!o.candidate || !o.source) throw UsageError("score needs both --candidate and --source");
    const TokenList tokens = tokenize(*o.candidate);
    if (tokens.word_count() == 0) throw DataError("candidate has no words");
    std::vector<std::string> surfaces;
    for (const auto& t : tokens.tokens) surfaces.push_back(t.surface);
    const auto scorer = o.run.make_scorer();
    const auto entities = o.run.make_entity_extractor();
    const CandidateScorer scoring(*o.source, *scorer, o.run.decoder.heuristic_on, entities.get());
    s = scoring.score(surfaces);
  }
  out << "f_F=" << short_number(s.f_f.value) << '\n'
      << "f_B=" << short_number(s.f_b) << '\n'
      << "r_F=" << short_number(s.r_f) << '\n'
      << "r_B=" << short_number(s.r_b) << '\n'
      << "r=" << short_number(s.r) << '\n';
  if (s.hallucination_zeroed) {
    out << "hallucination_zeroed=true\n";
    for (const auto& e : s.unsupported) out << "unsupported=" << e << '\n';
  }
  return kExitOk;
}

int run_loss(Options& o, std::ostream& out, std::ostream&) {
  finalize(o);
  if (o.distributions_path.empty()) throw UsageError("loss needs --distributions");
  if (!std::filesystem::exists(o.distributions_path)) {
    throw DataError("distributions file not found: " + o.distributions_path);
  }
  json doc;
  try {
    doc = json::parse(read_text_file(o.distributions_path));
  } catch (const json::exception& e) {
    throw DataError(std::string("distributions file: ") + e.what());
  }
  if (!doc.contains("vocabulary") || !doc["vocabulary"].is_array()) {
    throw DataError("distributions file: missing array field vocabulary");
  }
  const bool has_probs = doc.contains("probs");
  if (has_probs == doc.contains("logits")) {
    throw DataError("distributions file: provide exactly one of probs or logits");
  }

  Vocabulary vocab;
  std::vector<TokenId> columns;
  try {
    for (const auto& w : doc["vocabulary"]) {
      const auto word = w.get<std::string>();
      if (vocab.contains(word) && word != Vocabulary::kBosMarker && word != Vocabulary::kEosMarker) {
        throw DataError("distributions file: duplicate vocabulary word " + word);
      }
      columns.push_back(vocab.add(word));
    }
    std::vector<StepDistribution> steps;
    for (const auto& row : doc[has_probs ? "probs" : "logits"]) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != columns.size()) throw DataError("distributions file: row width differs from vocabulary");
      std::vector<double> full(vocab.size(), has_probs ? 0.0 : -1e300);
      for (std::size_t c = 0; c < columns.size(); ++c) full[columns[c]] = values[c];
      if (has_probs) {
        steps.emplace_back(std::move(full));
      } else {
        steps.push_back(StepDistribution::softmax(full));
      }
    }

    double nll = 0.0;
    if (o.nll) {
      nll = *o.nll;
    } else if (doc.contains("targets")) {
      const auto targets = doc["targets"].get<std::vector<std::string>>();
      if (targets.size() != steps.size()) throw DataError("distributions file: one target per step required");
      for (std::size_t t = 0; t < steps.size(); ++t) nll -= std::log(std::max(steps[t][vocab.id(targets[t])], 1e-300));
    } else {
      throw UsageError("loss needs --nll or a targets field in the distributions file");
    }

    std::vector<std::string> greedy;
    for (const auto& s : steps) {
      if (s.argmax() == Vocabulary::kEos) break;
      greedy.push_back(vocab.word(s.argmax()));
    }
    const FkWeightTable weights = FkWeightTable::for_vocabulary(vocab.words());
    const HallucinationSet e = hallucinated_set(greedy, o.input_text, o.label_text, vocab);
    const LossBreakdown b = loss_breakdown(nll, steps, vocab, weights, e, o.run.loss);
    if (!o.weights_out.empty()) write_text_file(o.weights_out, weights.serialize());
    if (!o.hallucinations_out.empty()) write_text_file(o.hallucinations_out, e.serialize(vocab));

    out.precision(10);
    out << "UL_R=" << b.ul_r << '\n' << "UL_C=" << b.ul_c << '\n' << "NLL=" << b.nll << '\n' << "total=" << b.total << '\n';
    out << "hallucinated=";
    bool first = true;
    for (TokenId id : e.indices) {
      out << (first ? "" : " ") << vocab.word(id);
      first = false;
    }
    out << '\n';
  } catch (const json::exception& ex) {
    throw DataError(std::string("distributions file: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw DataError(std::string("distributions file: ") + ex.what());
  } catch (const std::out_of_range& ex) {
    throw DataError(std::string("distributions file: ") + ex.what());
  }
  return kExitOk;
}

std::vector<Document> judged_documents(const Options& o) {
  auto docs = documents_with_outputs(o);
  if (docs.size() > o.limit) docs.resize(o.limit);
  return docs;
}

int run_judge_prompt(Options& o, std::ostream& out, std::ostream&) {
  finalize(o);
  std::string lines;
  for (const auto& doc : judged_documents(o)) {
    if (doc.output->empty()) throw DataError("document " + doc.id + " has an empty output");
    const JudgePrompt p = build_judge_prompt(doc, *doc.output);
    lines += json{{"id", doc.id}, {"system", p.system}, {"prompt", p.user}}.dump() + "\n";
  }
  emit(o.output_path, lines, out);
  return kExitOk;
}

int run_judge(Options& o, std::ostream& out, std::ostream& err) {
  finalize(o);
  std::unique_ptr<JudgeTransport> transport;
  if (o.offline) {
    transport = std::make_unique<StubJudgeTransport>(std::vector<std::string>{o.stub_response});
  } else {
    std::string url = o.endpoint;
    std::string key;
    if (const auto env = judge_endpoint_from_env()) {
      if (url.empty()) url = env->url;
      key = env->api_key;
    }
    if (url.empty()) throw UsageError("judge needs --endpoint, SIMPLIFY_JUDGE_URL or --offline");
    transport = std::make_unique<HttpJudgeTransport>(url, key);
  }
  std::size_t inconsistent = 0;
  std::size_t indeterminate = 0;
  const auto docs = judged_documents(o);
  for (const auto& doc : docs) {
    const JudgePrompt p = build_judge_prompt(doc, *doc.output);
    const Judgment j = parse_judgment(judge_request(*transport, p, std::chrono::milliseconds(o.timeout_ms)));
    if (j.inconsistent()) ++inconsistent;
    if (j.verdict == Verdict::kIndeterminate) {
      ++indeterminate;
      err << "warning: " << doc.id << ": indeterminate judgment\n";
    }
    out << doc.id << '\t' << to_string(j.verdict) << '\t' << j.rationale << '\n';
  }
  out << "inconsistent=" << inconsistent << '/' << docs.size() << '\n';
  out << "indeterminate=" << indeterminate << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Readability-aware simplification: decoding, scoring, loss and evaluation", "simplify"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "File of key = value lines overriding flags");
    cmd->add_option("--jobs", o.run.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* decode = app.add_subcommand("decode", "Decode a JSONL corpus into outputs");
  add_common(decode);
  decode->add_option("--corpus", o.run.corpus_path, "Input JSONL corpus")->required();
  decode->add_option("--output", o.output_path, "Output JSONL path (- for stdout)")->required();
  decode->add_option("--train", o.run.train_path, "Training JSONL for the n-gram model (default: corpus)");
  decode->add_option("--lm-order", o.run.lm_order, "n-gram order")->check(CLI::PositiveNumber);
  decode->add_option("--lm-neighbors", o.run.lm_neighbors, "Training pairs per source")->check(CLI::PositiveNumber);
  add_decoder_options(decode, o);
  add_scorer_options(decode, o);
  add_entity_options(decode, o);

  auto* eval = app.add_subcommand("eval", "Evaluate outputs against a corpus");
  add_common(eval);
  eval->add_option("--corpus", o.run.corpus_path, "JSONL corpus")->required();
  eval->add_option("--outputs", o.run.outputs_path, "JSONL with id/output (default: corpus output fields)");
  eval->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"table", "tsv"}));
  eval->add_option("--report", o.report_path, "Also write the TSV report here");
  add_scorer_options(eval, o);

  auto* score = app.add_subcommand("score", "Readability/consistency breakdown of one candidate");
  add_common(score);
  score->add_option("--fk", o.fk, "Precomputed Flesch-Kincaid grade");
  score->add_option("--fb", o.fb, "Precomputed consistency score in [0,1]");
  score->add_option("--candidate", o.candidate, "Candidate text");
  score->add_option("--source", o.source, "Source text");
  score->add_flag("--no-hallucination-heuristic", o.no_heuristic, "Do not zero unsupported candidates");
  add_scorer_options(score, o);
  add_entity_options(score, o);

  auto* loss = app.add_subcommand("loss", "Unlikelihood terms and total loss for step distributions");
  add_common(loss);
  loss->add_option("--distributions", o.distributions_path, "JSON file with vocabulary and probs or logits");
  loss->add_option("--input", o.input_text, "Input (source) text");
  loss->add_option("--label", o.label_text, "Label (reference) text");
  loss->add_option("--nll", o.nll, "Negative log-likelihood (overrides targets)");
  loss->add_option("--lambda-r", o.run.loss.lambda_r, "Readability UL weight")->check(CLI::NonNegativeNumber);
  loss->add_option("--lambda-c", o.run.loss.lambda_c, "Consistency UL weight")->check(CLI::NonNegativeNumber);
  loss->add_option("--epsilon", o.run.loss.epsilon, "Clamp for 1 - p")->check(CLI::PositiveNumber);
  loss->add_option("--write-weights", o.weights_out, "Write word<TAB>weight table");
  loss->add_option("--write-hallucinations", o.hallucinations_out, "Write the hallucinated word set");

  auto* judge_prompt = app.add_subcommand("judge-prompt", "Emit factual-consistency judge prompts as JSONL");
  add_common(judge_prompt);
  judge_prompt->add_option("--corpus", o.run.corpus_path, "JSONL corpus")->required();
  judge_prompt->add_option("--outputs", o.run.outputs_path, "JSONL with id/output");
  judge_prompt->add_option("--limit", o.limit, "Judge the first N documents");
  judge_prompt->add_option("--output", o.output_path, "Output path (- for stdout)");

  auto* judge = app.add_subcommand("judge", "Send judge prompts to an endpoint and summarize verdicts");
  add_common(judge);
  judge->add_option("--corpus", o.run.corpus_path, "JSONL corpus")->required();
  judge->add_option("--outputs", o.run.outputs_path, "JSONL with id/output");
  judge->add_option("--limit", o.limit, "Judge the first N documents");
  judge->add_option("--endpoint", o.endpoint, "Judge URL (default: $SIMPLIFY_JUDGE_URL)");
  judge->add_option("--timeout-ms", o.timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
  judge->add_flag("--offline", o.offline, "Use a canned response instead of the network");
  judge->add_option("--stub-response", o.stub_response, "Canned response for --offline");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::vector<char*> argv;
    std::string program = "simplify";
    argv.push_back(program.data());
    for (auto& a : args) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      app.exit(e, out, err);
      return kExitUsage;
    }

    if (app.got_subcommand(decode)) return run_decode(o, out, err);
    if (app.got_subcommand(eval)) return run_eval(o, out, err);
    if (app.got_subcommand(score)) return run_score(o, out, err);
    if (app.got_subcommand(loss)) return run_loss(o, out, err);
    if (app.got_subcommand(judge_prompt)) return run_judge_prompt(o, out, err);
    if (app.got_subcommand(judge)) return run_judge(o, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace simplify
