#include "simplify/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "simplify/error.hpp"
#include "simplify/numeric_text.hpp"

namespace simplify {
namespace {

using nlohmann::json;

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

json parse_line(std::string_view line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(line_prefix(line_no) + "malformed JSON (" + e.what() + ")");
  }
  if (!obj.is_object()) throw DataError(line_prefix(line_no) + "expected a JSON object");
  return obj;
}

std::string required_string(const json& obj, const char* field, std::size_t line_no) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw DataError(line_prefix(line_no) + "missing field " + field);
  if (!it->is_string()) throw DataError(line_prefix(line_no) + "field " + field + " is not a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<Document> parse_jsonl(std::string_view text) {
  std::vector<Document> documents;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const json obj = parse_line(line, line_no);
    Document doc;
    doc.id = required_string(obj, "id", line_no);
    doc.input = required_string(obj, "input", line_no);
    doc.label = required_string(obj, "label", line_no);
    if (const auto it = obj.find("output"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw DataError(line_prefix(line_no) + "field output is not a string");
      doc.output = it->get<std::string>();
    }
    if (doc.input.empty()) throw DataError(line_prefix(line_no) + "empty field input");
    if (doc.label.empty()) throw DataError(line_prefix(line_no) + "empty field label");
    if (!ids.insert(doc.id).second) throw DataError(line_prefix(line_no) + "duplicate id " + doc.id);
    documents.push_back(std::move(doc));
  }
  return documents;
}

std::vector<Document> load_jsonl(const std::string& path) { return parse_jsonl(read_text_file(path)); }

std::string to_jsonl(const std::vector<Document>& documents) {
  std::string out;
  for (const auto& doc : documents) {
    json obj = {{"id", doc.id}, {"input", doc.input}, {"label", doc.label}};
    if (doc.output) obj["output"] = *doc.output;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<Document>& documents) {
  write_text_file(path, to_jsonl(documents));
}

std::map<std::string, std::string> load_outputs(const std::string& path) {
  std::map<std::string, std::string> outputs;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(read_text_file(path))) {
    ++line_no;
    if (trim(line).empty()) continue;
    const json obj = parse_line(line, line_no);
    auto id = required_string(obj, "id", line_no);
    auto output = required_string(obj, "output", line_no);
    if (!outputs.emplace(id, std::move(output)).second) throw DataError(line_prefix(line_no) + "duplicate id " + id);
  }
  return outputs;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace simplify
