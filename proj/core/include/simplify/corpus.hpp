#pragma once

// JSONL corpus interchange: one object per line with string fields
// "id", "input", "label" and optionally "output"; other fields are ignored.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "simplify/document.hpp"

namespace simplify {

// Throws DataError naming the 1-based line for malformed JSON, a missing or
// non-string required field, an empty input/label, or a duplicate id.
std::vector<Document> parse_jsonl(std::string_view text);
std::vector<Document> load_jsonl(const std::string& path);

std::string to_jsonl(const std::vector<Document>& documents);
void write_jsonl(const std::string& path, const std::vector<Document>& documents);

// System outputs keyed by id, read from JSONL objects with "id" and "output".
std::map<std::string, std::string> load_outputs(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace simplify
