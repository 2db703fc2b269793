#pragma once

#include <optional>
#include <string>

namespace simplify {

// One corpus record.
struct Document {
  std::string id;
  std::string input;  // source text
  std::string label;  // reference simplification
  std::optional<std::string> output;
};

}  // namespace simplify
