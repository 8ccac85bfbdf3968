/// @file dsl.h
/// The `.resha` model file format.
///
/// A line-oriented block format. Blocks (`division`, `component`,
/// `control_action`, `info_flow`) are closed by `end`. `#` starts a comment.
/// See docs/grammar.md for the EBNF.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "resha/model.h"

namespace resha {

/// Syntax or structural error in a model document.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceSpan span)
      : std::runtime_error(span.str() + ": " + msg), span_(std::move(span)) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Parses one model document. Declaration order is preserved.
/// @throws ParseError on syntax errors, duplicate ids, unknown keys or
///         unknown enumeration values.
SystemModel parse_model(std::string_view text, std::string_view file_name = "<input>");

/// Reads and parses a model file.
/// @throws ParseError, or std::runtime_error if the file cannot be read.
SystemModel load_model(const std::string& path);

/// Canonical, deterministic rendering; parse_model(serialize_model(m)) == m.
std::string serialize_model(const SystemModel& model);

}  // namespace resha
