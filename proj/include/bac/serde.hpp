#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "bac/core.hpp"

namespace bac {

/// Raised by parse on malformed text. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& detail)
      : Error(ErrorKind::SyntaxError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised by parse when the text is well formed but breaks a law.
class LawError : public Error {
 public:
  explicit LawError(ValidationReport report)
      : Error(ErrorKind::LawViolation, report.to_string()), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Canonical text form: `[{0->1,1->2} [...],...]`, edges in canonical order,
/// no whitespace except the single space between a dictionary and its target.
std::string print(const Node& node);

/// Parses the text form (whitespace allowed anywhere between tokens) and
/// validates the result.
Node parse(std::string_view text);
/// Parses without checking the laws.
Node parse_unchecked(std::string_view text);

/// Graphviz rendering: one vertex per structurally distinct node, one arrow
/// per edge labelled with its dictionary.
std::string to_dot(const Node& node);

}  // namespace bac
