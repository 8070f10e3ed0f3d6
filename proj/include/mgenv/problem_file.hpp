#ifndef MGENV_PROBLEM_FILE_HPP
#define MGENV_PROBLEM_FILE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mgenv/graph.hpp"

namespace mgenv {

enum class ParseErrorKind {
  SyntaxError,
  UnknownReference,
  DuplicatePoint,
  DuplicateName,
  NonpositiveLength,
  InvalidGraph,
  Io,
};

const char* to_string(ParseErrorKind kind);

/// Parse failure with a 1-based line number (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, std::string field,
             const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
  std::string field_;
};

struct Problem {
  MetricGraph graph;
  std::optional<Datum> datum;  // absent when the file has no DATUM section
};

/// Line-oriented problem text:
///
///   # comment
///   GRAPH
///   vertices v1 v2 v3
///   edge e1 v1 v2 1.0
///   DATUM
///   v1 0.5
///   {e1, 0.25} 2
///
/// `vertices` (or `vertex`) may repeat.  Points are vertex names, `{edge, t}`
/// or `edge@t`.
Problem parse_problem(std::string_view text);

/// Reads a file ("-" for stdin) and parses it.
Problem load_problem(const std::string& path);

/// Parses one point token against `g`.  Throws ParseError.
GraphPoint parse_point(const MetricGraph& g, std::string_view token,
                       std::size_t line = 0);

/// Renders a problem back to the text format.
std::string format_problem(const Problem& problem);

}  // namespace mgenv

#endif  // MGENV_PROBLEM_FILE_HPP
