#include "mgenv/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace mgenv {

const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UnknownReference: return "UnknownReference";
    case ParseErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ParseErrorKind::DuplicateName: return "DuplicateName";
    case ParseErrorKind::NonpositiveLength: return "NonpositiveLength";
    case ParseErrorKind::InvalidGraph: return "InvalidGraph";
    case ParseErrorKind::Io: return "Io";
  }
  return "ParseError";
}

namespace {

std::string compose(ParseErrorKind kind, std::size_t line, const std::string& field,
                    const std::string& message) {
  std::ostringstream s;
  s << to_string(kind);
  if (line > 0) s << " at line " << line;
  if (!field.empty()) s << " (" << field << ")";
  s << ": " << message;
  return s.str();
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<double> to_real(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    return std::nullopt;
  }
  return value;
}

double require_real(std::string_view token, std::size_t line, const std::string& field) {
  auto v = to_real(token);
  if (!v) {
    throw ParseError(ParseErrorKind::SyntaxError, line, field,
                     "'" + std::string(token) + "' is not a number");
  }
  return *v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

GraphPoint edge_point(const MetricGraph& g, std::string_view edge_name,
                      std::string_view t_text, std::size_t line) {
  auto e = g.find_edge(std::string(trim(edge_name)));
  if (!e) {
    throw ParseError(ParseErrorKind::UnknownReference, line, "point",
                     "unknown edge '" + std::string(trim(edge_name)) + "'");
  }
  const double t = require_real(t_text, line, "point");
  try {
    return point_on_edge(g, *e, t);
  } catch (const GraphError& err) {
    throw ParseError(ParseErrorKind::SyntaxError, line, "point", err.what());
  }
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::string field,
                       const std::string& message)
    : std::runtime_error(compose(kind, line, field, message)),
      kind_(kind),
      line_(line),
      field_(std::move(field)) {}

GraphPoint parse_point(const MetricGraph& g, std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '{') {
    if (token.back() != '}') {
      throw ParseError(ParseErrorKind::SyntaxError, line, "point",
                       "unterminated '{' in point");
    }
    std::string_view inner = token.substr(1, token.size() - 2);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(ParseErrorKind::SyntaxError, line, "point",
                       "expected {edge, t}");
    }
    return edge_point(g, inner.substr(0, comma), inner.substr(comma + 1), line);
  }
  if (auto at = token.find('@'); at != std::string_view::npos) {
    return edge_point(g, token.substr(0, at), token.substr(at + 1), line);
  }
  auto v = g.find_vertex(std::string(token));
  if (!v) {
    throw ParseError(ParseErrorKind::UnknownReference, line, "point",
                     "unknown vertex '" + std::string(token) + "'");
  }
  return VertexPoint{*v};
}

Problem parse_problem(std::string_view text) {
  enum class Section { None, Graph, Datum };
  Section section = Section::None;
  bool saw_datum = false;

  std::vector<std::string> vertex_names;
  std::unordered_map<std::string, VertexId> vertex_ids;
  std::vector<EdgeSpec> edges;
  std::vector<std::size_t> edge_lines;
  std::unordered_map<std::string, std::size_t> edge_ids;
  std::vector<std::pair<std::string, std::size_t>> datum_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "GRAPH") {
      if (section != Section::None) {
        throw ParseError(ParseErrorKind::SyntaxError, line_no, "section",
                         "GRAPH must be the first section");
      }
      section = Section::Graph;
      continue;
    }
    if (line == "DATUM") {
      if (section != Section::Graph) {
        throw ParseError(ParseErrorKind::SyntaxError, line_no, "section",
                         "DATUM must follow GRAPH");
      }
      section = Section::Datum;
      saw_datum = true;
      continue;
    }

    if (section == Section::None) {
      throw ParseError(ParseErrorKind::SyntaxError, line_no, "section",
                       "expected GRAPH section header");
    }
    if (section == Section::Datum) {
      datum_lines.emplace_back(std::string(line), line_no);
      continue;
    }

    auto tokens = split_ws(line);
    if (tokens[0] == "vertices" || tokens[0] == "vertex") {
      if (tokens.size() < 2) {
        throw ParseError(ParseErrorKind::SyntaxError, line_no, "vertices",
                         "expected at least one vertex name");
      }
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string name(tokens[i]);
        if (name.find_first_of("{}@,") != std::string::npos) {
          throw ParseError(ParseErrorKind::SyntaxError, line_no, "vertices",
                           "vertex name '" + name + "' contains a reserved character");
        }
        if (!vertex_ids.emplace(name, vertex_names.size()).second) {
          throw ParseError(ParseErrorKind::DuplicateName, line_no, "vertices",
                           "vertex '" + name + "' declared twice");
        }
        vertex_names.push_back(std::move(name));
      }
    } else if (tokens[0] == "edge") {
      if (tokens.size() != 5) {
        throw ParseError(ParseErrorKind::SyntaxError, line_no, "edge",
                         "expected: edge <id> <tail> <head> <length>");
      }
      std::string name(tokens[1]);
      if (name.find_first_of("{}@,") != std::string::npos) {
        throw ParseError(ParseErrorKind::SyntaxError, line_no, "edge.id",
                         "edge name '" + name + "' contains a reserved character");
      }
      if (edge_ids.count(name)) {
        throw ParseError(ParseErrorKind::DuplicateName, line_no, "edge.id",
                         "edge '" + name + "' declared twice");
      }
      auto tail = vertex_ids.find(std::string(tokens[2]));
      if (tail == vertex_ids.end()) {
        throw ParseError(ParseErrorKind::UnknownReference, line_no, "edge.tail",
                         "unknown vertex '" + std::string(tokens[2]) + "'");
      }
      auto head = vertex_ids.find(std::string(tokens[3]));
      if (head == vertex_ids.end()) {
        throw ParseError(ParseErrorKind::UnknownReference, line_no, "edge.head",
                         "unknown vertex '" + std::string(tokens[3]) + "'");
      }
      const double length = require_real(tokens[4], line_no, "edge.length");
      if (!(length > 0.0) || !std::isfinite(length)) {
        throw ParseError(ParseErrorKind::NonpositiveLength, line_no, "edge.length",
                         "edge '" + name + "' has length " + std::string(tokens[4]));
      }
      edge_ids.emplace(name, edges.size());
      edges.push_back(EdgeSpec{std::move(name), tail->second, head->second, length});
      edge_lines.push_back(line_no);
    } else {
      throw ParseError(ParseErrorKind::SyntaxError, line_no, "graph",
                       "unknown keyword '" + std::string(tokens[0]) + "'");
    }
  }

  if (section == Section::None) {
    throw ParseError(ParseErrorKind::SyntaxError, 0, "section", "missing GRAPH section");
  }

  Problem problem;
  try {
    problem.graph = MetricGraph::build(std::move(vertex_names), std::move(edges));
  } catch (const GraphError& err) {
    throw ParseError(ParseErrorKind::InvalidGraph, 0, to_string(err.kind()), err.what());
  }

  if (saw_datum) {
    std::vector<DatumEntry> entries;
    for (const auto& [text_line, no] : datum_lines) {
      std::string_view rest(text_line);
      std::string_view point_text;
      if (rest.front() == '{') {
        auto close = rest.find('}');
        if (close == std::string_view::npos) {
          throw ParseError(ParseErrorKind::SyntaxError, no, "point",
                           "unterminated '{' in point");
        }
        point_text = rest.substr(0, close + 1);
        rest = rest.substr(close + 1);
      } else {
        auto tokens = split_ws(rest);
        point_text = tokens[0];
        rest = rest.substr(tokens[0].size());
      }
      auto value_tokens = split_ws(rest);
      if (value_tokens.size() != 1) {
        throw ParseError(ParseErrorKind::SyntaxError, no, "value",
                         "expected: <point> <value>");
      }
      GraphPoint p = parse_point(problem.graph, point_text, no);
      const double value = require_real(value_tokens[0], no, "value");
      if (!std::isfinite(value)) {
        throw ParseError(ParseErrorKind::SyntaxError, no, "value", "value must be finite");
      }
      for (const auto& prior : entries) {
        if (prior.point == p) {
          throw ParseError(ParseErrorKind::DuplicatePoint, no, "point",
                           "point " + describe(problem.graph, p) + " given twice");
        }
      }
      entries.push_back(DatumEntry{p, value});
    }
    if (entries.empty()) {
      throw ParseError(ParseErrorKind::SyntaxError, 0, "datum", "DATUM section is empty");
    }
    problem.datum = Datum::build(problem.graph, std::move(entries));
  }
  return problem;
}

Problem load_problem(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ParseError(ParseErrorKind::Io, 0, "input", "cannot open '" + path + "'");
    }
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_problem(text);
}

std::string format_problem(const Problem& problem) {
  const MetricGraph& g = problem.graph;
  std::ostringstream out;
  out << "GRAPH\nvertices";
  for (const auto& name : g.vertex_names()) out << ' ' << name;
  out << '\n';
  for (const Edge& e : g.edges()) {
    out << "edge " << g.edge_name(e.id) << ' ' << g.vertex_name(e.tail) << ' '
        << g.vertex_name(e.head) << ' ' << format_real(e.length) << '\n';
  }
  if (problem.datum) {
    out << "DATUM\n";
    for (const DatumEntry& entry : problem.datum->entries()) {
      if (const auto* ep = std::get_if<EdgePoint>(&entry.point)) {
        out << '{' << g.edge_name(ep->edge) << ", " << format_real(ep->t) << '}';
      } else {
        out << describe(g, entry.point);
      }
      out << ' ' << format_real(entry.value) << '\n';
    }
  }
  return out.str();
}

}  // namespace mgenv
