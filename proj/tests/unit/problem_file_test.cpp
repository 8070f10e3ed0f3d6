#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "mgenv/problem_file.hpp"

namespace mgenv {
namespace {

using testing::data_path;

struct ErrorInfo {
  ParseErrorKind kind;
  std::size_t line;
  std::string field;
};

ErrorInfo parse_error(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return {e.kind(), e.line(), e.field()};
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return {ParseErrorKind::Io, 0, ""};
}

TEST(ParseProblemTest, StarExample) {
  const Problem p = load_problem(data_path("example3.txt"));
  EXPECT_EQ(p.graph.num_vertices(), 4u);
  EXPECT_EQ(p.graph.num_edges(), 3u);
  ASSERT_TRUE(p.datum.has_value());
  EXPECT_EQ(p.datum->size(), 3u);
  EXPECT_EQ(p.datum->value_at(VertexPoint{*p.graph.find_vertex("v4")}), 2.0);
}

TEST(ParseProblemTest, PointSyntaxes) {
  const Problem p = load_problem(data_path("interior_datum.txt"));
  const MetricGraph& g = p.graph;
  EXPECT_EQ(p.datum->value_at(EdgePoint{*g.find_edge("p"), 0.5}), -1.0);
  EXPECT_EQ(p.datum->value_at(EdgePoint{*g.find_edge("q"), 0.75}), 0.0);
  EXPECT_EQ(parse_point(g, "{q, 1.5}"), GraphPoint(VertexPoint{*g.find_vertex("c")}));
  EXPECT_EQ(parse_point(g, " p@0 "), GraphPoint(VertexPoint{*g.find_vertex("a")}));
  EXPECT_THROW(parse_point(g, "{q, 9}"), ParseError);
  EXPECT_THROW(parse_point(g, "{q 1}"), ParseError);
  EXPECT_THROW(parse_point(g, "zz@0.5"), ParseError);
}

TEST(ParseProblemTest, CommentsBlankLinesAndRepeatedVertexLines) {
  const Problem p = parse_problem(
      "# header\n\nGRAPH   \nvertex a\nvertices b c  # trailing\nedge x a b 1\nedge y b c +2.5e0\n");
  EXPECT_EQ(p.graph.num_vertices(), 3u);
  EXPECT_DOUBLE_EQ(p.graph.total_length(), 3.5);
  EXPECT_FALSE(p.datum.has_value());
}

TEST(ParseProblemTest, NegativeLengthAtItsLine) {
  const ErrorInfo e = parse_error("GRAPH\nvertices v1 v2\nedge e1 v1 v2 -1\n");
  EXPECT_EQ(e.kind, ParseErrorKind::NonpositiveLength);
  EXPECT_EQ(e.line, 3u);
  EXPECT_EQ(e.field, "edge.length");
  EXPECT_EQ(parse_error("GRAPH\nvertices v1 v2\nedge e1 v1 v2 inf\n").kind,
            ParseErrorKind::NonpositiveLength);
}

TEST(ParseProblemTest, UndeclaredDatumVertex) {
  const ErrorInfo e = parse_error("GRAPH\nvertices v1 v2\nedge e1 v1 v2 1\nDATUM\nv1 0\nv9 1\n");
  EXPECT_EQ(e.kind, ParseErrorKind::UnknownReference);
  EXPECT_EQ(e.line, 6u);
}

TEST(ParseProblemTest, StructuredErrors) {
  EXPECT_EQ(parse_error("").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("vertices a\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b x\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nnode c\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a{ b\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a z 1\n").kind, ParseErrorKind::UnknownReference);
  EXPECT_EQ(parse_error("GRAPH\nvertices a a\n").kind, ParseErrorKind::DuplicateName);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b 1\nedge e b a 1\n").kind,
            ParseErrorKind::DuplicateName);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b c\nedge e a b 1\n").kind, ParseErrorKind::InvalidGraph);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a a 1\n").kind, ParseErrorKind::InvalidGraph);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b 1\nDATUM\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b 1\nDATUM\na\n").kind, ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b 1\nDATUM\na 1 2\n").kind,
            ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("GRAPH\nvertices a b\nedge e a b 1\nDATUM\na nan\n").kind,
            ParseErrorKind::SyntaxError);
  EXPECT_EQ(parse_error("DATUM\na 1\n").kind, ParseErrorKind::SyntaxError);

  const ErrorInfo dup = parse_error("GRAPH\nvertices a b\nedge e a b 1\nDATUM\na 1\n{e, 0} 2\n");
  EXPECT_EQ(dup.kind, ParseErrorKind::DuplicatePoint);
  EXPECT_EQ(dup.line, 6u);
}

TEST(ParseProblemTest, MissingFile) {
  try {
    load_problem(data_path("does_not_exist.txt"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::Io);
  }
}

TEST(FormatProblemTest, RoundTrips) {
  for (const char* file : {"example1.txt", "example4.txt", "interior_datum.txt"}) {
    const Problem p = load_problem(data_path(file));
    const std::string text = format_problem(p);
    const Problem q = parse_problem(text);
    EXPECT_EQ(format_problem(q), text) << file;
    EXPECT_EQ(q.graph.num_edges(), p.graph.num_edges());
    EXPECT_EQ(q.datum->size(), p.datum->size());
  }
}

}  // namespace
}  // namespace mgenv
