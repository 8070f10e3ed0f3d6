#include <gtest/gtest.h>

#include "../support/instances.hpp"
#include "mgenv/functions.hpp"

namespace mgenv {
namespace {

using testing::load_example;

MetricGraph square() {
  return MetricGraph::build({"a", "b", "c", "d"},
                            {{"ab", 0, 1, 1}, {"bc", 1, 2, 1}, {"cd", 2, 3, 1}, {"da", 3, 0, 1}});
}

MetricGraph path3() {
  return MetricGraph::build({"a", "b", "c"}, {{"p", 0, 1, 1}, {"q", 1, 2, 1}});
}

TEST(PwlFunctionTest, LinearBetweenVertexValues) {
  const MetricGraph g = path3();
  const PwlFunction u = PwlFunction::from_vertex_values(g, {0.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(u.eval(VertexPoint{1}), 2.0);
  EXPECT_DOUBLE_EQ(u.eval(EdgePoint{0, 0.25}), 0.5);
  EXPECT_DOUBLE_EQ(u.eval(EdgePoint{1, 0.5}), 1.5);
  EXPECT_DOUBLE_EQ(u.max_abs(), 2.0);
  EXPECT_THROW(PwlFunction::from_vertex_values(g, {0.0}), FunctionError);
}

TEST(PwlFunctionTest, BreakpointValidation) {
  const MetricGraph g = path3();
  EXPECT_NO_THROW(PwlFunction::from_breakpoints(g, {{{0, 0}, {0.5, -1}, {1, 1}}, {{0, 1}, {1, 3}}}));
  // Jump at b.
  EXPECT_THROW(PwlFunction::from_breakpoints(g, {{{0, 0}, {1, 1}}, {{0, 2}, {1, 3}}}), FunctionError);
  // Does not start at 0.
  EXPECT_THROW(PwlFunction::from_breakpoints(g, {{{0.1, 0}, {1, 1}}, {{0, 1}, {1, 3}}}), FunctionError);
  // Does not reach the length.
  EXPECT_THROW(PwlFunction::from_breakpoints(g, {{{0, 0}, {0.9, 1}}, {{0, 1}, {1, 3}}}), FunctionError);
  // Not increasing.
  EXPECT_THROW(PwlFunction::from_breakpoints(g, {{{0, 0}, {0.5, 1}, {0.5, 1}, {1, 1}}, {{0, 1}, {1, 3}}}),
               FunctionError);
  EXPECT_THROW(PwlFunction::from_breakpoints(g, {{{0, 0}, {1, 1}}}), FunctionError);
}

TEST(PwlFunctionTest, InteriorBreakpointsAndSubdivisionRoundTrip) {
  const MetricGraph g = path3();
  const PwlFunction u =
      PwlFunction::from_breakpoints(g, {{{0, 0}, {0.5, -1}, {1, 1}}, {{0, 1}, {0.25, 0}, {1, 3}}});
  const auto bps = interior_breakpoints(u);
  ASSERT_EQ(bps.size(), 2u);
  const Subdivision s = subdivide_at(g, bps);
  const PwlFunction us = to_subdivision(s, u);
  EXPECT_EQ(us.num_edges(), 4u);
  const PwlFunction back = from_subdivision(g, s, us);
  for (double t : {0.1, 0.5, 0.7}) {
    EXPECT_DOUBLE_EQ(back.eval(EdgePoint{0, t}), u.eval(EdgePoint{0, t}));
    EXPECT_DOUBLE_EQ(back.eval(EdgePoint{1, t}), u.eval(EdgePoint{1, t}));
  }
}

TEST(IngoingDerivativeTest, Example3Envelope) {
  const Problem p = load_example("example3.txt");
  const MetricGraph& g = p.graph;
  const VertexId v3 = *g.find_vertex("v3");
  const PwlFunction u = PwlFunction::from_vertex_values(g, {0.0, 1.0, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(ingoing_derivative(g, u, v3, *g.find_edge("e1")), -0.5);
  EXPECT_DOUBLE_EQ(ingoing_derivative(g, u, v3, *g.find_edge("e2")), 0.5);
  EXPECT_DOUBLE_EQ(ingoing_derivative(g, u, v3, *g.find_edge("e3")), 1.5);
  // At the head end the direction points back towards the tail.
  EXPECT_DOUBLE_EQ(ingoing_derivative(g, u, *g.find_vertex("v4"), *g.find_edge("e3")), -1.5);
  EXPECT_DOUBLE_EQ(min_pair_slope(g, u, v3), 0.0);
  EXPECT_THROW(ingoing_derivative(g, u, *g.find_vertex("v1"), *g.find_edge("e2")), FunctionError);
  EXPECT_THROW(min_pair_slope(g, u, *g.find_vertex("v1")), FunctionError);
}

TEST(LocalConvexityTest, DetectsVertexPeakAndEdgeKink) {
  const MetricGraph g = path3();
  const auto peak = check_convex_local(g, PwlFunction::from_vertex_values(g, {0, 1, 0}), 1e-9);
  ASSERT_EQ(peak.violations.size(), 1u);
  EXPECT_EQ(peak.violations[0].kind, ConvexityViolation::Kind::VertexPeak);
  EXPECT_EQ(peak.violations[0].vertex, 1u);
  EXPECT_DOUBLE_EQ(peak.violations[0].amount, 2.0);

  const PwlFunction kink =
      PwlFunction::from_breakpoints(g, {{{0, 0}, {0.5, 1}, {1, 1}}, {{0, 1}, {1, 2}}});
  const auto r = check_convex_local(g, kink, 1e-9);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].kind, ConvexityViolation::Kind::EdgeKink);
  EXPECT_DOUBLE_EQ(r.violations[0].t, 0.5);

  EXPECT_TRUE(check_convex_local(g, PwlFunction::from_vertex_values(g, {1, 0, 1}), 1e-9).passed());
}

TEST(SampledCheckTest, ConvexChordViolationFound) {
  const MetricGraph g = path3();
  const auto cx = check_convex_sampled(g, PwlFunction::from_vertex_values(g, {0, 1, 0}), {}, 1e-9);
  ASSERT_TRUE(cx.has_value());
  EXPECT_GT(cx->uz, cx->bound);
  EXPECT_FALSE(check_convex_sampled(g, PwlFunction::from_vertex_values(g, {1, 0, 1}), {}, 1e-9));
}

TEST(SampledCheckTest, CycleAdmitsOnlyConstants) {
  const MetricGraph g = square();
  EXPECT_TRUE(check_convex_sampled(g, PwlFunction::from_vertex_values(g, {0, 1, 2, 1}), {}, 1e-9));
  EXPECT_FALSE(check_convex_sampled(g, PwlFunction::from_vertex_values(g, {3, 3, 3, 3}), {}, 1e-9));
}

TEST(SampledCheckTest, Example4SpuriousFunctionIsNotQuasiconvex) {
  const Problem p = load_example("example4.txt");
  const MetricGraph& g = p.graph;
  // v1..v6 = 0 2 2 2 1 3, e1..e5 = 2 2 2 2 3.
  const PwcFunction u = PwcFunction::from_nodal(g, {0, 2, 2, 2, 1, 3}, {2, 2, 2, 2, 3});
  const auto cx = check_quasiconvex_sampled(g, u, {});
  ASSERT_TRUE(cx.has_value());
  EXPECT_EQ(cx->uz, 2.0);
  EXPECT_EQ(cx->bound, 1.0);

  const PwcFunction good = PwcFunction::from_nodal(g, {0, 1, 2, 1, 1, 3}, {1, 2, 1, 1, 3});
  EXPECT_FALSE(check_quasiconvex_sampled(g, good, {}).has_value());
}

TEST(SampledCheckTest, BudgetSmallerThanPairCountStillDeterministic) {
  const Problem p = load_example("example4.txt");
  const PwcFunction u = PwcFunction::from_nodal(p.graph, {0, 2, 2, 2, 1, 3}, {2, 2, 2, 2, 3});
  SampleOptions opts;
  opts.budget = 40;
  const auto a = check_quasiconvex_sampled(p.graph, u, opts);
  const auto b = check_quasiconvex_sampled(p.graph, u, opts);
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_EQ(a->x, b->x);
    EXPECT_EQ(a->z, b->z);
  }
}

TEST(PwcFunctionTest, NodalAndLevels) {
  const MetricGraph g = path3();
  const PwcFunction u = PwcFunction::from_nodal(g, {0, 1, 2}, {1, 2});
  EXPECT_TRUE(u.is_nodal());
  EXPECT_EQ(u.eval(EdgePoint{0, 0.3}), 1.0);
  EXPECT_EQ(u.eval(VertexPoint{2}), 2.0);
  EXPECT_EQ(u.distinct_values(), (std::vector<double>{0, 1, 2}));

  const PwcFunction w = PwcFunction::build(
      g, {0, 1, 2}, {EdgeLevels{{{0.5, -1}}, {0, 1}}, EdgeLevels{{}, {2}}});
  EXPECT_FALSE(w.is_nodal());
  EXPECT_EQ(w.eval(EdgePoint{0, 0.25}), 0.0);
  EXPECT_EQ(w.eval(EdgePoint{0, 0.5}), -1.0);
  EXPECT_EQ(w.eval(EdgePoint{0, 0.75}), 1.0);
  EXPECT_DOUBLE_EQ(w.max_abs(), 2.0);
  EXPECT_EQ(interior_breakpoints(w).size(), 1u);

  const Subdivision s = subdivide_at(g, interior_breakpoints(w));
  EXPECT_EQ(from_subdivision(g, s, to_subdivision(s, w)), w);

  EXPECT_THROW(PwcFunction::from_nodal(g, {0, 1, 2}, {1}), FunctionError);
  EXPECT_THROW(PwcFunction::build(g, {0, 1, 2}, {EdgeLevels{{{0.5, -1}}, {0}}, EdgeLevels{{}, {2}}}),
               FunctionError);
}

TEST(SublevelSetTest, ConvexityFlag) {
  const MetricGraph g = square();
  const PwcFunction u = PwcFunction::from_nodal(g, {0, 1, 0, 1}, {1, 1, 1, 1});
  const SublevelSet low = sublevel_set(g, u, 0.0);
  EXPECT_EQ(low.set.vertex_list(), (std::vector<VertexId>{0, 2}));
  EXPECT_FALSE(low.convex);
  EXPECT_TRUE(sublevel_set(g, u, 1.0).convex);
  EXPECT_TRUE(sublevel_set(g, u, -1.0).convex);  // empty

  const PwcFunction w = PwcFunction::from_nodal(g, {0, 0, 1, 1}, {0, 1, 1, 1});
  const SublevelSet edge = sublevel_set(g, w, 0.0);
  EXPECT_EQ(edge.set.edge_list(), (std::vector<EdgeId>{0}));
  EXPECT_TRUE(edge.convex);
}

}  // namespace
}  // namespace mgenv
