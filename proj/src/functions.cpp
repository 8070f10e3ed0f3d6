#include "mgenv/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

namespace mgenv {
namespace {

double eval_segments(std::span<const Breakpoint> bps, double t) {
  auto it = std::upper_bound(bps.begin(), bps.end(), t,
                             [](double x, const Breakpoint& b) { return x < b.t; });
  if (it == bps.begin()) return bps.front().value;
  if (it == bps.end()) return bps.back().value;
  const Breakpoint& lo = *(it - 1);
  const Breakpoint& hi = *it;
  if (t == lo.t) return lo.value;
  double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

// Value of a piecewise-constant edge at coordinate t in (0, length).
double eval_levels(const EdgeLevels& levels, double t) {
  std::size_t piece = 0;
  for (const Breakpoint& p : levels.points) {
    if (t == p.t) return p.value;
    if (t > p.t) ++piece;
  }
  return levels.pieces[piece];
}

std::string edge_label(const MetricGraph& g, EdgeId e) {
  return "'" + g.edge_name(e) + "'";
}

}  // namespace

PwlFunction PwlFunction::from_vertex_values(const MetricGraph& g,
                                            std::vector<double> values) {
  if (values.size() != g.num_vertices()) {
    throw FunctionError("expected one value per vertex");
  }
  PwlFunction u;
  u.edges_.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    u.edges_.push_back({{0.0, values[e.tail]}, {e.length, values[e.head]}});
  }
  u.vertex_values_ = std::move(values);
  return u;
}

PwlFunction PwlFunction::from_breakpoints(const MetricGraph& g,
                                          std::vector<std::vector<Breakpoint>> edges) {
  if (edges.size() != g.num_edges()) {
    throw FunctionError("expected breakpoints for every edge");
  }
  PwlFunction u;
  u.vertex_values_.assign(g.num_vertices(), 0.0);
  std::vector<bool> assigned(g.num_vertices(), false);
  auto set_vertex = [&](VertexId v, double value, EdgeId e) {
    if (assigned[v] && u.vertex_values_[v] != value) {
      throw FunctionError("function is discontinuous at vertex '" +
                          g.vertex_name(v) + "' (edge " + edge_label(g, e) + ")");
    }
    u.vertex_values_[v] = value;
    assigned[v] = true;
  };
  for (const Edge& e : g.edges()) {
    auto& bps = edges[e.id];
    if (bps.size() < 2) {
      throw FunctionError("edge " + edge_label(g, e.id) + " needs two breakpoints");
    }
    if (bps.front().t != 0.0) {
      throw FunctionError("edge " + edge_label(g, e.id) + " must start at t = 0");
    }
    if (std::abs(bps.back().t - e.length) > 1e-12 * e.length) {
      throw FunctionError("edge " + edge_label(g, e.id) + " must end at its length");
    }
    bps.back().t = e.length;
    for (std::size_t k = 0; k < bps.size(); ++k) {
      if (!std::isfinite(bps[k].value)) {
        throw FunctionError("non-finite value on edge " + edge_label(g, e.id));
      }
      if (k > 0 && !(bps[k].t > bps[k - 1].t)) {
        throw FunctionError("breakpoints on edge " + edge_label(g, e.id) +
                            " are not strictly increasing");
      }
    }
    set_vertex(e.tail, bps.front().value, e.id);
    set_vertex(e.head, bps.back().value, e.id);
  }
  u.edges_ = std::move(edges);
  return u;
}

double PwlFunction::eval(const GraphPoint& p) const {
  if (const auto* v = std::get_if<VertexPoint>(&p)) return vertex_value(v->vertex);
  const auto& ep = std::get<EdgePoint>(p);
  return eval_segments(edges_.at(ep.edge), ep.t);
}

double PwlFunction::max_abs() const {
  double m = 0.0;
  for (const auto& bps : edges_) {
    for (const auto& b : bps) m = std::max(m, std::abs(b.value));
  }
  for (double v : vertex_values_) m = std::max(m, std::abs(v));
  return m;
}

PwcFunction PwcFunction::build(const MetricGraph& g, std::vector<double> vertex_values,
                               std::vector<EdgeLevels> edges) {
  if (vertex_values.size() != g.num_vertices() || edges.size() != g.num_edges()) {
    throw FunctionError("piecewise-constant function does not match the graph");
  }
  for (double v : vertex_values) {
    if (!std::isfinite(v)) throw FunctionError("non-finite vertex value");
  }
  for (const Edge& e : g.edges()) {
    const EdgeLevels& lv = edges[e.id];
    if (lv.pieces.size() != lv.points.size() + 1) {
      throw FunctionError("edge " + edge_label(g, e.id) +
                          " needs one more piece than breakpoints");
    }
    double prev = 0.0;
    for (const Breakpoint& p : lv.points) {
      if (!(p.t > prev) || !(p.t < e.length) || !std::isfinite(p.value)) {
        throw FunctionError("invalid breakpoint on edge " + edge_label(g, e.id));
      }
      prev = p.t;
    }
    for (double c : lv.pieces) {
      if (!std::isfinite(c)) {
        throw FunctionError("non-finite value on edge " + edge_label(g, e.id));
      }
    }
  }
  PwcFunction u;
  u.vertex_values_ = std::move(vertex_values);
  u.edges_ = std::move(edges);
  return u;
}

PwcFunction PwcFunction::from_nodal(const MetricGraph& g,
                                    std::vector<double> vertex_values,
                                    std::vector<double> edge_values) {
  if (edge_values.size() != g.num_edges()) {
    throw FunctionError("expected one value per edge");
  }
  std::vector<EdgeLevels> edges;
  edges.reserve(edge_values.size());
  for (double c : edge_values) edges.push_back(EdgeLevels{{}, {c}});
  return build(g, std::move(vertex_values), std::move(edges));
}

bool PwcFunction::is_nodal() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const EdgeLevels& lv) { return lv.points.empty(); });
}

double PwcFunction::eval(const GraphPoint& p) const {
  if (const auto* v = std::get_if<VertexPoint>(&p)) return vertex_value(v->vertex);
  const auto& ep = std::get<EdgePoint>(p);
  return eval_levels(edges_.at(ep.edge), ep.t);
}

std::vector<double> PwcFunction::distinct_values() const {
  std::set<double> values(vertex_values_.begin(), vertex_values_.end());
  for (const auto& lv : edges_) {
    values.insert(lv.pieces.begin(), lv.pieces.end());
    for (const auto& p : lv.points) values.insert(p.value);
  }
  return {values.begin(), values.end()};
}

double PwcFunction::max_abs() const {
  double m = 0.0;
  for (double v : distinct_values()) m = std::max(m, std::abs(v));
  return m;
}

std::vector<GraphPoint> interior_breakpoints(const PwlFunction& u) {
  std::vector<GraphPoint> out;
  for (EdgeId e = 0; e < u.num_edges(); ++e) {
    auto bps = u.on_edge(e);
    for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
      out.push_back(EdgePoint{e, bps[k].t});
    }
  }
  return out;
}

std::vector<GraphPoint> interior_breakpoints(const PwcFunction& u) {
  std::vector<GraphPoint> out;
  for (EdgeId e = 0; e < u.num_edges(); ++e) {
    for (const Breakpoint& p : u.on_edge(e).points) out.push_back(EdgePoint{e, p.t});
  }
  return out;
}

PwlFunction to_subdivision(const Subdivision& sub, const PwlFunction& u) {
  const MetricGraph& sg = sub.graph;
  std::vector<std::vector<Breakpoint>> edges(sg.num_edges());
  for (EdgeId se = 0; se < sg.num_edges(); ++se) {
    const EdgeId parent = sub.parent_edge[se];
    const double start = sub.parent_offset[se];
    const double len = sg.edge(se).length;
    auto& out = edges[se];
    out.push_back({0.0, 0.0});  // endpoint values filled from node values
    for (const Breakpoint& b : u.on_edge(parent)) {
      double local = b.t - start;
      if (local > 0.0 && local < len) out.push_back({local, b.value});
    }
    out.push_back({len, 0.0});
  }
  std::vector<double> node_values(sg.num_vertices());
  for (VertexId v = 0; v < sg.num_vertices(); ++v) {
    node_values[v] = u.eval(sub.node_origin[v]);
  }
  for (EdgeId se = 0; se < sg.num_edges(); ++se) {
    edges[se].front().value = node_values[sg.edge(se).tail];
    edges[se].back().value = node_values[sg.edge(se).head];
  }
  return PwlFunction::from_breakpoints(sg, std::move(edges));
}

PwcFunction to_subdivision(const Subdivision& sub, const PwcFunction& u) {
  const MetricGraph& sg = sub.graph;
  std::vector<double> node_values(sg.num_vertices());
  for (VertexId v = 0; v < sg.num_vertices(); ++v) {
    node_values[v] = u.eval(sub.node_origin[v]);
  }
  std::vector<EdgeLevels> edges(sg.num_edges());
  for (EdgeId se = 0; se < sg.num_edges(); ++se) {
    const EdgeLevels& lv = u.on_edge(sub.parent_edge[se]);
    const double start = sub.parent_offset[se];
    const double len = sg.edge(se).length;
    std::size_t piece = 0;
    for (const Breakpoint& p : lv.points) {
      if (p.t <= start) ++piece;
    }
    EdgeLevels& out = edges[se];
    out.pieces.push_back(lv.pieces[piece]);
    for (const Breakpoint& p : lv.points) {
      double local = p.t - start;
      if (local > 0.0 && local < len) {
        out.points.push_back({local, p.value});
        out.pieces.push_back(lv.pieces[++piece]);
      }
    }
  }
  return PwcFunction::build(sg, std::move(node_values), std::move(edges));
}

PwlFunction from_subdivision(const MetricGraph& original, const Subdivision& sub,
                             const PwlFunction& u_sub) {
  std::vector<std::vector<Breakpoint>> edges(original.num_edges());
  for (const Edge& e : original.edges()) {
    auto& out = edges[e.id];
    for (const Subdivision::Piece& piece : sub.pieces[e.id]) {
      auto bps = u_sub.on_edge(piece.sub_edge);
      for (std::size_t k = out.empty() ? 0 : 1; k < bps.size(); ++k) {
        out.push_back({piece.start + bps[k].t, bps[k].value});
      }
    }
    out.back().t = e.length;
  }
  return PwlFunction::from_breakpoints(original, std::move(edges));
}

PwcFunction from_subdivision(const MetricGraph& original, const Subdivision& sub,
                             const PwcFunction& u_sub) {
  std::vector<double> vertex_values(original.num_vertices());
  for (VertexId v = 0; v < original.num_vertices(); ++v) {
    vertex_values[v] = u_sub.vertex_value(v);
  }
  std::vector<EdgeLevels> edges(original.num_edges());
  for (const Edge& e : original.edges()) {
    EdgeLevels& out = edges[e.id];
    bool first = true;
    for (const Subdivision::Piece& piece : sub.pieces[e.id]) {
      const EdgeLevels& lv = u_sub.on_edge(piece.sub_edge);
      if (!first) {
        VertexId joint = sub.graph.edge(piece.sub_edge).tail;
        out.points.push_back({piece.start, u_sub.vertex_value(joint)});
      }
      first = false;
      out.pieces.push_back(lv.pieces[0]);
      for (std::size_t k = 0; k < lv.points.size(); ++k) {
        out.points.push_back({piece.start + lv.points[k].t, lv.points[k].value});
        out.pieces.push_back(lv.pieces[k + 1]);
      }
    }
  }
  return PwcFunction::build(original, std::move(vertex_values), std::move(edges));
}

double slope_tolerance(double scale) { return 1e-9 * std::max(1.0, scale); }

double ingoing_derivative(const MetricGraph& g, const PwlFunction& u, VertexId v,
                          EdgeId e) {
  const Edge& edge = g.edge(e);
  auto bps = u.on_edge(e);
  if (v == edge.tail) {
    return (bps[1].value - bps[0].value) / (bps[1].t - bps[0].t);
  }
  if (v == edge.head) {
    const std::size_t n = bps.size();
    return -(bps[n - 1].value - bps[n - 2].value) / (bps[n - 1].t - bps[n - 2].t);
  }
  throw FunctionError("edge " + edge_label(g, e) + " is not incident to vertex '" +
                      g.vertex_name(v) + "'");
}

double min_pair_slope(const MetricGraph& g, const PwlFunction& u, VertexId v) {
  auto incs = g.incident(v);
  if (incs.size() < 2) {
    throw FunctionError("vertex '" + g.vertex_name(v) +
                        "' has degree < 2; no pair of edges");
  }
  std::vector<double> slopes;
  slopes.reserve(incs.size());
  for (const Incidence& inc : incs) slopes.push_back(ingoing_derivative(g, u, v, inc.edge));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    for (std::size_t j = i + 1; j < slopes.size(); ++j) {
      best = std::min(best, slopes[i] + slopes[j]);
    }
  }
  return best;
}

LocalConvexityReport check_convex_local(const MetricGraph& g, const PwlFunction& u,
                                        double tol) {
  LocalConvexityReport report;
  for (const Edge& e : g.edges()) {
    auto bps = u.on_edge(e.id);
    for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
      double left = (bps[k].value - bps[k - 1].value) / (bps[k].t - bps[k - 1].t);
      double right = (bps[k + 1].value - bps[k].value) / (bps[k + 1].t - bps[k].t);
      if (right - left < -tol) {
        ConvexityViolation viol;
        viol.kind = ConvexityViolation::Kind::EdgeKink;
        viol.edge = e.id;
        viol.t = bps[k].t;
        viol.amount = left - right;
        report.violations.push_back(viol);
      }
    }
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.degree(v) < 2) continue;
    double s = min_pair_slope(g, u, v);
    if (s < -tol) {
      ConvexityViolation viol;
      viol.kind = ConvexityViolation::Kind::VertexPeak;
      viol.vertex = v;
      viol.amount = -s;
      report.violations.push_back(viol);
    }
  }
  return report;
}

namespace {

std::vector<GraphPoint> sample_candidates(const MetricGraph& g,
                                          std::vector<GraphPoint> extra,
                                          const SampleOptions& opts) {
  constexpr double kGolden = 0.6180339887498949;
  constexpr double kPlastic = 0.7548776662466927;
  std::vector<GraphPoint> pts = std::move(extra);
  for (VertexId v = 0; v < g.num_vertices(); ++v) pts.push_back(VertexPoint{v});
  const double offset = std::fmod(static_cast<double>(opts.seed) * kPlastic, 1.0);
  for (const Edge& e : g.edges()) {
    for (std::size_t k = 1; k <= opts.points_per_edge; ++k) {
      double frac = std::fmod(offset + static_cast<double>(k) * kGolden, 1.0);
      double t = frac * e.length;
      if (t > 0.0 && t < e.length) pts.push_back(EdgePoint{e.id, t});
    }
  }
  std::sort(pts.begin(), pts.end(), point_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

template <class Eval, class Bound>
std::optional<Counterexample> scan_triples(const MetricGraph& g,
                                           const std::vector<GraphPoint>& pts,
                                           const SampleOptions& opts, Eval eval,
                                           Bound bound, double tol) {
  const std::size_t n = pts.size();
  DistanceTable table(g);
  std::vector<double> dist(n * n, 0.0);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = eval(pts[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = distance(g, table, pts[i], pts[j]);
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t total = n * (n - 1) / 2;
  if (total <= opts.budget) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (pairs.size() < opts.budget) {
      std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i == j) continue;
      pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }

  const double dtol = distance_tolerance(g);
  for (auto [i, j] : pairs) {
    const double dxy = dist[i * n + j];
    if (dxy <= 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const double dxz = dist[i * n + k];
      const double dzy = dist[k * n + j];
      if (std::abs(dxz + dzy - dxy) > dtol) continue;
      const double b = bound(values[i], values[j], dxz, dzy, dxy);
      if (values[k] > b + tol) {
        return Counterexample{pts[i], pts[j], pts[k], values[i], values[j],
                              values[k], b};
      }
    }
  }
  return std::nullopt;
}

double chord_bound(double ux, double uy, double dxz, double dzy, double dxy) {
  return (dzy * ux + dxz * uy) / dxy;
}

double max_bound(double ux, double uy, double, double, double) {
  return std::max(ux, uy);
}

}  // namespace

std::optional<Counterexample> check_convex_sampled(const MetricGraph& g,
                                                   const PwlFunction& u,
                                                   const SampleOptions& opts,
                                                   double tol) {
  auto pts = sample_candidates(g, interior_breakpoints(u), opts);
  return scan_triples(
      g, pts, opts, [&](const GraphPoint& p) { return u.eval(p); }, chord_bound, tol);
}

std::optional<Counterexample> check_quasiconvex_sampled(const MetricGraph& g,
                                                        const PwcFunction& u,
                                                        const SampleOptions& opts,
                                                        double tol) {
  auto pts = sample_candidates(g, interior_breakpoints(u), opts);
  return scan_triples(
      g, pts, opts, [&](const GraphPoint& p) { return u.eval(p); }, max_bound, tol);
}

std::optional<Counterexample> check_quasiconvex_sampled(const MetricGraph& g,
                                                        const PwlFunction& u,
                                                        const SampleOptions& opts,
                                                        double tol) {
  auto pts = sample_candidates(g, interior_breakpoints(u), opts);
  return scan_triples(
      g, pts, opts, [&](const GraphPoint& p) { return u.eval(p); }, max_bound, tol);
}

SublevelSet sublevel_set(const MetricGraph& g, const PwcFunction& u, double alpha) {
  if (!u.is_nodal()) {
    throw FunctionError("sublevel_set needs a function constant on every edge");
  }
  SublevelSet out;
  out.set = Subset::empty_of(g);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out.set.vertices[v] = u.vertex_value(v) <= alpha;
  }
  for (const Edge& e : g.edges()) {
    out.set.edges[e.id] = u.on_edge(e.id).pieces[0] <= alpha &&
                          out.set.vertices[e.tail] && out.set.vertices[e.head];
  }
  out.convex = convex_hull(g, out.set.vertex_list()) == out.set;
  return out;
}

}  // namespace mgenv
