#include "mgenv/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mgenv {

const char* to_string(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::EmptyGraph: return "EmptyGraph";
    case GraphErrorKind::LoopEdge: return "LoopEdge";
    case GraphErrorKind::NonpositiveLength: return "NonpositiveLength";
    case GraphErrorKind::DisconnectedGraph: return "DisconnectedGraph";
    case GraphErrorKind::UnknownVertex: return "UnknownVertex";
    case GraphErrorKind::DuplicateName: return "DuplicateName";
    case GraphErrorKind::InvalidPoint: return "InvalidPoint";
    case GraphErrorKind::DuplicatePoint: return "DuplicatePoint";
    case GraphErrorKind::NonfiniteValue: return "NonfiniteValue";
    case GraphErrorKind::EmptyDatum: return "EmptyDatum";
  }
  return "GraphError";
}

std::string format_real(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

MetricGraph MetricGraph::build(std::vector<std::string> vertex_names,
                               std::vector<EdgeSpec> edges) {
  if (vertex_names.empty() || edges.empty()) {
    throw GraphError(GraphErrorKind::EmptyGraph,
                     "graph needs at least one edge");
  }
  const std::size_t n = vertex_names.size();
  {
    std::unordered_set<std::string> seen;
    for (const auto& name : vertex_names) {
      if (!seen.insert(name).second) {
        throw GraphError(GraphErrorKind::DuplicateName,
                         "duplicate vertex name '" + name + "'");
      }
    }
    seen.clear();
    for (const auto& e : edges) {
      if (!seen.insert(e.name).second) {
        throw GraphError(GraphErrorKind::DuplicateName,
                         "duplicate edge name '" + e.name + "'");
      }
    }
  }

  MetricGraph g;
  g.vertex_names_ = std::move(vertex_names);
  g.adjacency_.resize(n);
  g.edges_.reserve(edges.size());
  g.edge_names_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeSpec& spec = edges[i];
    if (spec.tail >= n || spec.head >= n) {
      throw GraphError(GraphErrorKind::UnknownVertex,
                       "edge '" + spec.name + "' references an unknown vertex");
    }
    if (spec.tail == spec.head) {
      throw GraphError(GraphErrorKind::LoopEdge,
                       "edge '" + spec.name + "' is a loop");
    }
    if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
      throw GraphError(GraphErrorKind::NonpositiveLength,
                       "edge '" + spec.name +
                           "' must have a positive finite length");
    }
    g.edges_.push_back(Edge{i, spec.tail, spec.head, spec.length});
    g.edge_names_.push_back(std::move(edges[i].name));
    g.adjacency_[spec.tail].push_back(Incidence{i, spec.head});
    g.adjacency_[spec.head].push_back(Incidence{i, spec.tail});
    g.total_length_ += spec.length;
  }

  // Connectivity by DFS from vertex 0.
  std::vector<bool> reached(n, false);
  std::vector<VertexId> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.adjacency_[v]) {
      if (!reached[inc.neighbor]) {
        reached[inc.neighbor] = true;
        stack.push_back(inc.neighbor);
      }
    }
  }
  auto it = std::find(reached.begin(), reached.end(), false);
  if (it != reached.end()) {
    throw GraphError(GraphErrorKind::DisconnectedGraph,
                     "vertex '" + g.vertex_names_[it - reached.begin()] +
                         "' is not connected to '" + g.vertex_names_[0] + "'");
  }
  return g;
}

MetricGraph MetricGraph::build(std::size_t num_vertices,
                               const std::vector<EdgeSpec>& edges) {
  std::vector<std::string> names(num_vertices);
  for (std::size_t i = 0; i < num_vertices; ++i) names[i] = "v" + std::to_string(i);
  std::vector<EdgeSpec> specs = edges;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].name.empty()) specs[i].name = "e" + std::to_string(i);
  }
  return build(std::move(names), std::move(specs));
}

std::optional<VertexId> MetricGraph::find_vertex(const std::string& name) const {
  auto it = std::find(vertex_names_.begin(), vertex_names_.end(), name);
  if (it == vertex_names_.end()) return std::nullopt;
  return static_cast<VertexId>(it - vertex_names_.begin());
}

std::optional<EdgeId> MetricGraph::find_edge(const std::string& name) const {
  auto it = std::find(edge_names_.begin(), edge_names_.end(), name);
  if (it == edge_names_.end()) return std::nullopt;
  return static_cast<EdgeId>(it - edge_names_.begin());
}

double MetricGraph::min_edge_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) m = std::min(m, e.length);
  return m;
}

MetricGraph MetricGraph::with_reversed_edge(EdgeId e) const {
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (const Edge& edge : edges_) {
    EdgeSpec s{edge_names_[edge.id], edge.tail, edge.head, edge.length};
    if (edge.id == e) std::swap(s.tail, s.head);
    specs.push_back(std::move(s));
  }
  return build(vertex_names_, std::move(specs));
}

std::vector<VertexId> terminal_vertices(const MetricGraph& g) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.is_terminal(v)) out.push_back(v);
  }
  return out;
}

GraphPoint point_on_edge(const MetricGraph& g, EdgeId e, double t) {
  if (e >= g.num_edges()) {
    throw GraphError(GraphErrorKind::InvalidPoint,
                     "unknown edge id " + std::to_string(e));
  }
  const Edge& edge = g.edge(e);
  if (!std::isfinite(t) || t < 0.0 || t > edge.length) {
    throw GraphError(GraphErrorKind::InvalidPoint,
                     "coordinate " + format_real(t) + " outside edge '" +
                         g.edge_name(e) + "'");
  }
  if (t == 0.0) return VertexPoint{edge.tail};
  if (t == edge.length) return VertexPoint{edge.head};
  return EdgePoint{e, t};
}

GraphPoint point_on_reversed_edge(const MetricGraph& g, EdgeId e, double s) {
  return point_on_edge(g, e, g.edge(e).length - s);
}

GraphPoint canonical(const MetricGraph& g, const GraphPoint& p) {
  if (const auto* v = std::get_if<VertexPoint>(&p)) {
    if (v->vertex >= g.num_vertices()) {
      throw GraphError(GraphErrorKind::InvalidPoint,
                       "unknown vertex id " + std::to_string(v->vertex));
    }
    return p;
  }
  const auto& ep = std::get<EdgePoint>(p);
  return point_on_edge(g, ep.edge, ep.t);
}

bool is_vertex(const GraphPoint& p) {
  return std::holds_alternative<VertexPoint>(p);
}

bool point_less(const GraphPoint& a, const GraphPoint& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  if (const auto* va = std::get_if<VertexPoint>(&a)) {
    return va->vertex < std::get<VertexPoint>(b).vertex;
  }
  const auto& ea = std::get<EdgePoint>(a);
  const auto& eb = std::get<EdgePoint>(b);
  if (ea.edge != eb.edge) return ea.edge < eb.edge;
  return ea.t < eb.t;
}

std::string describe(const MetricGraph& g, const GraphPoint& p) {
  if (const auto* v = std::get_if<VertexPoint>(&p)) {
    return g.vertex_name(v->vertex);
  }
  const auto& ep = std::get<EdgePoint>(p);
  return g.edge_name(ep.edge) + "@" + format_real(ep.t);
}

Datum Datum::build(const MetricGraph& g, std::vector<DatumEntry> entries) {
  if (entries.empty()) {
    throw GraphError(GraphErrorKind::EmptyDatum, "datum has no points");
  }
  Datum d;
  d.entries_.reserve(entries.size());
  for (auto& entry : entries) {
    entry.point = canonical(g, entry.point);
    if (!std::isfinite(entry.value)) {
      throw GraphError(GraphErrorKind::NonfiniteValue,
                       "datum value at " + describe(g, entry.point) +
                           " is not finite");
    }
    for (const auto& prior : d.entries_) {
      if (prior.point == entry.point) {
        throw GraphError(GraphErrorKind::DuplicatePoint,
                         "datum point " + describe(g, entry.point) +
                             " given twice");
      }
    }
    d.entries_.push_back(entry);
  }
  return d;
}

std::vector<GraphPoint> Datum::points() const {
  std::vector<GraphPoint> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.point);
  return out;
}

std::optional<double> Datum::value_at(const GraphPoint& p) const {
  for (const auto& e : entries_) {
    if (e.point == p) return e.value;
  }
  return std::nullopt;
}

double Datum::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) m = std::min(m, e.value);
  return m;
}

double Datum::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) m = std::max(m, e.value);
  return m;
}

GraphPoint Subdivision::to_sub(const GraphPoint& original) const {
  if (is_vertex(original)) return original;
  const auto& ep = std::get<EdgePoint>(original);
  for (const Piece& piece : pieces.at(ep.edge)) {
    if (ep.t == piece.start) {
      return VertexPoint{graph.edge(piece.sub_edge).tail};
    }
    if (ep.t == piece.end) {
      return VertexPoint{graph.edge(piece.sub_edge).head};
    }
    if (ep.t > piece.start && ep.t < piece.end) {
      return EdgePoint{piece.sub_edge, ep.t - piece.start};
    }
  }
  throw GraphError(GraphErrorKind::InvalidPoint,
                   "point outside its edge in subdivision");
}

GraphPoint Subdivision::to_original(const GraphPoint& sub) const {
  if (const auto* v = std::get_if<VertexPoint>(&sub)) {
    return node_origin.at(v->vertex);
  }
  const auto& ep = std::get<EdgePoint>(sub);
  return EdgePoint{parent_edge.at(ep.edge), parent_offset.at(ep.edge) + ep.t};
}

std::optional<VertexId> Subdivision::node_at(const GraphPoint& original) const {
  GraphPoint s = to_sub(original);
  if (const auto* v = std::get_if<VertexPoint>(&s)) return v->vertex;
  return std::nullopt;
}

Subdivision subdivide_at(const MetricGraph& g,
                         std::span<const GraphPoint> points) {
  std::vector<std::set<double>> cuts(g.num_edges());
  for (const GraphPoint& raw : points) {
    GraphPoint p = canonical(g, raw);
    if (const auto* ep = std::get_if<EdgePoint>(&p)) cuts[ep->edge].insert(ep->t);
  }

  std::vector<std::string> names(g.vertex_names().begin(),
                                 g.vertex_names().end());
  Subdivision sub;
  sub.node_origin.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    sub.node_origin.push_back(VertexPoint{v});
  }

  // New vertex ids in (edge, coordinate) order.
  std::vector<std::vector<VertexId>> cut_nodes(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (double t : cuts[e]) {
      cut_nodes[e].push_back(names.size());
      names.push_back(g.edge_name(e) + "@" + format_real(t));
      sub.node_origin.push_back(EdgePoint{e, t});
    }
  }

  std::vector<EdgeSpec> specs;
  sub.pieces.resize(g.num_edges());
  for (const Edge& edge : g.edges()) {
    std::vector<double> stops{0.0};
    stops.insert(stops.end(), cuts[edge.id].begin(), cuts[edge.id].end());
    stops.push_back(edge.length);
    std::vector<VertexId> nodes{edge.tail};
    nodes.insert(nodes.end(), cut_nodes[edge.id].begin(),
                 cut_nodes[edge.id].end());
    nodes.push_back(edge.head);
    const bool split = stops.size() > 2;
    for (std::size_t k = 0; k + 1 < stops.size(); ++k) {
      EdgeId id = specs.size();
      std::string name = split ? g.edge_name(edge.id) + "#" + std::to_string(k)
                               : g.edge_name(edge.id);
      specs.push_back(EdgeSpec{std::move(name), nodes[k], nodes[k + 1],
                               stops[k + 1] - stops[k]});
      sub.pieces[edge.id].push_back(Subdivision::Piece{id, stops[k], stops[k + 1]});
      sub.parent_edge.push_back(edge.id);
      sub.parent_offset.push_back(stops[k]);
    }
  }
  sub.graph = MetricGraph::build(std::move(names), std::move(specs));

  sub.point_nodes.reserve(points.size());
  for (const GraphPoint& raw : points) {
    auto node = sub.node_at(canonical(g, raw));
    sub.point_nodes.push_back(*node);
  }
  return sub;
}

}  // namespace mgenv
