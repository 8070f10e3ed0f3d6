#include "mgenv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace mgenv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> dijkstra(const MetricGraph& g, VertexId source,
                             std::optional<EdgeId> skip = std::nullopt) {
  std::vector<double> dist(g.num_vertices(), kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const Incidence& inc : g.incident(v)) {
      if (skip && inc.edge == *skip) continue;
      double nd = d + g.edge(inc.edge).length;
      if (nd < dist[inc.neighbor]) {
        dist[inc.neighbor] = nd;
        queue.emplace(nd, inc.neighbor);
      }
    }
  }
  return dist;
}

// (vertex, distance from the point) for both exits of an edge point, or the
// vertex itself.
struct Exit {
  VertexId vertex;
  double offset;
};

std::vector<Exit> exits(const MetricGraph& g, const GraphPoint& p) {
  if (const auto* v = std::get_if<VertexPoint>(&p)) return {{v->vertex, 0.0}};
  const auto& ep = std::get<EdgePoint>(p);
  const Edge& e = g.edge(ep.edge);
  return {{e.tail, ep.t}, {e.head, e.length - ep.t}};
}

}  // namespace

DistanceTable::DistanceTable(const MetricGraph& g)
    : n_(g.num_vertices()), d_(n_ * n_, kInf) {
  for (VertexId s = 0; s < n_; ++s) {
    auto row = dijkstra(g, s);
    std::copy(row.begin(), row.end(), d_.begin() + s * n_);
  }
  // Symmetrize so that d(a, b) and d(b, a) are bit-identical.
  for (VertexId a = 0; a < n_; ++a) {
    for (VertexId b = a + 1; b < n_; ++b) {
      double m = std::min(d_[a * n_ + b], d_[b * n_ + a]);
      d_[a * n_ + b] = d_[b * n_ + a] = m;
    }
  }
}

double distance(const MetricGraph& g, const DistanceTable& table,
                const GraphPoint& x, const GraphPoint& y) {
  if (x == y) return 0.0;
  double best = kInf;
  const auto* ex = std::get_if<EdgePoint>(&x);
  const auto* ey = std::get_if<EdgePoint>(&y);
  if (ex && ey && ex->edge == ey->edge) best = std::abs(ex->t - ey->t);
  for (const Exit& a : exits(g, x)) {
    for (const Exit& b : exits(g, y)) {
      best = std::min(best, a.offset + table(a.vertex, b.vertex) + b.offset);
    }
  }
  return best;
}

double distance(const MetricGraph& g, const GraphPoint& x, const GraphPoint& y) {
  return distance(g, DistanceTable(g), x, y);
}

double distance_tolerance(const MetricGraph& g) {
  return 1e-9 * g.total_length();
}

SameEdgeReport check_same_edge_assumption(const MetricGraph& g) {
  SameEdgeReport report;
  for (const Edge& e : g.edges()) {
    double around = dijkstra(g, e.tail, e.id)[e.head];
    if (e.length > around) report.violations.push_back(e.id);
  }
  return report;
}

VertexId NodePath::end(const MetricGraph& g) const {
  VertexId v = start;
  for (const PathStep& s : steps) v = g.edge(s.edge).other(v);
  return v;
}

std::vector<NodePath> all_minimal_paths(const MetricGraph& g, VertexId p,
                                        VertexId q) {
  DistanceTable table(g);
  const double tol = distance_tolerance(g);
  const double target = table(p, q);
  std::vector<NodePath> out;
  NodePath current{p, {}, 0.0};

  std::function<void(VertexId)> walk = [&](VertexId v) {
    if (v == q) {
      out.push_back(current);
      return;
    }
    std::vector<Incidence> incs(g.incident(v).begin(), g.incident(v).end());
    std::sort(incs.begin(), incs.end(),
              [](const Incidence& a, const Incidence& b) { return a.edge < b.edge; });
    for (const Incidence& inc : incs) {
      const Edge& e = g.edge(inc.edge);
      double reached = current.length + e.length;
      // Stay on a geodesic: prefix length must equal d(p, next) and the
      // remainder must still close the gap to q.
      if (std::abs(reached - table(p, inc.neighbor)) > tol) continue;
      if (std::abs(reached + table(inc.neighbor, q) - target) > tol) continue;
      current.steps.push_back(PathStep{inc.edge, e.tail == v});
      double saved = current.length;
      current.length = reached;
      walk(inc.neighbor);
      current.length = saved;
      current.steps.pop_back();
    }
  };
  walk(p);
  return out;
}

bool on_minimal_path(const MetricGraph& g, const DistanceTable& table,
                     VertexId p, VertexId z, VertexId q) {
  return std::abs(table(p, z) + table(z, q) - table(p, q)) <=
         distance_tolerance(g);
}

bool on_minimal_path(const MetricGraph& g, VertexId p, VertexId z, VertexId q) {
  return on_minimal_path(g, DistanceTable(g), p, z, q);
}

bool edge_on_minimal_path(const MetricGraph& g, const DistanceTable& table,
                          VertexId p, EdgeId e, VertexId q) {
  const Edge& edge = g.edge(e);
  const double tol = distance_tolerance(g);
  const double target = table(p, q);
  return std::abs(table(p, edge.tail) + edge.length + table(edge.head, q) -
                  target) <= tol ||
         std::abs(table(p, edge.head) + edge.length + table(edge.tail, q) -
                  target) <= tol;
}

Subset Subset::empty_of(const MetricGraph& g) {
  return Subset{std::vector<bool>(g.num_vertices(), false),
                std::vector<bool>(g.num_edges(), false)};
}

bool Subset::contains(const Subset& other) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (other.vertices[i] && !vertices[i]) return false;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (other.edges[i] && !edges[i]) return false;
  }
  return true;
}

std::vector<VertexId> Subset::vertex_list() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i]) out.push_back(i);
  }
  return out;
}

std::vector<EdgeId> Subset::edge_list() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i]) out.push_back(i);
  }
  return out;
}

Subset convex_hull(const MetricGraph& g, const DistanceTable& table,
                   const std::vector<VertexId>& seeds) {
  Subset hull = Subset::empty_of(g);
  for (VertexId s : seeds) hull.vertices.at(s) = true;

  bool changed = true;
  while (changed) {
    changed = false;
    const std::vector<VertexId> members = hull.vertex_list();
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const VertexId p = members[i];
        const VertexId q = members[j];
        for (VertexId z = 0; z < g.num_vertices(); ++z) {
          if (!hull.vertices[z] && on_minimal_path(g, table, p, z, q)) {
            hull.vertices[z] = true;
            changed = true;
          }
        }
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
          if (!hull.edges[e] && edge_on_minimal_path(g, table, p, e, q)) {
            hull.edges[e] = true;
            changed = true;
          }
        }
      }
    }
  }
  return hull;
}

Subset convex_hull(const MetricGraph& g, const std::vector<VertexId>& seeds) {
  return convex_hull(g, DistanceTable(g), seeds);
}

bool is_whole_graph(const MetricGraph& g, const Subset& s) {
  if (s.vertices.size() != g.num_vertices() || s.edges.size() != g.num_edges()) {
    return false;
  }
  return std::all_of(s.vertices.begin(), s.vertices.end(), [](bool b) { return b; }) &&
         std::all_of(s.edges.begin(), s.edges.end(), [](bool b) { return b; });
}

}  // namespace mgenv
