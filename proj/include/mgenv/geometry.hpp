#ifndef MGENV_GEOMETRY_HPP
#define MGENV_GEOMETRY_HPP

#include <vector>

#include "mgenv/graph.hpp"

namespace mgenv {

/// All-pairs shortest-path lengths between vertices (Dijkstra from every
/// vertex).  Read-only after construction.
class DistanceTable {
 public:
  explicit DistanceTable(const MetricGraph& g);

  double operator()(VertexId a, VertexId b) const { return d_[a * n_ + b]; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Geodesic distance between arbitrary points of the graph.
double distance(const MetricGraph& g, const DistanceTable& table,
                const GraphPoint& x, const GraphPoint& y);
double distance(const MetricGraph& g, const GraphPoint& x, const GraphPoint& y);

/// Equality tolerance for sums of path lengths: 1e-9 times the total length.
double distance_tolerance(const MetricGraph& g);

struct SameEdgeReport {
  std::vector<EdgeId> violations;
  bool passed() const { return violations.empty(); }
};

/// An edge passes iff its length does not exceed the shortest route between
/// its endpoints avoiding it.  When every edge passes, d(x, y) = |x - y| for
/// any two points of one edge.
SameEdgeReport check_same_edge_assumption(const MetricGraph& g);

struct PathStep {
  EdgeId edge = 0;
  bool forward = true;  // traversed tail -> head
  bool operator==(const PathStep&) const = default;
};

struct NodePath {
  VertexId start = 0;
  std::vector<PathStep> steps;
  double length = 0.0;

  VertexId end(const MetricGraph& g) const;
};

/// Every shortest path from p to q, ordered lexicographically by edge ids.
std::vector<NodePath> all_minimal_paths(const MetricGraph& g, VertexId p,
                                        VertexId q);

/// d(p, z) + d(z, q) = d(p, q) within distance_tolerance(g).
bool on_minimal_path(const MetricGraph& g, const DistanceTable& table,
                     VertexId p, VertexId z, VertexId q);
bool on_minimal_path(const MetricGraph& g, VertexId p, VertexId z, VertexId q);

/// True iff the whole edge `e` lies on some minimal path from p to q.
bool edge_on_minimal_path(const MetricGraph& g, const DistanceTable& table,
                          VertexId p, EdgeId e, VertexId q);

/// Vertices plus fully contained edges.
struct Subset {
  std::vector<bool> vertices;
  std::vector<bool> edges;

  static Subset empty_of(const MetricGraph& g);
  bool operator==(const Subset&) const = default;
  bool contains(const Subset& other) const;
  std::vector<VertexId> vertex_list() const;
  std::vector<EdgeId> edge_list() const;
};

/// Smallest subset containing `seeds` that is closed under minimal paths
/// between its vertices.  Ties between minimal paths include all of them.
Subset convex_hull(const MetricGraph& g, const DistanceTable& table,
                   const std::vector<VertexId>& seeds);
Subset convex_hull(const MetricGraph& g, const std::vector<VertexId>& seeds);

bool is_whole_graph(const MetricGraph& g, const Subset& s);

}  // namespace mgenv

#endif  // MGENV_GEOMETRY_HPP
