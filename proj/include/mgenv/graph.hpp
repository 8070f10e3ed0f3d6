#ifndef MGENV_GRAPH_HPP
#define MGENV_GRAPH_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mgenv {

using VertexId = std::size_t;
using EdgeId = std::size_t;

/// An oriented edge e = (tail, head) with arc length.  The orientation only
/// fixes the coordinate direction: coordinate 0 is the tail, `length` the head.
struct Edge {
  EdgeId id = 0;
  VertexId tail = 0;
  VertexId head = 0;
  double length = 0.0;

  VertexId other(VertexId v) const { return v == tail ? head : tail; }
};

/// Input record for MetricGraph::build.
struct EdgeSpec {
  std::string name;
  VertexId tail = 0;
  VertexId head = 0;
  double length = 0.0;
};

struct Incidence {
  EdgeId edge = 0;
  VertexId neighbor = 0;
};

enum class GraphErrorKind {
  EmptyGraph,
  LoopEdge,
  NonpositiveLength,
  DisconnectedGraph,
  UnknownVertex,
  DuplicateName,
  InvalidPoint,
  DuplicatePoint,
  NonfiniteValue,
  EmptyDatum,
};

const char* to_string(GraphErrorKind kind);

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  GraphErrorKind kind() const { return kind_; }

 private:
  GraphErrorKind kind_;
};

/// Compact, connected, loop-free metric graph.  Parallel edges are allowed.
/// Immutable once built.
class MetricGraph {
 public:
  /// Empty placeholder; only build() produces a valid graph.
  MetricGraph() = default;

  /// Validates and builds.  Throws GraphError.
  static MetricGraph build(std::vector<std::string> vertex_names,
                           std::vector<EdgeSpec> edges);
  /// Convenience overload: vertices named v0..v{n-1}, edges e0..e{m-1}.
  static MetricGraph build(std::size_t num_vertices,
                           const std::vector<EdgeSpec>& edges);

  std::size_t num_vertices() const { return vertex_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Incidence> incident(VertexId v) const {
    return adjacency_.at(v);
  }
  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }
  bool is_terminal(VertexId v) const { return degree(v) == 1; }

  const std::string& vertex_name(VertexId v) const {
    return vertex_names_.at(v);
  }
  const std::string& edge_name(EdgeId e) const { return edge_names_.at(e); }
  std::span<const std::string> vertex_names() const { return vertex_names_; }
  std::span<const std::string> edge_names() const { return edge_names_; }
  std::optional<VertexId> find_vertex(const std::string& name) const;
  std::optional<EdgeId> find_edge(const std::string& name) const;

  double total_length() const { return total_length_; }
  double min_edge_length() const;

  /// Same graph with the stored orientation of `e` flipped.
  MetricGraph with_reversed_edge(EdgeId e) const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  double total_length_ = 0.0;
};

std::vector<VertexId> terminal_vertices(const MetricGraph& g);

struct VertexPoint {
  VertexId vertex = 0;
  bool operator==(const VertexPoint&) const = default;
};

/// A point strictly inside an edge, 0 < t < length.
struct EdgePoint {
  EdgeId edge = 0;
  double t = 0.0;
  bool operator==(const EdgePoint&) const = default;
};

using GraphPoint = std::variant<VertexPoint, EdgePoint>;

inline GraphPoint at_vertex(VertexId v) { return VertexPoint{v}; }

/// Canonical point at coordinate `t` of edge `e`; t = 0 and t = length map to
/// the tail and head vertices.  Throws GraphError(InvalidPoint) outside
/// [0, length].
GraphPoint point_on_edge(const MetricGraph& g, EdgeId e, double t);

/// The point at coordinate `s` measured along the reversal of edge `e`.
GraphPoint point_on_reversed_edge(const MetricGraph& g, EdgeId e, double s);

GraphPoint canonical(const MetricGraph& g, const GraphPoint& p);

bool is_vertex(const GraphPoint& p);

/// Strict total order used for deterministic output.
bool point_less(const GraphPoint& a, const GraphPoint& b);

/// Vertex name, or "edge@t" for interior points.
std::string describe(const MetricGraph& g, const GraphPoint& p);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_real(double x);

struct DatumEntry {
  GraphPoint point;
  double value = 0.0;
};

/// Finite data set A with values f.  Points canonical and pairwise distinct.
class Datum {
 public:
  Datum() = default;
  /// Canonicalizes and validates.  Throws GraphError.
  static Datum build(const MetricGraph& g, std::vector<DatumEntry> entries);

  std::span<const DatumEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::vector<GraphPoint> points() const;
  std::optional<double> value_at(const GraphPoint& p) const;
  double min_value() const;
  double max_value() const;

 private:
  std::vector<DatumEntry> entries_;
};

/// Result of splitting edges at interior points.  Original vertices keep their
/// ids; new vertices are appended ordered by (edge id, coordinate).  Each
/// original edge maps to a chain of sub-edges that keep its orientation.
struct Subdivision {
  struct Piece {
    EdgeId sub_edge = 0;
    double start = 0.0;  // coordinate range on the original edge
    double end = 0.0;
  };

  MetricGraph graph;
  /// Sub-graph node of every requested point, in request order.
  std::vector<VertexId> point_nodes;
  /// Original location of every sub-graph vertex.
  std::vector<GraphPoint> node_origin;
  /// Sub-edge chain of every original edge, ordered tail to head.
  std::vector<std::vector<Piece>> pieces;
  /// Original edge and offset of every sub-edge.
  std::vector<EdgeId> parent_edge;
  std::vector<double> parent_offset;

  GraphPoint to_sub(const GraphPoint& original) const;
  GraphPoint to_original(const GraphPoint& sub) const;
  /// Sub-graph node at an original point; std::nullopt if it is not a node.
  std::optional<VertexId> node_at(const GraphPoint& original) const;
};

Subdivision subdivide_at(const MetricGraph& g,
                         std::span<const GraphPoint> points);

}  // namespace mgenv

#endif  // MGENV_GRAPH_HPP
