#ifndef MGENV_FUNCTIONS_HPP
#define MGENV_FUNCTIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mgenv/geometry.hpp"
#include "mgenv/graph.hpp"

namespace mgenv {

class FunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Breakpoint {
  double t = 0.0;
  double value = 0.0;
  bool operator==(const Breakpoint&) const = default;
};

/// Continuous function, linear between breakpoints on every edge.  Each edge
/// carries breakpoints from t = 0 to t = length, strictly increasing.
class PwlFunction {
 public:
  PwlFunction() = default;

  /// Linear on every edge between the given vertex values.
  static PwlFunction from_vertex_values(const MetricGraph& g,
                                        std::vector<double> values);
  /// Validates ordering, endpoint coordinates and continuity at vertices.
  static PwlFunction from_breakpoints(const MetricGraph& g,
                                     std::vector<std::vector<Breakpoint>> edges);

  double vertex_value(VertexId v) const { return vertex_values_.at(v); }
  std::span<const double> vertex_values() const { return vertex_values_; }
  std::span<const Breakpoint> on_edge(EdgeId e) const { return edges_.at(e); }
  std::size_t num_edges() const { return edges_.size(); }

  double eval(const GraphPoint& p) const;
  /// Largest |value| over all breakpoints.
  double max_abs() const;

 private:
  std::vector<double> vertex_values_;
  std::vector<std::vector<Breakpoint>> edges_;
};

/// Values of a piecewise-constant function along one edge: `pieces[k]` holds
/// on the open interval between consecutive interior breakpoints, which carry
/// their own point values.
struct EdgeLevels {
  std::vector<Breakpoint> points;
  std::vector<double> pieces;
  bool operator==(const EdgeLevels&) const = default;
};

/// Piecewise-constant function; jumps are allowed at vertices and interior
/// breakpoints, so vertex values are stored separately from edge values.
class PwcFunction {
 public:
  PwcFunction() = default;

  static PwcFunction build(const MetricGraph& g, std::vector<double> vertex_values,
                           std::vector<EdgeLevels> edges);
  /// One constant per edge.
  static PwcFunction from_nodal(const MetricGraph& g,
                                std::vector<double> vertex_values,
                                std::vector<double> edge_values);

  double vertex_value(VertexId v) const { return vertex_values_.at(v); }
  std::span<const double> vertex_values() const { return vertex_values_; }
  const EdgeLevels& on_edge(EdgeId e) const { return edges_.at(e); }
  std::size_t num_edges() const { return edges_.size(); }
  /// True when no edge has interior breakpoints.
  bool is_nodal() const;

  double eval(const GraphPoint& p) const;
  /// Sorted distinct values taken anywhere.
  std::vector<double> distinct_values() const;
  double max_abs() const;

  bool operator==(const PwcFunction&) const = default;

 private:
  std::vector<double> vertex_values_;
  std::vector<EdgeLevels> edges_;
};

std::vector<GraphPoint> interior_breakpoints(const PwlFunction& u);
std::vector<GraphPoint> interior_breakpoints(const PwcFunction& u);

/// Re-expresses `u` (on the original graph) on a subdivision of it.
PwlFunction to_subdivision(const Subdivision& sub, const PwlFunction& u);
PwcFunction to_subdivision(const Subdivision& sub, const PwcFunction& u);
/// Inverse of to_subdivision.  Subdivision nodes become breakpoints.
PwlFunction from_subdivision(const MetricGraph& original, const Subdivision& sub,
                             const PwlFunction& u_sub);
PwcFunction from_subdivision(const MetricGraph& original, const Subdivision& sub,
                             const PwcFunction& u_sub);

/// Slope tolerance 1e-9 * max(1, scale).
double slope_tolerance(double scale);

/// Derivative at `v` in the direction pointing into `e`, taken from the piece
/// of `e` adjacent to `v`.  Throws FunctionError if `e` is not incident.
double ingoing_derivative(const MetricGraph& g, const PwlFunction& u, VertexId v,
                          EdgeId e);

/// Minimum over unordered pairs of distinct incident edges of the sum of
/// ingoing derivatives.  Throws FunctionError for degree-1 vertices.
double min_pair_slope(const MetricGraph& g, const PwlFunction& u, VertexId v);

struct ConvexityViolation {
  enum class Kind { EdgeKink, VertexPeak };
  Kind kind = Kind::EdgeKink;
  VertexId vertex = 0;  // VertexPeak
  EdgeId edge = 0;      // EdgeKink
  double t = 0.0;       // EdgeKink coordinate
  double amount = 0.0;  // slope deficit
};

struct LocalConvexityReport {
  std::vector<ConvexityViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Slopes non-decreasing along every edge and min_pair_slope >= -tol at every
/// interior vertex.  On a PWL function this is equivalent to convexity.
LocalConvexityReport check_convex_local(const MetricGraph& g,
                                        const PwlFunction& u, double tol);

struct SampleOptions {
  std::size_t budget = 10000;  // (x, y) pairs examined
  std::uint64_t seed = 1;
  std::size_t points_per_edge = 3;
};

/// A triple with z on a minimal path from x to y that breaks the inequality.
struct Counterexample {
  GraphPoint x;
  GraphPoint y;
  GraphPoint z;
  double ux = 0.0;
  double uy = 0.0;
  double uz = 0.0;
  double bound = 0.0;
};

/// Candidates are all vertices, the breakpoints of `u` and a low-discrepancy
/// set of edge points.  Returns the lexicographically first violating triple.
std::optional<Counterexample> check_convex_sampled(const MetricGraph& g,
                                                   const PwlFunction& u,
                                                   const SampleOptions& opts,
                                                   double tol);
std::optional<Counterexample> check_quasiconvex_sampled(const MetricGraph& g,
                                                        const PwcFunction& u,
                                                        const SampleOptions& opts,
                                                        double tol = 0.0);
std::optional<Counterexample> check_quasiconvex_sampled(const MetricGraph& g,
                                                        const PwlFunction& u,
                                                        const SampleOptions& opts,
                                                        double tol);

struct SublevelSet {
  Subset set;
  bool convex = false;
};

/// {u <= alpha} for a nodal PWC function: vertices at or below alpha and the
/// edges whose value and both endpoint values are at or below alpha.
SublevelSet sublevel_set(const MetricGraph& g, const PwcFunction& u, double alpha);

}  // namespace mgenv

#endif  // MGENV_FUNCTIONS_HPP
