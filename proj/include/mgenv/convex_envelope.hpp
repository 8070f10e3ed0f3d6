#ifndef MGENV_CONVEX_ENVELOPE_HPP
#define MGENV_CONVEX_ENVELOPE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "mgenv/envelope_errors.hpp"
#include "mgenv/functions.hpp"
#include "mgenv/graph.hpp"

namespace mgenv {

enum class SweepOrder { GaussSeidel, Jacobi };

struct ConvexSolveParams {
  double tolerance = 1e-12;  // sup-norm change per sweep
  std::size_t max_sweeps = 1'000'000;
  SweepOrder order = SweepOrder::GaussSeidel;
};

struct ConvexBoundedness {
  bool bounded = false;
  std::optional<VertexId> witness;  // a terminal vertex outside the datum
};

/// Bounded iff every terminal vertex is a datum point.
ConvexBoundedness check_boundedness_convex(const MetricGraph& g, const Datum& datum);

/// A residual attached to a node of the certificate's subdivision, reported
/// by its location on the original graph.
struct NodeResidual {
  GraphPoint point;
  double value = 0.0;
};

struct ConvexCertificate {
  double slope_tol = 0.0;
  std::vector<ConvexityViolation> convexity_violations;  // on the subdivision
  /// min_pair_slope at nodes outside the datum with degree >= 2; should be 0.
  std::vector<NodeResidual> vertex_residuals;
  double max_vertex_residual = 0.0;
  /// min(f - u, min_pair_slope) at non-terminal datum nodes; should be 0.
  std::vector<NodeResidual> complementarity;
  double max_complementarity = 0.0;
  /// f(p) - u(p), in datum order.
  std::vector<double> datum_slack;
  double min_datum_slack = 0.0;
  double datum_min = 0.0;
  double datum_max = 0.0;
  double function_min = 0.0;
  double function_max = 0.0;

  bool locally_convex() const { return convexity_violations.empty(); }
  bool bounds_ok() const;
  bool passed() const;
};

struct EnvelopeReport {
  PwlFunction function;  // on the input graph, breakpoints at datum points
  Subdivision subdivision;
  std::vector<double> node_values;  // on subdivision.graph
  std::size_t sweeps = 0;
  double final_change = 0.0;
  bool converged = false;
  ConvexCertificate certificate;
};

/// Largest convex function below the datum, by monotone value iteration on
/// the vertex values of the graph subdivided at the datum points.  Each
/// sweep replaces a free vertex value by the smallest chord value over pairs
/// of incident edges.  Throws UnboundedEnvelope or AssumptionViolated; a run
/// that exhausts max_sweeps returns with converged == false.
EnvelopeReport solve_convex(const MetricGraph& g, const Datum& datum,
                            const ConvexSolveParams& params = {});

/// Residual certificate for any PWL candidate on `g`.
ConvexCertificate certify_convex(const MetricGraph& g, const Datum& datum,
                                 const PwlFunction& u);

}  // namespace mgenv

#endif  // MGENV_CONVEX_ENVELOPE_HPP
