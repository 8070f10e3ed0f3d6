#ifndef MGENV_QUASICONVEX_ENVELOPE_HPP
#define MGENV_QUASICONVEX_ENVELOPE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "mgenv/envelope_errors.hpp"
#include "mgenv/functions.hpp"
#include "mgenv/geometry.hpp"
#include "mgenv/graph.hpp"

namespace mgenv {

struct QuasiBoundedness {
  bool bounded = false;
  Subdivision subdivision;  // at the datum points
  Subset hull;              // hull of the datum nodes in subdivision.graph
};

/// Bounded iff the geodesic hull of the datum is the whole graph.
QuasiBoundedness check_boundedness_quasi(const MetricGraph& g, const Datum& datum);

struct QuasiCertificate {
  /// Nodes outside the datum (on the certificate's subdivision, reported by
  /// original location) where the vertex relation fails.
  std::vector<GraphPoint> relation_failures;
  /// Edges whose interior value is not the max of the endpoint values.
  std::vector<GraphPoint> edge_rule_failures;
  std::vector<double> datum_slack;  // f(p) - u(p), in datum order
  bool below_datum = true;
  bool values_in_datum_set = true;
  std::optional<Counterexample> counterexample;
  /// u >= convex envelope at every node; unset when that envelope could not
  /// be computed.
  std::optional<bool> dominates_convex;

  bool passed() const;
};

struct QuasiSolveReport {
  PwcFunction function;  // on the input graph
  Subdivision subdivision;
  PwcFunction nodal;     // on subdivision.graph, one constant per edge
  std::size_t sweeps = 0;
  QuasiCertificate certificate;
};

/// Largest quasiconvex function below the datum.  Node values are driven down
/// through every constraint u(z) <= max(u(p), u(q)) with z on a minimal path
/// from p to q; edge interiors take the max of their endpoint values.
/// Termination is exact.  Throws UnboundedEnvelope.
QuasiSolveReport solve_quasiconvex(const MetricGraph& g, const Datum& datum,
                                   const SampleOptions& check_opts = {});

/// Fixed point of the adjacent-pair vertex relation alone (no global path
/// constraints), extended to edges by the max rule.  This relation is
/// necessary but not sufficient; kept for diagnostics and regression tests.
PwcFunction adjacent_pair_fixed_point(const MetricGraph& g, const Datum& datum);

/// Certificate for any piecewise-constant candidate on `g`.  The vertex
/// relation is checked over adjacent pairs {p, q} with the node on a minimal
/// path from p to q.
QuasiCertificate certify_quasiconvex(const MetricGraph& g, const Datum& datum,
                                     const PwcFunction& u,
                                     const SampleOptions& opts = {});

}  // namespace mgenv

#endif  // MGENV_QUASICONVEX_ENVELOPE_HPP
