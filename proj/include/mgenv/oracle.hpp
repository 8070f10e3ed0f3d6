#ifndef MGENV_ORACLE_HPP
#define MGENV_ORACLE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mgenv/graph.hpp"

namespace mgenv {

// Brute-force envelopes on a uniform refinement of the graph.  Every node
// triple (p, z, q) with z on a minimal path from p to q contributes one
// definitional constraint; nothing here uses the local vertex conditions.

struct GridRefinement {
  double h = 0.0;
  /// Every edge cut into ceil(length / h) equal pieces, plus the datum points.
  Subdivision grid;
  /// Grid node of every datum entry.
  std::vector<VertexId> datum_nodes;
};

GridRefinement make_grid(const MetricGraph& g, const Datum& datum, double h);

struct OracleParams {
  double tolerance = 1e-10;
  std::size_t max_sweeps = 100'000;
};

struct OracleResult {
  std::vector<double> values;  // per grid node
  std::size_t sweeps = 0;
  double final_change = 0.0;
  bool converged = false;
};

/// Largest grid function below f on the datum nodes that satisfies every
/// chord inequality u(z) <= (d(q,z) u(p) + d(p,z) u(q)) / d(p,q).
OracleResult oracle_convex_envelope(const GridRefinement& grid, const Datum& datum,
                                    const OracleParams& params = {});

/// Same with u(z) <= max(u(p), u(q)).  Terminates exactly.
OracleResult oracle_quasiconvex_envelope(const GridRefinement& grid,
                                         const Datum& datum);

struct Comparison {
  double max_deviation = 0.0;
  std::optional<GraphPoint> worst;  // original-graph location
  bool passed = false;
};

/// Deviation between a solver output (evaluated on the original graph) and
/// oracle values at every grid node.
Comparison compare(const GridRefinement& grid,
                   const std::function<double(const GraphPoint&)>& solver,
                   std::span<const double> oracle_values, double tol);

}  // namespace mgenv

#endif  // MGENV_ORACLE_HPP
