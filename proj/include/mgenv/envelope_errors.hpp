#ifndef MGENV_ENVELOPE_ERRORS_HPP
#define MGENV_ENVELOPE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "mgenv/geometry.hpp"
#include "mgenv/graph.hpp"

namespace mgenv {

/// The envelope is +infinity somewhere.  For the convex envelope the witness
/// is a terminal vertex missing from the datum; for the quasiconvex envelope
/// it is the hull of the datum (a proper subset of the subdivided graph).
class UnboundedEnvelope : public std::runtime_error {
 public:
  UnboundedEnvelope(const std::string& what, std::vector<VertexId> witness_vertices)
      : std::runtime_error(what), witness_vertices_(std::move(witness_vertices)) {}

  const std::vector<VertexId>& witness_vertices() const { return witness_vertices_; }

 private:
  std::vector<VertexId> witness_vertices_;
};

/// Some edge is longer than the route between its endpoints avoiding it.
class AssumptionViolated : public std::runtime_error {
 public:
  AssumptionViolated(const std::string& what, std::vector<EdgeId> edges)
      : std::runtime_error(what), edges_(std::move(edges)) {}

  const std::vector<EdgeId>& edges() const { return edges_; }

 private:
  std::vector<EdgeId> edges_;
};

/// Throws AssumptionViolated unless check_same_edge_assumption passes.
void require_same_edge_assumption(const MetricGraph& g);

}  // namespace mgenv

#endif  // MGENV_ENVELOPE_ERRORS_HPP
