#include "mgenv/convex_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mgenv {

void require_same_edge_assumption(const MetricGraph& g) {
  SameEdgeReport report = check_same_edge_assumption(g);
  if (report.passed()) return;
  std::ostringstream msg;
  msg << "edge length exceeds the route around it:";
  for (EdgeId e : report.violations) msg << ' ' << g.edge_name(e);
  throw AssumptionViolated(msg.str(), report.violations);
}

ConvexBoundedness check_boundedness_convex(const MetricGraph& g, const Datum& datum) {
  for (VertexId v : terminal_vertices(g)) {
    if (!datum.value_at(VertexPoint{v})) return {false, v};
  }
  return {true, std::nullopt};
}

bool ConvexCertificate::bounds_ok() const {
  return function_min >= datum_min - slope_tol && function_max <= datum_max + slope_tol;
}

bool ConvexCertificate::passed() const {
  return locally_convex() && max_vertex_residual <= slope_tol &&
         max_complementarity <= slope_tol && min_datum_slack >= -slope_tol &&
         bounds_ok();
}

namespace {

// Incident-edge pair at a vertex with the chord weights of its two far ends.
struct ChordPair {
  VertexId p;
  VertexId q;
  double wp;  // weight of u(p): length of the edge towards q over the sum
  double wq;
};

std::vector<std::vector<ChordPair>> chord_pairs(const MetricGraph& g) {
  std::vector<std::vector<ChordPair>> out(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto incs = g.incident(v);
    for (std::size_t i = 0; i < incs.size(); ++i) {
      for (std::size_t j = i + 1; j < incs.size(); ++j) {
        const double li = g.edge(incs[i].edge).length;
        const double lj = g.edge(incs[j].edge).length;
        out[v].push_back({incs[i].neighbor, incs[j].neighbor, lj / (li + lj),
                          li / (li + lj)});
      }
    }
  }
  return out;
}

}  // namespace

EnvelopeReport solve_convex(const MetricGraph& g, const Datum& datum,
                            const ConvexSolveParams& params) {
  if (auto b = check_boundedness_convex(g, datum); !b.bounded) {
    throw UnboundedEnvelope("terminal vertex '" + g.vertex_name(*b.witness) +
                                "' is not a datum point; the convex envelope is unbounded",
                            {*b.witness});
  }
  require_same_edge_assumption(g);

  const std::vector<GraphPoint> points = datum.points();
  Subdivision sub = subdivide_at(g, points);
  const MetricGraph& sg = sub.graph;
  const std::size_t n = sg.num_vertices();

  std::vector<std::optional<double>> clamp(n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    clamp[sub.point_nodes[i]] = datum.entries()[i].value;
  }
  std::vector<double> u(n, datum.max_value());
  for (VertexId v = 0; v < n; ++v) {
    if (clamp[v]) u[v] = *clamp[v];
  }

  const auto pairs = chord_pairs(sg);
  auto updated = [&](VertexId v, const std::vector<double>& src) {
    if (sg.is_terminal(v)) return *clamp[v];
    double cap = std::numeric_limits<double>::infinity();
    for (const ChordPair& c : pairs[v]) cap = std::min(cap, c.wp * src[c.p] + c.wq * src[c.q]);
    if (clamp[v]) cap = std::min(cap, *clamp[v]);
    return std::min(cap, src[v]);
  };

  EnvelopeReport report;
  std::vector<double> previous;
  while (report.sweeps < params.max_sweeps) {
    ++report.sweeps;
    double change = 0.0;
    if (params.order == SweepOrder::Jacobi) {
      previous = u;
      for (VertexId v = 0; v < n; ++v) {
        u[v] = updated(v, previous);
        change = std::max(change, previous[v] - u[v]);
      }
    } else {
      for (VertexId v = 0; v < n; ++v) {
        const double old = u[v];
        u[v] = updated(v, u);
        change = std::max(change, old - u[v]);
      }
    }
    report.final_change = change;
    if (change <= params.tolerance) {
      report.converged = true;
      break;
    }
  }

  PwlFunction nodal = PwlFunction::from_vertex_values(sg, u);
  report.function = from_subdivision(g, sub, nodal);
  report.node_values = std::move(u);
  report.subdivision = std::move(sub);
  report.certificate = certify_convex(g, datum, report.function);
  return report;
}

ConvexCertificate certify_convex(const MetricGraph& g, const Datum& datum,
                                 const PwlFunction& u) {
  std::vector<GraphPoint> points = datum.points();
  const std::size_t num_datum = points.size();
  for (const GraphPoint& p : interior_breakpoints(u)) points.push_back(p);
  Subdivision sub = subdivide_at(g, points);
  const MetricGraph& sg = sub.graph;
  PwlFunction us = to_subdivision(sub, u);

  std::vector<std::optional<double>> f(sg.num_vertices());
  for (std::size_t i = 0; i < num_datum; ++i) {
    f[sub.point_nodes[i]] = datum.entries()[i].value;
  }

  ConvexCertificate cert;
  cert.datum_min = datum.min_value();
  cert.datum_max = datum.max_value();
  cert.slope_tol = slope_tolerance(std::max(std::abs(cert.datum_min),
                                            std::abs(cert.datum_max)));
  cert.convexity_violations = check_convex_local(sg, us, cert.slope_tol).violations;

  cert.function_min = std::numeric_limits<double>::infinity();
  cert.function_max = -std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < sg.num_vertices(); ++v) {
    const double uv = us.vertex_value(v);
    cert.function_min = std::min(cert.function_min, uv);
    cert.function_max = std::max(cert.function_max, uv);
    if (sg.degree(v) < 2) continue;
    const double slope = min_pair_slope(sg, us, v);
    if (!f[v]) {
      cert.vertex_residuals.push_back({sub.node_origin[v], slope});
      cert.max_vertex_residual = std::max(cert.max_vertex_residual, std::abs(slope));
    } else {
      const double comp = std::min(*f[v] - uv, slope);
      cert.complementarity.push_back({sub.node_origin[v], comp});
      cert.max_complementarity = std::max(cert.max_complementarity, std::abs(comp));
    }
  }

  cert.min_datum_slack = std::numeric_limits<double>::infinity();
  for (const DatumEntry& entry : datum.entries()) {
    const double slack = entry.value - u.eval(entry.point);
    cert.datum_slack.push_back(slack);
    cert.min_datum_slack = std::min(cert.min_datum_slack, slack);
  }
  return cert;
}

}  // namespace mgenv
