#include "mgenv/quasiconvex_envelope.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mgenv/convex_envelope.hpp"

namespace mgenv {

QuasiBoundedness check_boundedness_quasi(const MetricGraph& g, const Datum& datum) {
  QuasiBoundedness out;
  const std::vector<GraphPoint> points = datum.points();
  out.subdivision = subdivide_at(g, points);
  out.hull = convex_hull(out.subdivision.graph, out.subdivision.point_nodes);
  out.bounded = is_whole_graph(out.subdivision.graph, out.hull);
  return out;
}

bool QuasiCertificate::passed() const {
  return relation_failures.empty() && edge_rule_failures.empty() && below_datum &&
         values_in_datum_set && !counterexample && dominates_convex.value_or(true);
}

namespace {

std::vector<double> edge_max_values(const MetricGraph& g, const std::vector<double>& u) {
  std::vector<double> out;
  out.reserve(g.num_edges());
  for (const Edge& e : g.edges()) out.push_back(std::max(u[e.tail], u[e.head]));
  return out;
}

std::vector<VertexId> distinct_neighbors(const MetricGraph& g, VertexId v) {
  std::set<VertexId> s;
  for (const Incidence& inc : g.incident(v)) s.insert(inc.neighbor);
  return {s.begin(), s.end()};
}

}  // namespace

QuasiSolveReport solve_quasiconvex(const MetricGraph& g, const Datum& datum,
                                   const SampleOptions& check_opts) {
  QuasiBoundedness b = check_boundedness_quasi(g, datum);
  if (!b.bounded) {
    std::ostringstream msg;
    msg << "hull of the datum is not the whole graph (hull vertices:";
    for (VertexId v : b.hull.vertex_list()) msg << ' ' << b.subdivision.graph.vertex_name(v);
    msg << "); the quasiconvex envelope is unbounded";
    throw UnboundedEnvelope(msg.str(), b.hull.vertex_list());
  }

  QuasiSolveReport report;
  report.subdivision = std::move(b.subdivision);
  const MetricGraph& sg = report.subdivision.graph;
  const std::size_t n = sg.num_vertices();
  const DistanceTable table(sg);

  // For every node z, the node pairs {p, q} with z on a minimal path.
  std::vector<std::vector<std::pair<VertexId, VertexId>>> constraints(n);
  for (VertexId z = 0; z < n; ++z) {
    for (VertexId p = 0; p < n; ++p) {
      if (p == z) continue;
      for (VertexId q = p + 1; q < n; ++q) {
        if (q != z && on_minimal_path(sg, table, p, z, q)) constraints[z].emplace_back(p, q);
      }
    }
  }

  std::vector<double> u(n, datum.max_value());
  for (std::size_t i = 0; i < datum.size(); ++i) {
    u[report.subdivision.point_nodes[i]] = datum.entries()[i].value;
  }

  bool changed = true;
  while (changed) {
    changed = false;
    ++report.sweeps;
    for (VertexId z = 0; z < n; ++z) {
      for (auto [p, q] : constraints[z]) {
        const double cap = std::max(u[p], u[q]);
        if (cap < u[z]) {
          u[z] = cap;
          changed = true;
        }
      }
    }
  }

  report.nodal = PwcFunction::from_nodal(sg, u, edge_max_values(sg, u));
  report.function = from_subdivision(g, report.subdivision, report.nodal);
  report.certificate = certify_quasiconvex(g, datum, report.function, check_opts);
  return report;
}

PwcFunction adjacent_pair_fixed_point(const MetricGraph& g, const Datum& datum) {
  const std::vector<GraphPoint> points = datum.points();
  Subdivision sub = subdivide_at(g, points);
  const MetricGraph& sg = sub.graph;
  std::vector<bool> in_datum(sg.num_vertices(), false);
  std::vector<double> u(sg.num_vertices(), datum.max_value());
  for (std::size_t i = 0; i < points.size(); ++i) {
    u[sub.point_nodes[i]] = datum.entries()[i].value;
    in_datum[sub.point_nodes[i]] = true;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId v = 0; v < sg.num_vertices(); ++v) {
      if (in_datum[v]) continue;
      const auto nb = distinct_neighbors(sg, v);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          const double cap = std::max(u[nb[i]], u[nb[j]]);
          if (cap < u[v]) {
            u[v] = cap;
            changed = true;
          }
        }
      }
    }
  }
  PwcFunction nodal = PwcFunction::from_nodal(sg, u, edge_max_values(sg, u));
  return from_subdivision(g, sub, nodal);
}

QuasiCertificate certify_quasiconvex(const MetricGraph& g, const Datum& datum,
                                     const PwcFunction& u, const SampleOptions& opts) {
  std::vector<GraphPoint> points = datum.points();
  const std::size_t num_datum = points.size();
  for (const GraphPoint& p : interior_breakpoints(u)) points.push_back(p);
  Subdivision sub = subdivide_at(g, points);
  const MetricGraph& sg = sub.graph;
  const PwcFunction us = to_subdivision(sub, u);
  const DistanceTable table(sg);

  std::vector<bool> in_datum(sg.num_vertices(), false);
  for (std::size_t i = 0; i < num_datum; ++i) in_datum[sub.point_nodes[i]] = true;

  QuasiCertificate cert;
  for (VertexId v = 0; v < sg.num_vertices(); ++v) {
    if (in_datum[v] || sg.degree(v) < 2) continue;
    const auto nb = distinct_neighbors(sg, v);
    std::optional<double> relation;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (!on_minimal_path(sg, table, nb[i], v, nb[j])) continue;
        const double m = std::max(us.vertex_value(nb[i]), us.vertex_value(nb[j]));
        relation = relation ? std::min(*relation, m) : m;
      }
    }
    if (relation && *relation != us.vertex_value(v)) {
      cert.relation_failures.push_back(sub.node_origin[v]);
    }
  }
  for (const Edge& e : sg.edges()) {
    const double expected = std::max(us.vertex_value(e.tail), us.vertex_value(e.head));
    if (us.on_edge(e.id).pieces[0] != expected) {
      cert.edge_rule_failures.push_back(
          sub.to_original(EdgePoint{e.id, 0.5 * e.length}));
    }
  }

  std::set<double> allowed;
  for (const DatumEntry& entry : datum.entries()) {
    allowed.insert(entry.value);
    const double slack = entry.value - u.eval(entry.point);
    cert.datum_slack.push_back(slack);
    if (slack < 0.0) cert.below_datum = false;
  }
  for (double value : u.distinct_values()) {
    if (!allowed.count(value)) cert.values_in_datum_set = false;
  }

  cert.counterexample = check_quasiconvex_sampled(g, u, opts);

  try {
    const EnvelopeReport convex = solve_convex(g, datum);
    const double tol = slope_tolerance(std::max(std::abs(datum.min_value()),
                                                std::abs(datum.max_value())));
    bool dominates = true;
    for (VertexId v = 0; v < sg.num_vertices(); ++v) {
      const GraphPoint at = sub.node_origin[v];
      if (u.eval(at) < convex.function.eval(at) - tol) dominates = false;
    }
    cert.dominates_convex = dominates;
  } catch (const UnboundedEnvelope&) {
  } catch (const AssumptionViolated&) {
  }
  return cert;
}

}  // namespace mgenv
