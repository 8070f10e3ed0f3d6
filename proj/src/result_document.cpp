#include "mgenv/result_document.hpp"

#include <cmath>

namespace mgenv {
namespace {

ParseError schema_error(const std::string& field, const std::string& message) {
  return ParseError(ParseErrorKind::SyntaxError, 0, field, message);
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw schema_error(key, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double real(const Json& j, const std::string& field) {
  if (!j.is_number()) throw schema_error(field, "expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& field) {
  if (!j.is_string()) throw schema_error(field, "expected a string");
  return j.get<std::string>();
}

Json vertex_values_json(const MetricGraph& g, std::span<const double> values) {
  Json out = Json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out.push_back({{"vertex", g.vertex_name(v)}, {"value", values[v]}});
  }
  return out;
}

std::vector<double> vertex_values_from_json(const MetricGraph& g, const Json& j) {
  if (!j.is_array() || j.size() != g.num_vertices()) {
    throw schema_error("function.vertices", "expected one entry per vertex");
  }
  std::vector<double> values(g.num_vertices());
  std::vector<bool> seen(g.num_vertices(), false);
  for (const Json& entry : j) {
    const std::string name = text(member(entry, "vertex"), "function.vertices.vertex");
    auto v = g.find_vertex(name);
    if (!v) {
      throw ParseError(ParseErrorKind::UnknownReference, 0, "function.vertices",
                       "unknown vertex '" + name + "'");
    }
    values[*v] = real(member(entry, "value"), "function.vertices.value");
    seen[*v] = true;
  }
  for (bool s : seen) {
    if (!s) throw schema_error("function.vertices", "missing a vertex value");
  }
  return values;
}

EdgeId edge_from_json(const MetricGraph& g, const Json& entry) {
  const std::string name = text(member(entry, "edge"), "function.edges.edge");
  auto e = g.find_edge(name);
  if (!e) {
    throw ParseError(ParseErrorKind::UnknownReference, 0, "function.edges",
                     "unknown edge '" + name + "'");
  }
  return *e;
}

std::vector<Breakpoint> breakpoints_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw schema_error(field, "expected an array of [t, value]");
  std::vector<Breakpoint> out;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw schema_error(field, "expected [t, value]");
    out.push_back({real(pair[0], field), real(pair[1], field)});
  }
  return out;
}

Json breakpoints_json(std::span<const Breakpoint> bps) {
  Json out = Json::array();
  for (const Breakpoint& b : bps) out.push_back(Json::array({b.t, b.value}));
  return out;
}

Json residuals_json(const MetricGraph& g, const std::vector<NodeResidual>& rs) {
  Json out = Json::array();
  for (const NodeResidual& r : rs) {
    out.push_back({{"point", point_to_json(g, r.point)}, {"value", r.value}});
  }
  return out;
}

Json points_json(const MetricGraph& g, const std::vector<GraphPoint>& ps) {
  Json out = Json::array();
  for (const GraphPoint& p : ps) out.push_back(point_to_json(g, p));
  return out;
}

}  // namespace

Json point_to_json(const MetricGraph& g, const GraphPoint& p) {
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    return {{"edge", g.edge_name(ep->edge)}, {"t", ep->t}};
  }
  return g.vertex_name(std::get<VertexPoint>(p).vertex);
}

GraphPoint point_from_json(const MetricGraph& g, const Json& j) {
  if (j.is_string()) return parse_point(g, j.get<std::string>());
  const std::string name = text(member(j, "edge"), "point.edge");
  auto e = g.find_edge(name);
  if (!e) {
    throw ParseError(ParseErrorKind::UnknownReference, 0, "point",
                     "unknown edge '" + name + "'");
  }
  try {
    return point_on_edge(g, *e, real(member(j, "t"), "point.t"));
  } catch (const GraphError& err) {
    throw schema_error("point", err.what());
  }
}

Json problem_to_json(const Problem& problem) {
  const MetricGraph& g = problem.graph;
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"id", g.edge_name(e.id)},
                     {"tail", g.vertex_name(e.tail)},
                     {"head", g.vertex_name(e.head)},
                     {"length", e.length}});
  }
  Json datum = Json::array();
  if (problem.datum) {
    for (const DatumEntry& entry : problem.datum->entries()) {
      datum.push_back({{"point", point_to_json(g, entry.point)}, {"value", entry.value}});
    }
  }
  Json out;
  out["vertices"] = Json(std::vector<std::string>(g.vertex_names().begin(),
                                                  g.vertex_names().end()));
  out["edges"] = std::move(edges);
  out["datum"] = std::move(datum);
  return out;
}

Problem problem_from_json(const Json& j) {
  std::vector<std::string> names;
  for (const Json& v : member(j, "vertices")) names.push_back(text(v, "problem.vertices"));
  std::vector<EdgeSpec> specs;
  for (const Json& e : member(j, "edges")) {
    auto find = [&](const char* key) {
      const std::string name = text(member(e, key), std::string("problem.edges.") + key);
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) {
        throw ParseError(ParseErrorKind::UnknownReference, 0, "problem.edges",
                         "unknown vertex '" + name + "'");
      }
      return static_cast<VertexId>(it - names.begin());
    };
    specs.push_back(EdgeSpec{text(member(e, "id"), "problem.edges.id"), find("tail"),
                             find("head"), real(member(e, "length"), "problem.edges.length")});
  }
  Problem problem;
  try {
    problem.graph = MetricGraph::build(std::move(names), std::move(specs));
    const Json& datum = member(j, "datum");
    if (!datum.empty()) {
      std::vector<DatumEntry> entries;
      for (const Json& d : datum) {
        entries.push_back({point_from_json(problem.graph, member(d, "point")),
                           real(member(d, "value"), "problem.datum.value")});
      }
      problem.datum = Datum::build(problem.graph, std::move(entries));
    }
  } catch (const GraphError& err) {
    throw ParseError(ParseErrorKind::InvalidGraph, 0, to_string(err.kind()), err.what());
  }
  return problem;
}

Json function_to_json(const MetricGraph& g, const PwlFunction& u) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({{"edge", g.edge_name(e.id)}, {"breakpoints", breakpoints_json(u.on_edge(e.id))}});
  }
  Json out;
  out["vertices"] = vertex_values_json(g, u.vertex_values());
  out["edges"] = std::move(edges);
  return out;
}

Json function_to_json(const MetricGraph& g, const PwcFunction& u) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) {
    const EdgeLevels& lv = u.on_edge(e.id);
    if (lv.points.empty()) {
      edges.push_back({{"edge", g.edge_name(e.id)}, {"value", lv.pieces[0]}});
    } else {
      edges.push_back({{"edge", g.edge_name(e.id)},
                       {"points", breakpoints_json(lv.points)},
                       {"pieces", lv.pieces}});
    }
  }
  Json out;
  out["vertices"] = vertex_values_json(g, u.vertex_values());
  out["edges"] = std::move(edges);
  return out;
}

Json certificate_to_json(const MetricGraph& g, const ConvexCertificate& cert) {
  Json out;
  out["passed"] = cert.passed();
  out["slope_tolerance"] = cert.slope_tol;
  out["locally_convex"] = cert.locally_convex();
  out["max_vertex_residual"] = cert.max_vertex_residual;
  out["vertex_residuals"] = residuals_json(g, cert.vertex_residuals);
  out["max_complementarity"] = cert.max_complementarity;
  out["complementarity"] = residuals_json(g, cert.complementarity);
  out["min_datum_slack"] = cert.min_datum_slack;
  out["datum_slack"] = cert.datum_slack;
  out["bounds"] = {{"datum_min", cert.datum_min},
                   {"datum_max", cert.datum_max},
                   {"function_min", cert.function_min},
                   {"function_max", cert.function_max},
                   {"ok", cert.bounds_ok()}};
  return out;
}

Json certificate_to_json(const MetricGraph& g, const QuasiCertificate& cert) {
  Json out;
  out["passed"] = cert.passed();
  out["vertex_relation_holds"] = cert.relation_failures.empty();
  out["relation_failures"] = points_json(g, cert.relation_failures);
  out["edge_rule_failures"] = points_json(g, cert.edge_rule_failures);
  out["below_datum"] = cert.below_datum;
  out["datum_slack"] = cert.datum_slack;
  out["values_in_datum_set"] = cert.values_in_datum_set;
  if (cert.counterexample) {
    const Counterexample& c = *cert.counterexample;
    out["quasiconvexity_counterexample"] = {
        {"x", point_to_json(g, c.x)}, {"y", point_to_json(g, c.y)},
        {"z", point_to_json(g, c.z)}, {"u_x", c.ux}, {"u_y", c.uy},
        {"u_z", c.uz}, {"bound", c.bound}};
  } else {
    out["quasiconvexity_counterexample"] = nullptr;
  }
  if (cert.dominates_convex) {
    out["dominates_convex"] = *cert.dominates_convex;
  } else {
    out["dominates_convex"] = nullptr;
  }
  return out;
}

Json result_document(const Problem& problem, const EnvelopeReport& report) {
  const MetricGraph& g = problem.graph;
  const bool ok = report.converged && report.certificate.passed();
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "convex";
  out["status"] = !report.converged ? "no_convergence" : (ok ? "success" : "certificate_failed");
  out["problem"] = problem_to_json(problem);
  out["function"] = function_to_json(g, report.function);
  out["certificate"] = certificate_to_json(g, report.certificate);
  out["convergence"] = {{"sweeps", report.sweeps},
                        {"final_change", report.final_change},
                        {"converged", report.converged}};
  return out;
}

Json result_document(const Problem& problem, const PwcFunction& u,
                     const QuasiCertificate& cert) {
  const MetricGraph& g = problem.graph;
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = "quasiconvex";
  out["status"] = cert.passed() ? "success" : "certificate_failed";
  out["problem"] = problem_to_json(problem);
  out["function"] = function_to_json(g, u);
  out["certificate"] = certificate_to_json(g, cert);
  out["convergence"] = {{"sweeps", 0}, {"final_change", 0.0}, {"converged", true}};
  return out;
}

Json result_document(const Problem& problem, const QuasiSolveReport& report) {
  Json out = result_document(problem, report.function, report.certificate);
  out["convergence"]["sweeps"] = report.sweeps;
  return out;
}

ResultDocument parse_result(const Json& j) {
  ResultDocument doc;
  const Json& version = member(j, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    throw schema_error("schema_version", "unsupported schema version");
  }
  doc.schema_version = version.get<int>();
  const std::string kind = text(member(j, "kind"), "kind");
  if (kind == "convex") {
    doc.kind = EnvelopeKind::Convex;
  } else if (kind == "quasiconvex") {
    doc.kind = EnvelopeKind::Quasiconvex;
  } else {
    throw schema_error("kind", "unknown kind '" + kind + "'");
  }
  doc.status = text(member(j, "status"), "status");
  if (doc.status == "unbounded") {
    throw schema_error("status", "an unbounded result carries no function");
  }
  doc.problem = problem_from_json(member(j, "problem"));
  const MetricGraph& g = doc.problem.graph;

  const Json& fn = member(j, "function");
  std::vector<double> vertex_values = vertex_values_from_json(g, member(fn, "vertices"));
  const Json& edges = member(fn, "edges");
  if (!edges.is_array() || edges.size() != g.num_edges()) {
    throw schema_error("function.edges", "expected one entry per edge");
  }
  try {
    if (doc.kind == EnvelopeKind::Convex) {
      std::vector<std::vector<Breakpoint>> bps(g.num_edges());
      for (const Json& entry : edges) {
        bps[edge_from_json(g, entry)] =
            breakpoints_from_json(member(entry, "breakpoints"), "function.edges.breakpoints");
      }
      PwlFunction u = PwlFunction::from_breakpoints(g, std::move(bps));
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (u.vertex_value(v) != vertex_values[v]) {
          throw schema_error("function.vertices",
                             "vertex value of '" + g.vertex_name(v) +
                                 "' disagrees with its edges");
        }
      }
      doc.function = std::move(u);
    } else {
      std::vector<EdgeLevels> levels(g.num_edges());
      for (const Json& entry : edges) {
        EdgeLevels& lv = levels[edge_from_json(g, entry)];
        if (entry.contains("value")) {
          lv.pieces = {real(entry.at("value"), "function.edges.value")};
        } else {
          lv.points = breakpoints_from_json(member(entry, "points"), "function.edges.points");
          for (const Json& c : member(entry, "pieces")) {
            lv.pieces.push_back(real(c, "function.edges.pieces"));
          }
        }
      }
      doc.function = PwcFunction::build(g, std::move(vertex_values), std::move(levels));
    }
  } catch (const FunctionError& err) {
    throw schema_error("function", err.what());
  }
  if (j.contains("certificate")) doc.certificate = j.at("certificate");
  if (j.contains("convergence")) doc.convergence = j.at("convergence");
  return doc;
}

ResultDocument parse_result(const std::string& text_in) {
  Json j;
  try {
    j = Json::parse(text_in);
  } catch (const nlohmann::json::exception& err) {
    throw schema_error("json", err.what());
  }
  try {
    return parse_result(j);
  } catch (const nlohmann::json::exception& err) {
    throw schema_error("json", err.what());
  }
}

}  // namespace mgenv
