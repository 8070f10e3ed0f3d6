#include "mgenv/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "mgenv/convex_envelope.hpp"
#include "mgenv/geometry.hpp"
#include "mgenv/oracle.hpp"
#include "mgenv/problem_file.hpp"
#include "mgenv/quasiconvex_envelope.hpp"
#include "mgenv/result_document.hpp"

namespace mgenv {
namespace {

struct Options {
  std::string input = "-";
  bool input_given = false;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_sweeps;
  bool json = false;

  std::string from;
  std::string to;
  std::string kind;
  std::string function_file;
  std::optional<double> h;
  double compare_tolerance = 1e-6;
};

class Command {
 public:
  Command(const Options& opts, std::ostream& out) : opts_(opts), out_(out) {}

  int validate();
  int distance_cmd();
  int hull();
  int solve();
  int check();
  int oracle_compare();

 private:
  Problem load() const { return load_problem(opts_.input); }
  const Datum& require_datum(const Problem& p) const;
  void emit(const Json& j) const { out_ << j.dump(2) << '\n'; }
  int unbounded_convex(const Problem& p);
  int unbounded_quasi(const Problem& p, const QuasiBoundedness& b);
  ConvexSolveParams convex_params() const;

  const Options& opts_;
  std::ostream& out_;
};

Json base_document(const char* command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

const Datum& Command::require_datum(const Problem& p) const {
  if (!p.datum) {
    throw ParseError(ParseErrorKind::SyntaxError, 0, "datum", "this command needs a DATUM section");
  }
  return *p.datum;
}

ConvexSolveParams Command::convex_params() const {
  ConvexSolveParams params;
  if (opts_.tolerance) params.tolerance = *opts_.tolerance;
  if (opts_.max_sweeps) params.max_sweeps = *opts_.max_sweeps;
  return params;
}

int Command::validate() {
  const Problem p = load();
  const MetricGraph& g = p.graph;
  const SameEdgeReport same = check_same_edge_assumption(g);
  const auto terminals = terminal_vertices(g);
  if (opts_.json) {
    Json j = base_document("validate");
    j["valid"] = same.passed();
    j["problem"] = problem_to_json(p);
    j["total_length"] = g.total_length();
    Json t = Json::array();
    for (VertexId v : terminals) t.push_back(g.vertex_name(v));
    j["terminal_vertices"] = std::move(t);
    Json bad = Json::array();
    for (EdgeId e : same.violations) bad.push_back(g.edge_name(e));
    j["same_edge_violations"] = std::move(bad);
    emit(j);
  } else {
    out_ << "vertices      " << g.num_vertices() << '\n'
         << "edges         " << g.num_edges() << '\n'
         << "total length  " << format_real(g.total_length()) << '\n'
         << "terminals    ";
    for (VertexId v : terminals) out_ << ' ' << g.vertex_name(v);
    out_ << '\n' << "datum points  " << (p.datum ? p.datum->size() : 0) << '\n';
    for (EdgeId e : same.violations) {
      out_ << "edge " << g.edge_name(e)
           << " is longer than the route between its endpoints\n";
    }
    out_ << (same.passed() ? "valid" : "invalid") << '\n';
  }
  return same.passed() ? kExitOk : kExitInputError;
}

int Command::distance_cmd() {
  const Problem p = load();
  const GraphPoint x = parse_point(p.graph, opts_.from);
  const GraphPoint y = parse_point(p.graph, opts_.to);
  const double d = distance(p.graph, x, y);
  if (opts_.json) {
    Json j = base_document("distance");
    j["from"] = point_to_json(p.graph, x);
    j["to"] = point_to_json(p.graph, y);
    j["distance"] = d;
    emit(j);
  } else {
    out_ << format_real(d) << '\n';
  }
  return kExitOk;
}

int Command::hull() {
  const Problem p = load();
  const Datum& datum = require_datum(p);
  const QuasiBoundedness b = check_boundedness_quasi(p.graph, datum);
  const MetricGraph& sg = b.subdivision.graph;
  std::vector<std::string> vertices;
  std::vector<std::string> edges;
  for (VertexId v : b.hull.vertex_list()) vertices.push_back(sg.vertex_name(v));
  for (EdgeId e : b.hull.edge_list()) edges.push_back(sg.edge_name(e));
  if (opts_.json) {
    Json j = base_document("hull");
    j["vertices"] = vertices;
    j["edges"] = edges;
    j["whole_graph"] = b.bounded;
    emit(j);
  } else {
    out_ << "vertices   ";
    for (const auto& v : vertices) out_ << ' ' << v;
    out_ << "\nedges      ";
    for (const auto& e : edges) out_ << ' ' << e;
    out_ << "\nwhole graph " << (b.bounded ? "yes" : "no") << '\n';
  }
  return kExitOk;
}

int Command::unbounded_convex(const Problem& p) {
  const MetricGraph& g = p.graph;
  std::vector<std::string> missing;
  for (VertexId v : terminal_vertices(g)) {
    if (!p.datum->value_at(at_vertex(v))) missing.push_back(g.vertex_name(v));
  }
  if (opts_.json) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "convex";
    j["status"] = "unbounded";
    j["problem"] = problem_to_json(p);
    j["witness"] = {{"terminal_vertices_outside_datum", missing}};
    emit(j);
  } else {
    out_ << "convex envelope is unbounded: terminal vertices outside the datum:";
    for (const auto& v : missing) out_ << ' ' << v;
    out_ << '\n';
  }
  return kExitUnbounded;
}

int Command::unbounded_quasi(const Problem& p, const QuasiBoundedness& b) {
  const MetricGraph& sg = b.subdivision.graph;
  std::vector<std::string> vertices;
  std::vector<std::string> edges;
  for (VertexId v : b.hull.vertex_list()) vertices.push_back(sg.vertex_name(v));
  for (EdgeId e : b.hull.edge_list()) edges.push_back(sg.edge_name(e));
  if (opts_.json) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "quasiconvex";
    j["status"] = "unbounded";
    j["problem"] = problem_to_json(p);
    j["witness"] = {{"hull", {{"vertices", vertices}, {"edges", edges}}}};
    emit(j);
  } else {
    out_ << "quasiconvex envelope is unbounded: the hull of the datum is a proper subset\n"
         << "hull vertices:";
    for (const auto& v : vertices) out_ << ' ' << v;
    out_ << "\nhull edges:";
    for (const auto& e : edges) out_ << ' ' << e;
    out_ << '\n';
  }
  return kExitUnbounded;
}

void print_vertex_table(std::ostream& out, const MetricGraph& g, std::span<const double> values) {
  out << std::left << std::setw(12) << "vertex" << "value\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out << std::left << std::setw(12) << g.vertex_name(v) << format_real(values[v]) << '\n';
  }
}

void print_function(std::ostream& out, const MetricGraph& g, const PwlFunction& u) {
  print_vertex_table(out, g, u.vertex_values());
  out << std::left << std::setw(12) << "edge" << "breakpoints (t, value)\n";
  for (const Edge& e : g.edges()) {
    out << std::left << std::setw(12) << g.edge_name(e.id);
    for (const Breakpoint& b : u.on_edge(e.id)) {
      out << " (" << format_real(b.t) << ", " << format_real(b.value) << ')';
    }
    out << '\n';
  }
}

void print_function(std::ostream& out, const MetricGraph& g, const PwcFunction& u) {
  print_vertex_table(out, g, u.vertex_values());
  out << std::left << std::setw(12) << "edge" << "value\n";
  for (const Edge& e : g.edges()) {
    const EdgeLevels& lv = u.on_edge(e.id);
    out << std::left << std::setw(12) << g.edge_name(e.id) << format_real(lv.pieces[0]);
    for (std::size_t i = 0; i < lv.points.size(); ++i) {
      out << " | t=" << format_real(lv.points[i].t) << ": " << format_real(lv.points[i].value)
          << " | " << format_real(lv.pieces[i + 1]);
    }
    out << '\n';
  }
}

void print_certificate(std::ostream& out, const ConvexCertificate& c) {
  out << "certificate " << (c.passed() ? "passed" : "FAILED") << '\n'
      << "  locally convex         " << (c.locally_convex() ? "yes" : "no") << '\n'
      << "  max vertex residual    " << format_real(c.max_vertex_residual) << '\n'
      << "  max complementarity    " << format_real(c.max_complementarity) << '\n'
      << "  min datum slack        " << format_real(c.min_datum_slack) << '\n'
      << "  bounds                 " << (c.bounds_ok() ? "ok" : "violated") << '\n';
}

void print_certificate(std::ostream& out, const MetricGraph& g, const QuasiCertificate& c) {
  out << "certificate " << (c.passed() ? "passed" : "FAILED") << '\n'
      << "  vertex relation        "
      << (c.relation_failures.empty() ? "holds" : "fails") << '\n';
  for (const GraphPoint& p : c.relation_failures) out << "    at " << describe(g, p) << '\n';
  out << "  edge max rule          " << (c.edge_rule_failures.empty() ? "holds" : "fails") << '\n'
      << "  below datum            " << (c.below_datum ? "yes" : "no") << '\n'
      << "  values in datum set    " << (c.values_in_datum_set ? "yes" : "no") << '\n';
  if (c.counterexample) {
    const Counterexample& x = *c.counterexample;
    out << "  quasiconvexity counterexample: u(" << describe(g, x.z) << ") = "
        << format_real(x.uz) << " > max(u(" << describe(g, x.x) << "), u("
        << describe(g, x.y) << ")) = " << format_real(x.bound) << '\n';
  } else {
    out << "  quasiconvexity         no counterexample found\n";
  }
  if (c.dominates_convex) {
    out << "  above convex envelope  " << (*c.dominates_convex ? "yes" : "no") << '\n';
  }
}

int Command::solve() {
  const Problem p = load();
  const Datum& datum = require_datum(p);
  if (opts_.kind == "convex") {
    if (!check_boundedness_convex(p.graph, datum).bounded) return unbounded_convex(p);
    const EnvelopeReport r = solve_convex(p.graph, datum, convex_params());
    if (opts_.json) {
      emit(result_document(p, r));
    } else {
      print_function(out_, p.graph, r.function);
      print_certificate(out_, r.certificate);
      out_ << "sweeps " << r.sweeps << ", final change " << format_real(r.final_change)
           << (r.converged ? "" : " (did not converge)") << '\n';
    }
    if (!r.converged) return kExitNoConvergence;
    return r.certificate.passed() ? kExitOk : kExitRejected;
  }
  const QuasiBoundedness b = check_boundedness_quasi(p.graph, datum);
  if (!b.bounded) return unbounded_quasi(p, b);
  const QuasiSolveReport r = solve_quasiconvex(p.graph, datum);
  if (opts_.json) {
    emit(result_document(p, r));
  } else {
    print_function(out_, p.graph, r.function);
    print_certificate(out_, p.graph, r.certificate);
    out_ << "sweeps " << r.sweeps << '\n';
  }
  return r.certificate.passed() ? kExitOk : kExitRejected;
}

int Command::check() {
  std::ifstream in(opts_.function_file, std::ios::binary);
  if (!in) {
    throw ParseError(ParseErrorKind::Io, 0, "function-file",
                     "cannot open '" + opts_.function_file + "'");
  }
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ResultDocument doc = parse_result(text);
  Problem p = opts_.input_given ? load() : std::move(doc.problem);
  const Datum& datum = require_datum(p);
  bool passed = false;
  if (doc.kind == EnvelopeKind::Convex) {
    const PwlFunction& u = std::get<PwlFunction>(doc.function);
    if (u.num_edges() != p.graph.num_edges()) {
      throw ParseError(ParseErrorKind::InvalidGraph, 0, "function",
                       "function and problem have different graphs");
    }
    const ConvexCertificate c = certify_convex(p.graph, datum, u);
    passed = c.passed();
    if (opts_.json) {
      Json j = base_document("check");
      j["kind"] = "convex";
      j["passed"] = passed;
      j["certificate"] = certificate_to_json(p.graph, c);
      emit(j);
    } else {
      print_certificate(out_, c);
    }
  } else {
    const PwcFunction& u = std::get<PwcFunction>(doc.function);
    if (u.num_edges() != p.graph.num_edges()) {
      throw ParseError(ParseErrorKind::InvalidGraph, 0, "function",
                       "function and problem have different graphs");
    }
    const QuasiCertificate c = certify_quasiconvex(p.graph, datum, u);
    passed = c.passed();
    if (opts_.json) {
      Json j = base_document("check");
      j["kind"] = "quasiconvex";
      j["passed"] = passed;
      j["certificate"] = certificate_to_json(p.graph, c);
      emit(j);
    } else {
      print_certificate(out_, p.graph, c);
    }
  }
  return passed ? kExitOk : kExitRejected;
}

int Command::oracle_compare() {
  const Problem p = load();
  const Datum& datum = require_datum(p);
  const double h = opts_.h ? *opts_.h : p.graph.min_edge_length() / 8.0;
  const GridRefinement grid = make_grid(p.graph, datum, h);

  struct Row {
    const char* kind = "";
    bool bounded = false;
    bool converged = true;
    Comparison cmp;
  };
  std::vector<Row> rows;

  Row convex;
  convex.kind = "convex";
  if (check_boundedness_convex(p.graph, datum).bounded) {
    convex.bounded = true;
    const EnvelopeReport r = solve_convex(p.graph, datum, convex_params());
    OracleParams op;
    if (opts_.max_sweeps) op.max_sweeps = *opts_.max_sweeps;
    const OracleResult o = oracle_convex_envelope(grid, datum, op);
    convex.converged = r.converged && o.converged;
    convex.cmp = compare(grid, [&](const GraphPoint& x) { return r.function.eval(x); }, o.values,
                         opts_.compare_tolerance);
  }
  rows.push_back(convex);

  Row quasi;
  quasi.kind = "quasiconvex";
  if (check_boundedness_quasi(p.graph, datum).bounded) {
    quasi.bounded = true;
    const QuasiSolveReport r = solve_quasiconvex(p.graph, datum);
    const OracleResult o = oracle_quasiconvex_envelope(grid, datum);
    quasi.cmp = compare(grid, [&](const GraphPoint& x) { return r.function.eval(x); }, o.values,
                        opts_.compare_tolerance);
  }
  rows.push_back(quasi);

  const MetricGraph& g = p.graph;
  if (opts_.json) {
    Json j = base_document("oracle-compare");
    j["h"] = h;
    j["grid_nodes"] = grid.grid.graph.num_vertices();
    j["tolerance"] = opts_.compare_tolerance;
    for (const Row& row : rows) {
      Json r;
      r["bounded"] = row.bounded;
      if (row.bounded) {
        r["converged"] = row.converged;
        r["max_deviation"] = row.cmp.max_deviation;
        r["worst_point"] = row.cmp.worst ? point_to_json(g, *row.cmp.worst) : Json(nullptr);
        r["passed"] = row.cmp.passed;
      }
      j[row.kind] = std::move(r);
    }
    emit(j);
  } else {
    out_ << "grid width " << format_real(h) << ", " << grid.grid.graph.num_vertices()
         << " nodes\n";
    for (const Row& row : rows) {
      out_ << std::left << std::setw(13) << row.kind;
      if (!row.bounded) {
        out_ << "unbounded, skipped\n";
        continue;
      }
      out_ << "max deviation " << format_real(row.cmp.max_deviation);
      if (row.cmp.worst) out_ << " at " << describe(g, *row.cmp.worst);
      out_ << (row.cmp.passed ? "  ok" : "  MISMATCH")
           << (row.converged ? "" : " (did not converge)") << '\n';
    }
  }

  bool any_bounded = false;
  bool all_converged = true;
  bool all_passed = true;
  for (const Row& row : rows) {
    if (!row.bounded) continue;
    any_bounded = true;
    all_converged = all_converged && row.converged;
    all_passed = all_passed && row.cmp.passed;
  }
  if (!any_bounded) return kExitUnbounded;
  if (!all_converged) return kExitNoConvergence;
  return all_passed ? kExitOk : kExitRejected;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Convex and quasiconvex envelopes on metric graphs", "mgenv"};
  app.require_subcommand(1);
  app.fallthrough();
  auto* input = app.add_option("--input,-i", opts.input, "Problem file ('-' for stdin)");
  app.add_option("--tolerance", opts.tolerance, "Convergence tolerance of the convex solver")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-sweeps", opts.max_sweeps, "Sweep limit")->check(CLI::PositiveNumber);
  app.add_flag("--json", opts.json, "Emit JSON on stdout");

  auto* validate = app.add_subcommand("validate", "Parse and validate the problem");
  auto* dist = app.add_subcommand("distance", "Geodesic distance between two points");
  dist->add_option("p", opts.from, "First point")->required();
  dist->add_option("q", opts.to, "Second point")->required();
  auto* hull = app.add_subcommand("hull", "Geodesic convex hull of the datum points");
  auto* solve = app.add_subcommand("solve", "Compute an envelope");
  solve->add_option("kind", opts.kind, "convex or quasiconvex")
      ->required()
      ->check(CLI::IsMember({"convex", "quasiconvex"}));
  auto* check = app.add_subcommand("check", "Certify the function in a result document");
  check->add_option("function-file", opts.function_file, "JSON result document")->required();
  auto* oracle = app.add_subcommand("oracle-compare", "Compare both solvers with the grid oracle");
  oracle->set_help_flag("--help", "Print this help message and exit");
  oracle->add_option("--h", opts.h, "Grid width (default: shortest edge / 8)")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--compare-tolerance", opts.compare_tolerance,
                     "Largest accepted deviation");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  opts.input_given = input->count() > 0;

  Command cmd(opts, out);
  try {
    if (validate->parsed()) return cmd.validate();
    if (dist->parsed()) return cmd.distance_cmd();
    if (hull->parsed()) return cmd.hull();
    if (solve->parsed()) return cmd.solve();
    if (check->parsed()) return cmd.check();
    if (oracle->parsed()) return cmd.oracle_compare();
  } catch (const UnboundedEnvelope& e) {
    err << "unbounded: " << e.what() << '\n';
    return kExitUnbounded;
  } catch (const AssumptionViolated& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace mgenv
