// Acceptance suite.  Prints one PASS/FAIL line per criterion; an optional
// argument selects a single criterion (1-6).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/instances.hpp"
#include "../support/properties.hpp"
#include "mgenv/cli.hpp"
#include "mgenv/convex_envelope.hpp"
#include "mgenv/geometry.hpp"
#include "mgenv/oracle.hpp"
#include "mgenv/quasiconvex_envelope.hpp"
#include "mgenv/result_document.hpp"

namespace {

using namespace mgenv;
using namespace mgenv::testing;
using Clock = std::chrono::steady_clock;

constexpr double kGoldenTol = 1e-8;
constexpr double kOracleTol = 1e-6;
constexpr double kMetricTol = 1e-12;
constexpr double kExampleSeconds = 1.0;
constexpr double kOracleSeconds = 120.0;
constexpr int kOracleInstances = 120;
constexpr int kPropertyCases = 200;
constexpr int kMetricGraphs = 200;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    passed = false;
    notes.push_back(why);
  }
};

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) { return format_real(x); }

// Stated closed forms.  Every edge has length 1 and a single linear piece,
// u(t) = intercept + slope * t along the stored orientation.
struct LinearEdge {
  double intercept;
  double slope;
};

struct ConvexGolden {
  std::string file;
  std::map<std::string, double> vertices;
  std::map<std::string, LinearEdge> edges;
};

struct QuasiGolden {
  std::string file;
  std::map<std::string, double> vertices;
  std::map<std::string, double> edges;
};

std::vector<ConvexGolden> convex_goldens() {
  const double a = 0.0;
  const double b = 1.0;
  const double m = (a + b) / 2;
  return {
      {"example1.txt",
       {{"v1", m}, {"v2", m}, {"v3", m}, {"v4", a}, {"v5", b}},
       {{"e1", {m, 0}}, {"e2", {m, 0}}, {"e3", {m, 0}},
        {"e4", {m, (a - b) / 2}}, {"e5", {m, (b - a) / 2}}}},
      {"example3.txt",
       {{"v1", 0}, {"v2", 1}, {"v3", 0.5}, {"v4", 2}},
       {{"e1", {0.5, -0.5}}, {"e2", {0.5, 0.5}}, {"e3", {0.5, 1.5}}}},
      {"example4.txt",
       {{"v1", 0}, {"v2", 1.0 / 3}, {"v3", 2}, {"v4", 2.0 / 3}, {"v5", 1}, {"v6", 3}},
       {{"e1", {0, 1.0 / 3}}, {"e2", {2, -5.0 / 3}}, {"e3", {1.0 / 3, 1.0 / 3}},
        {"e4", {1, -1.0 / 3}}, {"e5", {3, -7.0 / 3}}}},
      {"example5.txt",
       {{"v1", 1}, {"v2", 0.5}, {"v3", 1.5}, {"v4", 0}, {"v5", 1}, {"v6", 2}, {"v7", 3}},
       {{"e1", {0.5, 0.5}}, {"e2", {1.5, -0.5}}, {"e3", {0, 0.5}},
        {"e4", {1, -0.5}}, {"e5", {2, -0.5}}, {"e6", {3, -1.5}}}},
  };
}

std::vector<QuasiGolden> quasi_goldens() {
  return {
      {"example2.txt",
       {{"v1", 0}, {"v2", 1}, {"v3", 2}},
       {{"e1", 1}, {"e2", 2}, {"e3", 2}}},
      {"example3.txt",
       {{"v1", 0}, {"v2", 1}, {"v3", 1}, {"v4", 2}},
       {{"e1", 1}, {"e2", 1}, {"e3", 2}}},
      {"example4.txt",
       {{"v1", 0}, {"v2", 1}, {"v3", 2}, {"v4", 1}, {"v5", 1}, {"v6", 3}},
       {{"e1", 1}, {"e2", 2}, {"e3", 1}, {"e4", 1}, {"e5", 3}}},
      {"example5.txt",
       {{"v1", 2}, {"v2", 1}, {"v3", 2}, {"v4", 0}, {"v5", 1}, {"v6", 2}, {"v7", 3}},
       {{"e1", 2}, {"e2", 2}, {"e3", 1}, {"e4", 1}, {"e5", 2}, {"e6", 3}}},
  };
}

Outcome criterion_golden() {
  Outcome o;
  for (const ConvexGolden& gold : convex_goldens()) {
    const auto t0 = Clock::now();
    const CliRun run = cli({"--input", data_path(gold.file), "--json", "solve", "convex"});
    const double secs = seconds_since(t0);
    const std::string tag = gold.file + " convex";
    if (run.code != 0) {
      o.fail(tag + ": exit " + std::to_string(run.code) + " " + run.err);
      continue;
    }
    if (secs >= kExampleSeconds) o.fail(tag + ": took " + fmt(secs) + " s");
    const Json doc = Json::parse(run.out);
    double worst = 0.0;
    std::string worst_at;
    auto note = [&](const std::string& at, double got, double want) {
      const double dev = std::abs(got - want);
      if (dev > kGoldenTol) o.fail(tag + ": " + at + " = " + fmt(got) + ", stated " + fmt(want));
      if (dev >= worst) {
        worst = dev;
        worst_at = at;
      }
    };
    for (const Json& v : doc["function"]["vertices"]) {
      note(v["vertex"].get<std::string>(), v["value"].get<double>(),
           gold.vertices.at(v["vertex"].get<std::string>()));
    }
    for (const Json& e : doc["function"]["edges"]) {
      const std::string name = e["edge"].get<std::string>();
      const Json& bps = e["breakpoints"];
      const LinearEdge want = gold.edges.at(name);
      for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double t0e = bps[i][0].get<double>();
        const double t1e = bps[i + 1][0].get<double>();
        const double slope = (bps[i + 1][1].get<double>() - bps[i][1].get<double>()) / (t1e - t0e);
        note(name + " slope", slope, want.slope);
        note(name + " at t=" + fmt(t0e), bps[i][1].get<double>(), want.intercept + want.slope * t0e);
      }
    }
    o.notes.push_back(tag + ": max deviation " + fmt(worst) + " (" + worst_at + "), " +
                      fmt(secs) + " s");
  }
  {
    // Independent reference for the Example 1 instance on a fine grid.
    const Problem p = load_example("example1.txt");
    const GridRefinement grid = make_grid(p.graph, *p.datum, 1.0 / 8);
    const OracleResult oracle = oracle_convex_envelope(grid, *p.datum);
    const VertexId v1 = *p.graph.find_vertex("v1");
    o.notes.push_back("example1.txt convex: grid oracle gives v1 = " +
                      fmt(oracle.values[grid.grid.node_at(at_vertex(v1)).value()]) +
                      " (stated " + fmt(0.5) + ")");
  }
  for (const QuasiGolden& gold : quasi_goldens()) {
    const auto t0 = Clock::now();
    const CliRun run = cli({"--input", data_path(gold.file), "--json", "solve", "quasiconvex"});
    const double secs = seconds_since(t0);
    const std::string tag = gold.file + " quasiconvex";
    if (run.code != 0) {
      o.fail(tag + ": exit " + std::to_string(run.code) + " " + run.err);
      continue;
    }
    if (secs >= kExampleSeconds) o.fail(tag + ": took " + fmt(secs) + " s");
    const Json doc = Json::parse(run.out);
    int mismatches = 0;
    for (const Json& v : doc["function"]["vertices"]) {
      const std::string name = v["vertex"].get<std::string>();
      if (v["value"].get<double>() != gold.vertices.at(name)) {
        ++mismatches;
        o.fail(tag + ": " + name + " = " + fmt(v["value"].get<double>()) + ", stated " +
               fmt(gold.vertices.at(name)));
      }
    }
    for (const Json& e : doc["function"]["edges"]) {
      const std::string name = e["edge"].get<std::string>();
      if (!e.contains("value") || e["value"].get<double>() != gold.edges.at(name)) {
        ++mismatches;
        o.fail(tag + ": " + name + " is not the constant " + fmt(gold.edges.at(name)));
      }
    }
    o.notes.push_back(tag + ": " + std::to_string(mismatches) + " mismatches, " + fmt(secs) + " s");
  }
  return o;
}

Outcome criterion_unbounded() {
  Outcome o;
  {
    const CliRun run = cli({"--input", data_path("example1.txt"), "--json", "solve", "quasiconvex"});
    if (run.code != 2) o.fail("example1 quasiconvex: exit " + std::to_string(run.code));
    if (run.code == 2) {
      const Json doc = Json::parse(run.out);
      const auto vs = doc["witness"]["hull"]["vertices"].get<std::vector<std::string>>();
      const auto es = doc["witness"]["hull"]["edges"].get<std::vector<std::string>>();
      const std::set<std::string> got_v(vs.begin(), vs.end());
      const std::set<std::string> got_e(es.begin(), es.end());
      if (got_v != std::set<std::string>{"v1", "v4", "v5"} ||
          got_e != std::set<std::string>{"e4", "e5"}) {
        o.fail("example1 quasiconvex: wrong hull witness " + doc["witness"].dump());
      } else {
        o.notes.push_back("example1 quasiconvex: exit 2, hull {v1,v4,v5} + {e4,e5}");
      }
    }
  }
  {
    const CliRun run =
        cli({"--input", data_path("star_missing_terminal.txt"), "--json", "solve", "convex"});
    if (run.code != 2) o.fail("star convex: exit " + std::to_string(run.code));
    if (run.code == 2) {
      const Json doc = Json::parse(run.out);
      const auto missing =
          doc["witness"]["terminal_vertices_outside_datum"].get<std::vector<std::string>>();
      if (missing != std::vector<std::string>{"v4"}) {
        o.fail("star convex: wrong witness " + doc["witness"].dump());
      } else {
        o.notes.push_back("star with missing terminal convex: exit 2, witness v4");
      }
    }
  }
  return o;
}

bool on_path_v5_v4_v2_v1(const Json& p) {
  static const std::set<std::string> vertices{"v5", "v4", "v2", "v1"};
  static const std::set<std::string> edges{"e4", "e3", "e1"};
  if (p.is_string()) return vertices.count(p.get<std::string>()) > 0;
  return edges.count(p["edge"].get<std::string>()) > 0;
}

Outcome criterion_spurious_fixed_point() {
  Outcome o;
  const Problem p = load_example("example4.txt");
  const MetricGraph& g = p.graph;
  const VertexId v2 = *g.find_vertex("v2");
  const VertexId v4 = *g.find_vertex("v4");

  const PwcFunction spurious = adjacent_pair_fixed_point(g, *p.datum);
  if (spurious.vertex_value(v2) != 2.0 || spurious.vertex_value(v4) != 2.0) {
    o.fail("adjacent-pair relation settles at v2 = " + fmt(spurious.vertex_value(v2)) +
           ", v4 = " + fmt(spurious.vertex_value(v4)));
  } else {
    o.notes.push_back("adjacent-pair relation alone: v2 = v4 = 2");
  }

  const QuasiSolveReport r = solve_quasiconvex(g, *p.datum);
  if (r.function.vertex_value(v2) != 1.0 || r.function.vertex_value(v4) != 1.0) {
    o.fail("solver gives v2 = " + fmt(r.function.vertex_value(v2)) + ", v4 = " +
           fmt(r.function.vertex_value(v4)));
  } else {
    o.notes.push_back("shipped solver: v2 = v4 = 1");
  }

  const auto file = std::filesystem::temp_directory_path() / "mgenv_acceptance_spurious.json";
  {
    std::ofstream out(file);
    out << result_document(p, spurious, certify_quasiconvex(g, *p.datum, spurious)).dump(2);
  }
  const CliRun run = cli({"--json", "check", file.string()});
  std::filesystem::remove(file);
  if (run.code != 4) {
    o.fail("check on the value-2 function: exit " + std::to_string(run.code));
    return o;
  }
  const Json cert = Json::parse(run.out)["certificate"];
  const Json& cx = cert["quasiconvexity_counterexample"];
  if (cx.is_null()) {
    o.fail("check rejected without a quasiconvexity counterexample");
    return o;
  }
  if (!on_path_v5_v4_v2_v1(cx["x"]) || !on_path_v5_v4_v2_v1(cx["y"]) ||
      !on_path_v5_v4_v2_v1(cx["z"])) {
    o.fail("counterexample off the path v5-v4-v2-v1: " + cx.dump());
    return o;
  }
  if (!(cx["u_z"].get<double>() > cx["bound"].get<double>())) {
    o.fail("counterexample does not violate the bound: " + cx.dump());
    return o;
  }
  o.notes.push_back("check rejects (exit 4): u(" + cx["z"].dump() + ") = " +
                    fmt(cx["u_z"].get<double>()) + " > max(u(" + cx["x"].dump() + "), u(" +
                    cx["y"].dump() + ")) = " + fmt(cx["bound"].get<double>()));
  return o;
}

Outcome criterion_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  const double h = 0.125;
  double worst_convex = 0.0;
  double worst_quasi = 0.0;
  int compared = 0;
  for (int i = 0; i < kOracleInstances; ++i) {
    Rng rng(0xACCE55 + static_cast<std::uint64_t>(i));
    const MetricGraph g = random_graph(rng);
    const Datum fc = random_convex_datum(rng, g);
    const Datum fq = random_quasi_datum(rng, g);

    const EnvelopeReport c = solve_convex(g, fc);
    const GridRefinement grid_c = make_grid(g, fc, h);
    const OracleResult oc = oracle_convex_envelope(grid_c, fc);
    if (!c.converged || !oc.converged) o.fail("instance " + std::to_string(i) + ": no convergence");
    const Comparison cc = compare(grid_c, [&](const GraphPoint& x) { return c.function.eval(x); },
                                  oc.values, kOracleTol);
    worst_convex = std::max(worst_convex, cc.max_deviation);
    if (!cc.passed) {
      o.fail("instance " + std::to_string(i) + " convex: deviation " + fmt(cc.max_deviation) +
             " at " + describe(g, *cc.worst));
    }

    const QuasiSolveReport q = solve_quasiconvex(g, fq);
    const GridRefinement grid_q = make_grid(g, fq, h);
    const OracleResult oq = oracle_quasiconvex_envelope(grid_q, fq);
    const Comparison qc = compare(grid_q, [&](const GraphPoint& x) { return q.function.eval(x); },
                                  oq.values, kOracleTol);
    worst_quasi = std::max(worst_quasi, qc.max_deviation);
    if (!qc.passed) {
      o.fail("instance " + std::to_string(i) + " quasiconvex: deviation " +
             fmt(qc.max_deviation) + " at " + describe(g, *qc.worst));
    }
    ++compared;
  }
  const double secs = seconds_since(t0);
  if (secs >= kOracleSeconds) o.fail("took " + fmt(secs) + " s");
  o.notes.push_back(std::to_string(compared) + " instances, grid width " + fmt(h) +
                    ", worst deviation convex " + fmt(worst_convex) + ", quasiconvex " +
                    fmt(worst_quasi) + ", " + fmt(secs) + " s");
  return o;
}

Outcome criterion_properties() {
  Outcome o;
  for (const NamedProperty& prop : envelope_properties()) {
    int passed = 0;
    for (int i = 0; i < kPropertyCases; ++i) {
      const std::uint64_t seed = 0x5EED0000ULL + static_cast<std::uint64_t>(i);
      PropertyResult r;
      try {
        r = prop.run(seed);
      } catch (const std::exception& e) {
        r = std::string("threw: ") + e.what();
      }
      if (r) {
        o.fail(std::string(prop.name) + " seed " + std::to_string(seed) + ": " + *r);
      } else {
        ++passed;
      }
    }
    o.notes.push_back(std::string(prop.name) + ": " + std::to_string(passed) + "/" +
                      std::to_string(kPropertyCases));
  }
  return o;
}

Outcome criterion_metric() {
  Outcome o;
  std::size_t triples = 0;
  for (int i = 0; i < kMetricGraphs; ++i) {
    Rng rng(0x3E7A1C + static_cast<std::uint64_t>(i));
    const MetricGraph g = random_graph(rng);
    const DistanceTable table(g);
    std::vector<GraphPoint> pts;
    for (VertexId v = 0; v < g.num_vertices(); ++v) pts.push_back(at_vertex(v));
    for (int k = 0; k < 4; ++k) pts.push_back(random_edge_point(rng, g));
    for (const GraphPoint& x : pts) {
      for (const GraphPoint& y : pts) {
        const double dxy = distance(g, table, x, y);
        if (std::abs(dxy - distance(g, table, y, x)) > kMetricTol) {
          o.fail("asymmetric distance " + describe(g, x) + " " + describe(g, y));
        }
        for (const GraphPoint& z : pts) {
          ++triples;
          if (dxy > distance(g, table, x, z) + distance(g, table, z, y) + kMetricTol) {
            o.fail("triangle inequality fails for " + describe(g, x) + " " + describe(g, z) +
                   " " + describe(g, y));
          }
        }
      }
    }
  }
  o.notes.push_back(std::to_string(kMetricGraphs) + " graphs, " + std::to_string(triples) +
                    " triples checked");

  const Problem p = load_example("example1.txt");
  const MetricGraph& g = p.graph;
  std::vector<VertexId> seeds;
  for (const DatumEntry& d : p.datum->entries()) seeds.push_back(std::get<VertexPoint>(d.point).vertex);
  const Subset hull = convex_hull(g, seeds);
  Subset want = Subset::empty_of(g);
  for (const char* v : {"v1", "v4", "v5"}) want.vertices[*g.find_vertex(v)] = true;
  for (const char* e : {"e4", "e5"}) want.edges[*g.find_edge(e)] = true;
  if (!(hull == want)) {
    o.fail("example1 hull differs from {v1,v4,v5} + {e4,e5}");
  } else {
    o.notes.push_back("example1 hull = {v1,v4,v5} + {e4,e5}");
  }
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "golden corpus", criterion_golden},
      {2, "unboundedness witnesses", criterion_unbounded},
      {3, "spurious fixed point regression", criterion_spurious_fixed_point},
      {4, "oracle equivalence", criterion_oracle},
      {5, "property suites", criterion_properties},
      {6, "metric sanity", criterion_metric},
  };
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "usage: acceptance [criterion 1-" << criteria.size() << "]\n";
    return 2;
  }

  bool all = true;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.passed;
    for (const std::string& n : o.notes) std::cout << "    " << n << '\n';
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
  }
  return all ? 0 : 1;
}
