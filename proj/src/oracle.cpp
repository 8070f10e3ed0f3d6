#include "mgenv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mgenv/geometry.hpp"

namespace mgenv {
namespace {

struct Triple {
  VertexId p;
  VertexId q;
  double wp;
  double wq;
};

std::vector<std::vector<Triple>> path_triples(const MetricGraph& g) {
  const std::size_t n = g.num_vertices();
  const DistanceTable d(g);
  std::vector<std::vector<Triple>> out(n);
  for (VertexId z = 0; z < n; ++z) {
    for (VertexId p = 0; p < n; ++p) {
      if (p == z) continue;
      for (VertexId q = p + 1; q < n; ++q) {
        if (q == z || !on_minimal_path(g, d, p, z, q)) continue;
        const double dpq = d(p, q);
        out[z].push_back({p, q, d(q, z) / dpq, d(p, z) / dpq});
      }
    }
  }
  return out;
}

std::vector<double> initial_values(const GridRefinement& grid, const Datum& datum) {
  std::vector<double> u(grid.grid.graph.num_vertices(), datum.max_value());
  for (std::size_t i = 0; i < datum.size(); ++i) {
    u[grid.datum_nodes[i]] = datum.entries()[i].value;
  }
  return u;
}

}  // namespace

GridRefinement make_grid(const MetricGraph& g, const Datum& datum, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw std::invalid_argument("grid width must be positive");
  }
  std::vector<GraphPoint> cuts = datum.points();
  const std::size_t num_datum = cuts.size();
  for (const Edge& e : g.edges()) {
    const auto pieces = static_cast<std::size_t>(std::ceil(e.length / h));
    for (std::size_t k = 1; k < pieces; ++k) {
      const double t = e.length * static_cast<double>(k) / static_cast<double>(pieces);
      if (t > 0.0 && t < e.length) cuts.push_back(EdgePoint{e.id, t});
    }
  }
  GridRefinement out;
  out.h = h;
  out.grid = subdivide_at(g, cuts);
  out.datum_nodes.assign(out.grid.point_nodes.begin(),
                         out.grid.point_nodes.begin() + static_cast<std::ptrdiff_t>(num_datum));
  return out;
}

OracleResult oracle_convex_envelope(const GridRefinement& grid, const Datum& datum,
                                    const OracleParams& params) {
  const auto triples = path_triples(grid.grid.graph);
  OracleResult r;
  r.values = initial_values(grid, datum);
  auto& u = r.values;
  while (r.sweeps < params.max_sweeps) {
    ++r.sweeps;
    double change = 0.0;
    for (VertexId z = 0; z < u.size(); ++z) {
      double best = u[z];
      for (const Triple& t : triples[z]) best = std::min(best, t.wp * u[t.p] + t.wq * u[t.q]);
      change = std::max(change, u[z] - best);
      u[z] = best;
    }
    r.final_change = change;
    if (change <= params.tolerance) {
      r.converged = true;
      break;
    }
  }
  return r;
}

OracleResult oracle_quasiconvex_envelope(const GridRefinement& grid,
                                         const Datum& datum) {
  const auto triples = path_triples(grid.grid.graph);
  OracleResult r;
  r.values = initial_values(grid, datum);
  auto& u = r.values;
  bool changed = true;
  while (changed) {
    changed = false;
    ++r.sweeps;
    for (VertexId z = 0; z < u.size(); ++z) {
      for (const Triple& t : triples[z]) {
        const double cap = std::max(u[t.p], u[t.q]);
        if (cap < u[z]) {
          u[z] = cap;
          changed = true;
        }
      }
    }
  }
  r.converged = true;
  return r;
}

Comparison compare(const GridRefinement& grid,
                   const std::function<double(const GraphPoint&)>& solver,
                   std::span<const double> oracle_values, double tol) {
  Comparison c;
  for (VertexId v = 0; v < oracle_values.size(); ++v) {
    const GraphPoint at = grid.grid.node_origin[v];
    const double dev = std::abs(solver(at) - oracle_values[v]);
    if (!c.worst || dev > c.max_deviation) {
      c.max_deviation = dev;
      c.worst = at;
    }
  }
  c.passed = c.max_deviation <= tol;
  return c;
}

}  // namespace mgenv
