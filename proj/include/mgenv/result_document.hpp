#ifndef MGENV_RESULT_DOCUMENT_HPP
#define MGENV_RESULT_DOCUMENT_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "mgenv/convex_envelope.hpp"
#include "mgenv/functions.hpp"
#include "mgenv/problem_file.hpp"
#include "mgenv/quasiconvex_envelope.hpp"

namespace mgenv {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json point_to_json(const MetricGraph& g, const GraphPoint& p);
GraphPoint point_from_json(const MetricGraph& g, const Json& j);

Json problem_to_json(const Problem& problem);
Problem problem_from_json(const Json& j);

Json function_to_json(const MetricGraph& g, const PwlFunction& u);
Json function_to_json(const MetricGraph& g, const PwcFunction& u);

Json certificate_to_json(const MetricGraph& g, const ConvexCertificate& cert);
Json certificate_to_json(const MetricGraph& g, const QuasiCertificate& cert);

/// Full result documents.  `status` is "success" when the run converged and
/// the certificate passed.
Json result_document(const Problem& problem, const EnvelopeReport& report);
Json result_document(const Problem& problem, const QuasiSolveReport& report);
/// Document for an arbitrary quasiconvex candidate (no solver run).
Json result_document(const Problem& problem, const PwcFunction& u,
                     const QuasiCertificate& cert);

enum class EnvelopeKind { Convex, Quasiconvex };

struct ResultDocument {
  int schema_version = kSchemaVersion;
  EnvelopeKind kind = EnvelopeKind::Convex;
  std::string status;
  Problem problem;
  std::variant<PwlFunction, PwcFunction> function;
  Json certificate;
  Json convergence;
};

/// Parses a result document.  Throws ParseError on schema problems.
ResultDocument parse_result(const Json& j);
ResultDocument parse_result(const std::string& text);

}  // namespace mgenv

#endif  // MGENV_RESULT_DOCUMENT_HPP
