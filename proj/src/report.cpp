#include "revspec/report.hpp"

#include <charconv>
#include <cmath>

namespace revspec {

using nlohmann::json;

namespace {

// NaN and infinities have no JSON spelling; they become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json numbers(const std::vector<double>& vs) {
  json a = json::array();
  for (double v : vs) a.push_back(number(v));
  return a;
}

json attributions(const std::vector<Attribution>& channels) {
  json a = json::array();
  for (const auto& c : channels) a.push_back({{"k", c.k}, {"j", c.j}});
  return a;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json document(const std::string& kind, json payload) {
  json doc = {{"schema", kReportSchema}, {"kind", kind}};
  doc.update(payload);
  return doc;
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"measured", number(c.measured)},
                      {"expected", number(c.expected)},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"pass", r.pass}, {"checks", checks}};
}

json to_json(const ChannelSpectrum& cs) {
  return {{"k", cs.k},
          {"basis_size", cs.basis_size},
          {"eigenvalues", numbers(cs.eigenvalues)},
          {"convergence_estimates", numbers(cs.convergence_estimates)},
          {"diagnostics", cs.diagnostics}};
}

json to_json(const SpectrumTable& t) {
  json entries = json::array();
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    const auto& e = t.entries[m];
    entries.push_back({{"m", m + 1},
                       {"lambda", number(e.lambda)},
                       {"multiplicity", e.multiplicity},
                       {"channels", attributions(e.channels)}});
  }
  json channels = json::array();
  for (const auto& cs : t.channels) channels.push_back(to_json(cs));
  return {{"requested_cutoff", t.requested_cutoff},
          {"certified_cutoff", number(t.cutoff)},
          {"cluster_tol", t.cluster_tol},
          {"entries", entries},
          {"channels", channels},
          {"diagnostics", t.diagnostics}};
}

json to_json(const BoundsReport& b) {
  json lower = json::array();
  for (const auto& [key, v] : b.channel_lower_bounds)
    lower.push_back({{"k", key.first}, {"m", key.second}, {"bound", number(v)}});
  return {{"lambda01_upper", number(b.lambda01_upper)},
          {"trace0_integral", number(b.trace0_integral)},
          {"channel_lower_bounds", lower}};
}

json to_json(const ObstructionReport& r) {
  const auto& em = r.even_multiplicity;
  json witness = {{"curvature", number(r.witness.curvature)}, {"grid_size", r.witness.grid_size}};
  witness["x"] = r.witness.x ? json(*r.witness.x) : json(nullptr);
  return {
      {"profile", r.profile_name},
      {"verdict", to_string(r.verdict)},
      {"sup_test",
       {{"max_abs_slope", number(r.sup.max_abs_slope)},
        {"argmax", r.sup.argmax},
        {"tolerance", r.sup.tolerance},
        {"embeddable", r.sup.embeddable}}},
      {"spectral_test",
       {{"lambda01", number(r.spectral.lambda01)},
        {"threshold", r.spectral.threshold},
        {"triggered", r.spectral.triggered}}},
      {"even_multiplicity_test",
       {{"m_max", em.m_max},
        {"eigenvalues", numbers(em.eigenvalues)},
        {"multiplicities", em.multiplicities},
        {"all_even", em.all_even},
        {"reduction", em.reduction},
        {"agree", em.agree},
        {"explanation", em.explanation}}},
      {"negative_curvature_witness", witness},
      {"external",
       {{"label", "external (Abreu-Freitas)"},
        {"lambda01", number(r.abreu_freitas.lambda01)},
        {"threshold", r.abreu_freitas.threshold},
        {"above_threshold", r.abreu_freitas.triggered}}},
      {"trace_flag",
       {{"trace0", number(r.trace_flag.trace0)},
        {"partial_sum", number(r.trace_flag.partial_sum)},
        {"terms", r.trace_flag.terms},
        {"threshold", r.trace_flag.threshold},
        {"flagged", r.trace_flag.flagged}}},
      {"consistency_failures", r.consistency_failures},
      {"notes", r.notes},
  };
}

json to_json(const MetricResidual& r) {
  return {{"sup", number(r.sup)},
          {"rms", number(r.rms)},
          {"sup_meridian", number(r.sup_meridian)},
          {"sup_parallel", number(r.sup_parallel)},
          {"samples", r.samples}};
}

std::string spectrum_csv(const SpectrumTable& t) {
  std::string out = "m,lambda,multiplicity,channels\n";
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    const auto& e = t.entries[m];
    out += std::to_string(m + 1) + ',' + format_number(e.lambda) + ',' + std::to_string(e.multiplicity) + ',';
    for (std::size_t c = 0; c < e.channels.size(); ++c) {
      if (c) out += ';';
      out += std::to_string(e.channels[c].k) + ':' + std::to_string(e.channels[c].j);
    }
    out += '\n';
  }
  return out;
}

}  // namespace revspec
