#include "cli.hpp"

#include "revspec/embed3d.hpp"
#include "revspec/obstruction.hpp"
#include "revspec/profile_io.hpp"
#include "revspec/quadrature.hpp"
#include "revspec/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace revspec::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Profile could not be built or failed validation; carries the report when
// there is one.
struct InvalidProfile : std::runtime_error {
  InvalidProfile(const std::string& what, std::optional<ValidationReport> r = std::nullopt)
      : std::runtime_error(what), report(std::move(r)) {}
  std::optional<ValidationReport> report;
};

SpectralOptions spectral_options(const RunConfig& cfg) {
  SpectralOptions o;
  o.cluster_tol = cfg.cluster_tol;
  o.target_rel_err = cfg.target_rel_err;
  o.solver.basis_cap = cfg.basis_cap;
  return o;
}

ObstructionOptions obstruction_options(const RunConfig& cfg) {
  ObstructionOptions o;
  o.spectral = spectral_options(cfg);
  return o;
}

Profile load(const RunConfig& cfg) {
  const int given = cfg.builtin.has_value() + cfg.expr.has_value() + cfg.profile_file.has_value();
  if (given != 1) throw UsageError("exactly one of --builtin, --expr, --profile is required");
  std::optional<Profile> p;
  try {
    if (cfg.builtin) p = builtin_profile(*cfg.builtin);
    else if (cfg.expr) p = make_profile(parse(*cfg.expr));
    else p = load_profile_file(*cfg.profile_file).profile;
  } catch (const ParseError& e) {
    throw InvalidProfile(std::string("cannot parse profile: ") + e.what());
  } catch (const EvalError& e) {
    throw InvalidProfile(std::string("profile cannot be evaluated: ") + e.what());
  } catch (const ProfileError& e) {
    throw InvalidProfile(e.what());
  }
  if (cfg.tol_bc) p->set_tol_bc(*cfg.tol_bc);
  ValidationReport v = validate(*p);
  if (!v.pass) {
    const ValidationCheck* bad = v.first_failure();
    std::ostringstream msg;
    msg << "profile validation failed: " << bad->name << " = " << bad->measured << " (expected " << bad->expected
        << ", tolerance " << bad->tolerance << ")";
    throw InvalidProfile(msg.str(), std::move(v));
  }
  return std::move(*p);
}

void write_text(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + cfg.out + " for writing");
  file << text;
  if (!file) throw std::runtime_error("failed writing " + cfg.out);
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Profile p = [&] {
    try {
      return load(cfg);
    } catch (const InvalidProfile& e) {
      if (e.report) write_text(cfg, dump(document("analysis", {{"validation", to_json(*e.report)}})), out);
      throw;
    }
  }();
  const ObstructionReport r = full_report(p, obstruction_options(cfg));
  json doc = document("analysis", {{"validation", to_json(validate(p))},
                                   {"obstruction", to_json(r)},
                                   {"bounds", to_json(bounds_report(p, 4, 4))},
                                   {"gauss_bonnet_residual", gauss_bonnet_residual(p)}});
  write_text(cfg, dump(doc), out);
  for (const auto& n : r.notes) err << "note: " << n << '\n';
  if (!r.consistency_failures.empty()) {
    for (const auto& c : r.consistency_failures) err << "consistency failure: " << c << '\n';
    return kExitFailure;
  }
  return r.verdict == Verdict::embeddable ? kExitOk : kExitNotEmbeddable;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (!(cfg.lambda > 0.0) || !std::isfinite(cfg.lambda)) throw UsageError("--lambda must be positive");
  const Profile p = load(cfg);
  const SpectrumTable t = enumerate_below(p, cfg.lambda, spectral_options(cfg));
  if (cfg.format == "csv") write_text(cfg, spectrum_csv(t), out);
  else write_text(cfg, dump(document("spectrum", to_json(t))), out);
  std::ostream& note = cfg.out.empty() ? err : out;
  note << "certified cutoff: " << format_number(t.cutoff) << " (requested " << format_number(t.requested_cutoff)
       << ")\n";
  for (const auto& d : t.diagnostics) err << "diagnostic: " << d << '\n';
  return kExitOk;
}

int cmd_mesh(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.out.empty()) throw UsageError("mesh needs --out PATH");
  const Profile p = load(cfg);
  const SupTest sup = sup_test(p);
  if (!sup.embeddable) {
    err << "not embeddable: sup test max |f'| = " << sup.max_abs_slope << " > 2 at x = " << sup.argmax << '\n';
    return kExitNotEmbeddable;
  }
  ProfileCurve curve;
  try {
    curve = embed_profile_curve(p, cfg.n_samples);
  } catch (const NotEmbeddableError& e) {
    err << e.what() << '\n';
    return kExitNotEmbeddable;
  }
  const EmbeddingMesh mesh = make_mesh(curve, cfg.n_theta);
  write_text(cfg, export_obj(mesh), out);
  const MetricResidual res = induced_metric_residual(mesh, p);
  json side = document("mesh", {{"profile", p.name()},
                                {"obj", cfg.out},
                                {"n_theta", mesh.n_theta},
                                {"n_samples", cfg.n_samples},
                                {"vertices", mesh.vertices.size()},
                                {"faces", mesh.faces.size()},
                                {"meridian_length", curve.length},
                                {"area", mesh_area(mesh)},
                                {"euler_characteristic", euler_characteristic(mesh)},
                                {"induced_metric_residual", to_json(res)},
                                {"warnings", curve.warnings}});
  RunConfig sidecar = cfg;
  sidecar.out = cfg.out + ".json";
  write_text(sidecar, dump(side), out);
  if (!cfg.curve_csv.empty()) {
    sidecar.out = cfg.curve_csv;
    write_text(sidecar, curve_csv(curve), out);
  }
  for (const auto& w : curve.warnings) err << "warning: " << w << '\n';
  out << "induced metric residual: sup " << res.sup << ", rms " << res.rms << '\n';
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.eps.empty() || cfg.n.empty()) throw UsageError("sweep needs at least one --eps and one --n value");
  for (double e : cfg.eps)
    if (!(e >= 0.0)) throw UsageError("--eps values must be non-negative");
  for (int n : cfg.n)
    if (n < 1) throw UsageError("--n values must be positive");

  json rows = json::array();
  std::string csv =
      "eps,n,c,max_abs_slope,lambda01,multiplicities,sup_embeddable,spectral_triggered,all_even,verdict,error\n";
  const ObstructionOptions opts = obstruction_options(cfg);
  for (int n : cfg.n) {
    for (double eps : cfg.eps) {
      json row = {{"eps", eps}, {"n", n}, {"c", 1.0 + eps}, {"expr", sweep_member(eps, n)}};
      std::string line = format_number(eps) + ',' + std::to_string(n) + ',' + format_number(1.0 + eps) + ',';
      try {
        RunConfig member = cfg;
        member.builtin.reset();
        member.profile_file.reset();
        member.expr = sweep_member(eps, n);
        const Profile p = load(member);
        const ObstructionReport r = full_report(p, opts);
        std::string mult;
        for (std::size_t i = 0; i < r.even_multiplicity.multiplicities.size(); ++i)
          mult += (i ? ";" : "") + std::to_string(r.even_multiplicity.multiplicities[i]);
        row.update({{"max_abs_slope", r.sup.max_abs_slope},
                    {"lambda01", r.spectral.lambda01},
                    {"multiplicities", r.even_multiplicity.multiplicities},
                    {"sup_embeddable", r.sup.embeddable},
                    {"spectral_triggered", r.spectral.triggered},
                    {"all_even", r.even_multiplicity.all_even},
                    {"verdict", to_string(r.verdict)},
                    {"error", nullptr}});
        line += format_number(r.sup.max_abs_slope) + ',' + format_number(r.spectral.lambda01) + ',' + mult + ',' +
                (r.sup.embeddable ? "true" : "false") + ',' + (r.spectral.triggered ? "true" : "false") + ',' +
                (r.even_multiplicity.all_even ? "true" : "false") + ',' + to_string(r.verdict) + ",\n";
      } catch (const std::exception& e) {
        std::string what = e.what();
        for (char& ch : what)
          if (ch == ',' || ch == '\n') ch = ' ';
        row["error"] = e.what();
        line += ",,,,,,," + what + '\n';
      }
      rows.push_back(row);
      csv += line;
    }
  }
  if (cfg.format == "csv") write_text(cfg, csv, out);
  else write_text(cfg, dump(document("sweep", {{"rows", rows}})), out);
  return kExitOk;
}

struct LedgerLine {
  std::string name;
  double value;
  double reference;
  std::string relation;
  bool pass;
};

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Profile example = builtin_profile("paper-example");
  const Profile round = builtin_profile("round");
  SolverOptions solver;
  solver.basis_cap = cfg.basis_cap;
  if (cfg.quad_nodes > 0) solver.rayleigh_nodes = cfg.quad_nodes;

  auto integral = [&](const Profile& p, const RealFn& g) {
    return cfg.quad_nodes > 0 ? integrate_fixed(g, -1.0, 1.0, cfg.quad_nodes) : integrate_over_profile(p, g);
  };

  std::vector<LedgerLine> ledger;
  const double inv_trace = 2.0 / integral(example, [&](double x) { return (1.0 - x * x) / example.f(x); });
  const double inv_trace_ref = 185.0 / 23.0;
  ledger.push_back({"2/int((1-x^2)/f), paper-example", inv_trace, inv_trace_ref, "= (rel 1e-9)",
                    std::abs(inv_trace / inv_trace_ref - 1.0) <= 1e-9});

  const double rq = rayleigh_quotient(example, 4, parse("sqrt(1-x^2)"), solver);
  ledger.push_back({"Rayleigh quotient k=4, u=sqrt(1-x^2)", rq, 8.0, "<", rq < 8.0});
  ledger.push_back({"Rayleigh quotient k=4, u=sqrt(1-x^2)", rq, 1477.0 / 185.0, "<=", rq <= 1477.0 / 185.0});

  const double bound = 1.5 * integral(round, [&](double x) { return round.f(x); });
  ledger.push_back({"(3/2) int f, round", bound, 2.0, "= (rel 1e-12)", std::abs(bound / 2.0 - 1.0) <= 1e-12});
  SpectralOptions so = spectral_options(cfg);
  so.solver = solver;
  const double l01 = first_invariant_eigenvalue(round, so);
  ledger.push_back({"lambda_0^1, round", l01, 2.0, "= (rel 1e-9)", std::abs(l01 / 2.0 - 1.0) <= 1e-9});

  bool all = true;
  out << std::setprecision(17);
  for (const auto& l : ledger) {
    out << (l.pass ? "PASS  " : "FAIL  ") << l.name << ": " << l.value << ' ' << l.relation << ' ' << l.reference
        << '\n';
    if (!l.pass) {
      err << "verify failed: " << l.name << " = " << std::setprecision(17) << l.value << ", required " << l.relation
          << ' ' << l.reference << '\n';
      all = false;
    }
  }
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::string sweep_member(double eps, int n) {
  return format_number(1.0 + eps) + "*(1-x^2)/(1+" + format_number(eps) + "*x^" + std::to_string(2 * n) + ")";
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
    if (cfg.basis_cap < 32) throw UsageError("--basis-cap must be at least 32");
    if (!(cfg.cluster_tol > 0.0 && cfg.cluster_tol < 1.0)) throw UsageError("--cluster-tol must lie in (0, 1)");
    if (cfg.command == "analyze") return cmd_analyze(cfg, out, err);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, out, err);
    if (cfg.command == "mesh") return cmd_mesh(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    throw UsageError("unknown command '" + cfg.command + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidProfile& e) {
    err << e.what() << '\n';
    return kExitInvalidProfile;
  } catch (const MeshError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra and embeddability of rotationally symmetric spheres"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string builtin, expr, file;
  double tol_bc = 0.0;

  auto shared = [&](CLI::App* sub) {
    auto* b = sub->add_option("--builtin", builtin, "built-in profile: round | paper-example");
    auto* e = sub->add_option("--expr", expr, "profile f(x) as an expression");
    auto* f = sub->add_option("--profile", file, "profile definition file (JSON)");
    b->excludes(e, f);
    e->excludes(f);
    sub->add_option("--tol", tol_bc, "boundary-condition tolerance");
    sub->add_option("--basis-cap", cfg.basis_cap, "largest Galerkin basis");
    sub->add_option("--cluster-tol", cfg.cluster_tol, "relative tolerance for merging eigenvalues");
    sub->add_option("--target", cfg.target_rel_err, "per-eigenvalue convergence target");
    sub->add_option("--out", cfg.out, "output path (default: standard output)");
    sub->add_option("--format", cfg.format, "json | csv");
  };

  auto* analyze = app.add_subcommand("analyze", "embeddability verdict and obstruction report");
  shared(analyze);
  auto* spectrum = app.add_subcommand("spectrum", "Laplacian eigenvalues below a cutoff");
  shared(spectrum);
  spectrum->add_option("--lambda", cfg.lambda, "cutoff")->required();
  auto* mesh = app.add_subcommand("mesh", "OBJ mesh of the embedded surface");
  shared(mesh);
  mesh->add_option("--n-theta", cfg.n_theta, "vertices per ring");
  mesh->add_option("--n-samples", cfg.n_samples, "meridian samples, poles included");
  mesh->add_option("--curve-csv", cfg.curve_csv, "also write the meridian as CSV");
  auto* sweep = app.add_subcommand("sweep", "verdicts across c(1-x^2)/(1+eps x^(2n))");
  shared(sweep);
  sweep->add_option("--eps", cfg.eps, "eps values")->delimiter(',');
  sweep->add_option("--n", cfg.n, "n values")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "recompute the reference constants");
  verify->add_option("--basis-cap", cfg.basis_cap, "largest Galerkin basis");
  verify->add_option("--quad-nodes", cfg.quad_nodes, "fixed Gauss-Legendre nodes (0: adaptive)");

  std::vector<std::string> argv_storage = {"revspec"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  for (auto* sub : {analyze, spectrum, mesh, sweep, verify}) {
    if (!sub->parsed()) continue;
    cfg.command = sub->get_name();
    if (sub == verify) break;
    if (sub->count("--builtin")) cfg.builtin = builtin;
    if (sub->count("--expr")) cfg.expr = expr;
    if (sub->count("--profile")) cfg.profile_file = file;
    if (sub->count("--tol")) cfg.tol_bc = tol_bc;
  }
  if (cfg.command == "sweep" && !sweep->count("--format")) cfg.format = "csv";
  return run(cfg, out, err);
}

}  // namespace revspec::cli
