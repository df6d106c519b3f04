// Subcommand orchestration: identity suites with a fault injection hook for
// harness tests, structure analysis, deformation jobs, decompositions and
// complex-type scans. Reports use ordered json so a fixed config and seed
// dump byte identical text.
#include "genform/runner.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/MatrixFunctions>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "genform/deform.hpp"
#include "genform/spinrep.hpp"
#include "json.hpp"

namespace gf {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string load_input(const std::string& s, const char* what) {
  size_t i = s.find_first_not_of(" \t\r\n");
  if (i == std::string::npos) throw Error(std::string(what) + ": missing input");
  if (s[i] == '{') return s;
  std::ifstream f(s);
  if (!f) throw Error(std::string(what) + ": cannot read " + s);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return int(r);
}

// ---------- verify suites ----------

struct SuiteOut {
  int cases = 0;
  double residual = 0.0;
};

void bump(SuiteOut& out, double r) {
  out.residual = std::max(out.residual, r);
  ++out.cases;
}

// generator anticommutators against the split pairing, squares of vectors
SuiteOut suite_clifford(uint64_t seed, bool flip) {
  std::mt19937_64 rng(seed * 1000003 + 11);
  std::normal_distribution<double> g;
  const double sgn = flip ? -1.0 : 1.0;
  SuiteOut out;
  for (int n : {2, 3, 4}) {
    Basis b(n);
    MatrixXd id = MatrixXd::Identity(b.dim(), b.dim());
    std::vector<MatrixXd> gen(2 * n);
    for (int a = 0; a < 2 * n; ++a) gen[a] = act_generator(b, a);
    for (int p = 0; p < 2 * n; ++p)
      for (int q = 0; q < 2 * n; ++q) {
        double pair2 = 2.0 * split_pairing(VectorXd::Unit(2 * n, p), VectorXd::Unit(2 * n, q));
        bump(out, (gen[p] * gen[q] + gen[q] * gen[p] - sgn * pair2 * id).norm());
      }
    for (int t = 0; t < 10; ++t) {
      VectorXd E(2 * n);
      for (int i = 0; i < E.size(); ++i) E[i] = g(rng);
      MatrixXd M = cl_from_vv(b, E).M;
      bump(out, (M * M - sgn * split_pairing(E, E) * id).norm());
    }
  }
  return out;
}

// twisted adjoint equivariance, parity and reversal realizations, wedge
// exponentials of two forms
SuiteOut suite_spinrep(uint64_t seed, bool flip) {
  std::mt19937_64 rng(seed * 1000003 + 23);
  std::normal_distribution<double> g;
  const double sgn = flip ? -1.0 : 1.0;
  SuiteOut out;
  for (int n : {2, 3}) {
    Basis b(n);
    MatrixXd P = parity_matrix(b);
    MatrixXd C = sigma_intertwiner(b);
    for (int t = 0; t < 6; ++t) {
      CL2Element a(b);
      a.scalar = 0.2 * g(rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.endo(i, j) = 0.25 * g(rng);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          a.two_form.c[(1u << i) | (1u << j)] = 0.25 * g(rng);
          double x = 0.25 * g(rng);
          a.two_vector(i, j) = x;
          a.two_vector(j, i) = -x;
        }
      CliffordElement ge = exp_cl2(a);
      VectorXd E(2 * n);
      for (int i = 0; i < E.size(); ++i) E[i] = g(rng);
      auto ad = ad_tilde(ge, E);
      if (!ad) {
        bump(out, 1.0);
        continue;
      }
      MatrixXd lhs = involution_tilde(ge).M * cl_from_vv(b, (sgn * *ad).eval()).M;
      MatrixXd rhs = cl_from_vv(b, E).M * ge.M;
      bump(out, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
      bump(out, (P * ge.M * P - involution_tilde(ge).M).norm());
      CliffordElement odd = cl_from_vv(b, E);
      bump(out, (P * odd.M * P - involution_tilde(odd).M).norm());
      bump(out, (C * ge.M.transpose() * C.transpose() - reversal_sigma(ge).M).norm());
    }
    for (int t = 0; t < 4; ++t) {
      CL2Element a(b);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) a.two_form.c[(1u << i) | (1u << j)] = g(rng);
      Multivector phi(b);
      for (int m = 0; m < b.dim(); ++m) phi.c[m] = cplx(g(rng), g(rng));
      bump(out, (b_transform(a.two_form, phi) - act(exp_cl2(a), phi)).norm());
    }
  }
  return out;
}

// the operator series against genuine conjugation, constant and variable cases
SuiteOut suite_conjugation(uint64_t seed, bool flip) {
  std::mt19937_64 rng(seed * 1000003 + 41);
  std::normal_distribution<double> g;
  Basis b(3);
  TorusContext ctx(b);
  const double sgn = flip ? -1.0 : 1.0;
  SuiteOut out;

  auto rand_form = [&](int modes) {
    FourierForm w(b, 1, 1);
    for (int t = 0; t < modes; ++t) {
      Freq m(b.n);
      for (int j = 0; j < b.n; ++j) m[j] = int(rng() % 3) - 1;
      FormTuple tup(b, 1);
      for (int k = 0; k < b.dim(); ++k) tup.comps[0].c[k] = cplx(g(rng), g(rng));
      w.add(m, tup);
    }
    return w;
  };
  auto matmap = [&](const MatrixXcd& M, const FourierForm& u) {
    FourierForm r(b, u.l, u.trunc);
    for (const auto& [key, tup] : u.coeffs) {
      FormTuple s = tup;
      s.comps[0].c = (M * s.comps[0].c).eval();
      r.add(key_freq(key, b.n), s);
    }
    return r;
  };
  auto accumulate = [&](const std::vector<FourierForm>& zs) {
    FourierForm r(b, 1, 0);
    for (const auto& z : zs)
      for (const auto& [key, tup] : z.coeffs) r.add(key_freq(key, b.n), tup);
    return r;
  };
  auto diff_norm = [&](const FourierForm& x, const FourierForm& y) {
    FourierForm d = x;
    for (const auto& [key, tup] : y.coeffs) d.add(key_freq(key, b.n), tup * cplx(-1.0));
    return d.norm();
  };

  for (int trial = 0; trial < 3; ++trial) {
    VectorXcd v(cl2_dim(b.n));
    for (int i = 0; i < v.size(); ++i) v[i] = 0.3 * cplx(g(rng), g(rng));
    FourierCL2Field a(b, 0);
    a.real_field = false;
    a.add(Freq(b.n, 0), v);
    FourierForm w = rand_form(3);
    MatrixXcd A = ctx.assemble(v);
    MatrixXcd Ep = A.exp(), Em = (-A).exp();
    FourierForm lhs = conjugated_d(ctx, a).apply(w);
    FourierForm rhs = matmap(flip ? Ep : Em, dform(matmap(Ep, w)));
    bump(out, diff_norm(lhs, rhs) / std::max(1.0, rhs.norm()));

    FourierCL2Field af(b, 1);
    af.real_field = false;
    for (int t = 0; t < 2; ++t) {
      Freq m(b.n);
      for (int j = 0; j < b.n; ++j) m[j] = int(rng() % 3) - 1;
      VectorXcd u(cl2_dim(b.n));
      for (int i = 0; i < u.size(); ++i) u[i] = 0.12 * cplx(g(rng), g(rng));
      af.add(m, u);
    }
    const int K = 18;
    FourierForm ew = accumulate(exp_series_apply(ctx, {af}, w, K));
    FourierForm dw = conjugated_d(ctx, af.scaled(sgn)).apply(w);
    FourierForm rhs2 = accumulate(exp_series_apply(ctx, {af}, dw, K));
    bump(out, diff_norm(dform(ew), rhs2) / std::max(1.0, rhs2.norm()));
  }
  return out;
}

// eigenvalues of the two form pairing map in dimension eight
SuiteOut suite_pairing(uint64_t, bool flip) {
  Lambda2Split sp = lambda2_decompose();
  const double sgn = flip ? -1.0 : 1.0;
  SuiteOut out;
  bump(out, std::abs(sp.ev_seven - sgn * 3.0));
  bump(out, std::abs(sp.ev_twentyone + sgn * 1.0));
  bump(out, std::abs(double(sp.seven.rank() - 7)) + std::abs(double(sp.twentyone.rank() - 21)));
  bump(out, sp.annihilation_residual);
  return out;
}

// quaternion relations and the shared metric involution
SuiteOut suite_hk(uint64_t, bool flip) {
  HkReport r = hk_relations(make_hk(1));
  SuiteOut out;
  out.cases = 6;
  out.residual = r.max_residual();
  if (flip) {
    MatrixXd id = MatrixXd::Identity(r.G.rows(), r.G.cols());
    out.residual = std::max(out.residual, (r.G * r.G + id).norm());
  }
  return out;
}

struct SuiteEntry {
  const char* name;
  SuiteOut (*fn)(uint64_t, bool);
};
constexpr SuiteEntry kSuites[] = {
    {"clifford", suite_clifford},   {"spinrep", suite_spinrep},
    {"conjugation", suite_conjugation}, {"pairing", suite_pairing},
    {"hyperkahler", suite_hk},
};

std::pair<ordered_json, int> cmd_verify(const RunConfig& cfg) {
  const double tol = cfg.tol.value_or(1e-9);
  if (tol <= 0) throw Error("verify: tol must be positive");
  bool known_filter = cfg.suite.empty(), known_flip = cfg.flip_suite.empty();
  for (const auto& s : kSuites) {
    known_filter |= cfg.suite == s.name;
    known_flip |= cfg.flip_suite == s.name;
  }
  if (!known_filter) throw Error("verify: unknown suite " + cfg.suite);
  if (!known_flip) throw Error("verify: unknown suite " + cfg.flip_suite);

  ordered_json rep;
  rep["command"] = "verify";
  rep["seed"] = cfg.seed;
  rep["tol"] = tol;
  rep["suites"] = ordered_json::array();
  bool all = true;
  std::string first_fail;
  for (const auto& s : kSuites) {
    if (!cfg.suite.empty() && cfg.suite != s.name) continue;
    SuiteOut o = s.fn(cfg.seed, cfg.flip_suite == s.name);
    bool pass = o.residual <= tol;
    if (!pass && first_fail.empty()) first_fail = s.name;
    all = all && pass;
    rep["suites"].push_back(ordered_json{
        {"name", s.name}, {"cases", o.cases}, {"residual", o.residual}, {"pass", pass}});
  }
  rep["pass"] = all;
  if (!all) rep["first_failure"] = first_fail;
  return {rep, all ? kExitOk : kExitTolerance};
}

// ---------- analyze ----------

std::pair<ordered_json, int> cmd_analyze(const RunConfig& cfg) {
  StructureSpec spec = structure_from_json(load_input(cfg.input, "analyze"));
  BuiltStructure built = build_structure(spec);
  const FormTuple& phi = built.tuples.front();
  ordered_json rep;
  rep["command"] = "analyze";
  rep["spec"] = ordered_json::parse(to_json(spec));
  bool pass = true;

  IsotropyReport iso = isotropy_algebra(phi);
  rep["isotropy"] = ordered_json{{"dim", iso.dim()},
                                 {"endo_rank", iso.endo_rank},
                                 {"form_rank", iso.form_rank},
                                 {"bracket_residual", iso.bracket_residual}};
  pass = pass && iso.bracket_residual <= 1e-8;

  FiberComplex fc = fiber_complex(phi, 3);
  rep["fiber"] = ordered_json{{"complex_dims", fc.complex_dims},
                              {"real_dims", fc.real_dims},
                              {"nesting_residual", fc.nesting_residual}};
  pass = pass && fc.nesting_residual <= 1e-8;

  std::mt19937_64 rng(cfg.seed * 1000003 + 71);
  std::normal_distribution<double> g;
  const int samples = 20;
  bool all_exact = true;
  double worst_sym = 0.0;
  for (int t = 0; t < samples; ++t) {
    VectorXd xi(built.basis.n);
    for (int j = 0; j < xi.size(); ++j) xi[j] = g(rng);
    xi.normalize();
    SymbolReport sr = symbol_complex(fc, xi);
    all_exact = all_exact && sr.all_exact;
    worst_sym = std::max(worst_sym, sr.image_residual);
  }
  rep["symbol"] = ordered_json{
      {"samples", samples}, {"all_exact", all_exact}, {"worst_image_residual", worst_sym}};
  pass = pass && all_exact;

  int trunc = cfg.trunc.value_or(built.basis.n <= 4 ? 2 : 1);
  if (trunc < 0) throw Error("analyze: trunc must be nonnegative");
  if (trunc > 0) {
    LevelChain chain = sweep_chain(fc);
    TopologicalReport tr = topological_check(chain, trunc);
    rep["topological"] = ordered_json{{"trunc", trunc},
                                      {"frequencies", tr.frequencies_checked},
                                      {"tested_levels", tr.tested_levels},
                                      {"zero_dims", tr.zero_dims},
                                      {"worst_dims", tr.worst_dims},
                                      {"pass", tr.pass}};
    pass = pass && tr.pass;
  } else {
    rep["topological"] = ordered_json{{"skipped", true}};
  }

  if (spec.kind == "spin7") {
    AsdReport ar = asd_even_check(fc, standard_metric(built.basis));
    rep["antiselfdual"] = ordered_json{{"dim_even_minus", ar.dim_even_minus},
                                       {"containment_residual", ar.containment_residual},
                                       {"line_residual", ar.line_residual},
                                       {"sym4_rank", ar.sym4_rank},
                                       {"family_span", ar.family_span}};
    pass = pass && ar.containment_residual <= 1e-8;
  }
  if (spec.kind == "hk") {
    HkReport hr = hk_relations(built.tuples);
    bool hk_ok = hr.max_residual() <= 1e-9;
    rep["relations"] = ordered_json{{"quaternion_residual", hr.quaternion_residual},
                                    {"common_g_residual", hr.common_g_residual},
                                    {"g_square_residual", hr.g_square_residual},
                                    {"g_orthogonal_residual", hr.g_orthogonal_residual},
                                    {"pass", hk_ok}};
    pass = pass && hk_ok;
  }
  if (spec.kind == "cy") {
    CyKernelReport kr = cy_kernel_fibers(built.tuples[0], built.tuples[1]);
    rep["kernels"] = ordered_json{{"upq_total", kr.upq_total},
                                  {"ker_dims", kr.ker_dims},
                                  {"commute_residual", kr.commute_residual},
                                  {"ker1_match_residual", kr.ker1_match_residual}};
    pass = pass && kr.commute_residual <= 1e-8 && kr.ker1_match_residual <= 1e-8;
  }
  rep["pass"] = pass;
  return {rep, pass ? kExitOk : kExitTolerance};
}

// ---------- decompose ----------

std::pair<ordered_json, int> cmd_decompose(const RunConfig& cfg) {
  StructureSpec spec = structure_from_json(load_input(cfg.input, "decompose"));
  if (spec.kind == "g2" || spec.kind == "spin7")
    throw Error("decompose: the " + spec.kind + " spinor has no annihilator tower, use analyze");
  BuiltStructure built = build_structure(spec);
  const FormTuple& phi = built.tuples.front();
  const int n = built.basis.n;
  ordered_json rep;
  rep["command"] = "decompose";
  rep["spec"] = ordered_json::parse(to_json(spec));

  IsotropicData ud = u_spaces(phi);
  int overlap = span_intersect(ud.L, ud.Lbar).dim();
  rep["annihilator_dim"] = ud.L.dim();
  rep["conjugate_dim"] = ud.Lbar.dim();
  rep["overlap_dim"] = overlap;
  std::vector<int> dims;
  int total = 0;
  for (const auto& u : ud.U) {
    dims.push_back(u.dim());
    total += u.dim();
  }
  rep["tower_dims"] = dims;
  rep["tower_total"] = total;

  bool pure = ud.L.dim() == n && overlap == 0;
  rep["pure"] = pure;
  bool pass = true;
  if (pure) {
    std::vector<int> expect(n + 1);
    for (int i = 0; i <= n; ++i) expect[i] = binom(n, i);
    bool match = dims == expect;
    rep["expected_dims"] = expect;
    rep["dims_match"] = match;
    MatrixXd J = gcs_from_spinor(phi);
    double jr = (J * J + MatrixXd::Identity(J.rows(), J.cols())).norm();
    rep["j_square_residual"] = jr;
    pass = match && jr <= 1e-9;
  }
  rep["pass"] = pass;
  return {rep, pass ? kExitOk : kExitTolerance};
}

// ---------- ddj ----------

std::pair<ordered_json, int> cmd_ddj(const RunConfig& cfg) {
  std::string text =
      cfg.input.empty() ? std::string(R"({"kind":"sl","n":2})") : load_input(cfg.input, "ddj");
  StructureSpec spec = structure_from_json(text);
  if (spec.kind != "sl" && spec.kind != "cy")
    throw Error("ddj: needs a complex type decomposition, use kind sl or cy");
  BuiltStructure built = build_structure(spec);
  const FormTuple& phi = built.tuples.front();
  int trunc = cfg.trunc.value_or(2);
  if (trunc < 1) throw Error("ddj: trunc must be positive");

  DdjReport dr = ddj_check(phi, trunc);
  ordered_json rep;
  rep["command"] = "ddj";
  rep["spec"] = ordered_json::parse(to_json(spec));
  rep["trunc"] = dr.trunc;
  rep["frequencies"] = dr.frequencies_checked;
  rep["split_residual"] = dr.split_residual;
  rep["equivalence_residual"] = dr.equivalence_residual;
  rep["zero_ranks"] = dr.zero_ranks;
  bool pass = dr.pass;
  if (spec.kind == "sl") {
    SlSequenceReport sr = sl_sequence_check(phi);
    rep["sequence"] = ordered_json{{"h1", sr.h1},
                                   {"hm1", sr.hm1},
                                   {"h2bar", sr.h2bar},
                                   {"match", sr.match},
                                   {"bfield_invariant", sr.bfield_invariant}};
    pass = pass && sr.match && sr.bfield_invariant;
  }
  rep["pass"] = pass;
  return {rep, pass ? kExitOk : kExitTolerance};
}

// ---------- deform ----------

std::pair<ordered_json, int> cmd_deform(const RunConfig& cfg) {
  ordered_json job = ordered_json::parse(load_input(cfg.input, "deform"));
  if (!job.is_object() || !job.contains("structure"))
    throw Error("deform: job json needs a structure");
  StructureSpec spec = structure_from_json(job["structure"].dump());
  BuiltStructure built = build_structure(spec);
  const FormTuple& phi = built.tuples.front();

  DeformOptions opt;
  opt.order = cfg.order.value_or(job.value("order", opt.order));
  opt.trunc = cfg.trunc.value_or(job.value("trunc", opt.trunc));
  if (opt.order < 1) throw Error("deform: order must be positive");
  if (opt.trunc < 0) throw Error("deform: trunc must be nonnegative");
  if (job.contains("tolerances")) {
    const auto& t = job["tolerances"];
    opt.obstruction_rel = t.value("obstruction_rel", opt.obstruction_rel);
    opt.obstruction_abs = t.value("obstruction_abs", opt.obstruction_abs);
    opt.closed_tol = t.value("closed_tol", opt.closed_tol);
    opt.preimage_tol = t.value("preimage_tol", opt.preimage_tol);
    opt.residual_tol = t.value("residual_tol", opt.residual_tol);
  }
  opt.spin7_route = spec.kind == "spin7";

  FourierCL2Field a1(built.basis, 0);
  if (job.contains("a1")) {
    a1 = cl2_field_from_json(job["a1"].dump());
    if (a1.basis.n != built.basis.n) throw Error("deform: a1 basis does not match the structure");
  }

  DeformationSeries s = deform(phi, a1, opt);
  const char* st = "ok";
  int code = kExitOk;
  switch (s.status) {
    case DeformStatus::Ok:
      break;
    case DeformStatus::Obstructed:
      st = "obstructed";
      code = kExitObstructed;
      break;
    case DeformStatus::TruncationTooSmall:
      st = "truncation_too_small";
      code = kExitTruncation;
      break;
    case DeformStatus::InternalTolerance:
      st = "internal_tolerance";
      code = kExitTolerance;
      break;
  }

  ordered_json rep;
  rep["command"] = "deform";
  rep["spec"] = ordered_json::parse(to_json(spec));
  rep["order"] = opt.order;
  rep["trunc"] = opt.trunc;
  rep["status"] = st;
  rep["failed_order"] = s.failed_order;
  rep["failure_norm"] = s.failure_norm;
  rep["orders"] = ordered_json::array();
  for (const auto& r : s.orders)
    rep["orders"].push_back(ordered_json{{"order", r.order},
                                         {"ob_norm", r.ob_norm},
                                         {"ob_harmonic", r.ob_harmonic},
                                         {"e2_defect", r.e2_defect},
                                         {"preimage_residual", r.preimage_residual},
                                         {"gauge_overlap", r.gauge_overlap},
                                         {"correction_d_residual", r.correction_d_residual},
                                         {"correction_asd_residual", r.correction_asd_residual}});
  rep["residuals"] = s.residuals;
  rep["period_derivative_norm"] = s.a.empty() ? 0.0 : period_derivative(s).norm();
  rep["coefficients"] = ordered_json::array();
  for (const auto& ak : s.a) rep["coefficients"].push_back(ordered_json::parse(to_json(ak)));
  rep["pass"] = code == kExitOk;
  return {rep, code};
}

void render_node(const ordered_json& j, int indent, std::string& out) {
  std::string pad(2 * size_t(indent), ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& v = it.value();
      bool nested = v.is_object() || (v.is_array() && !v.empty() && v.front().is_structured());
      if (nested) {
        out += pad + it.key() + ":\n";
        render_node(v, indent + 1, out);
      } else {
        out += pad + it.key() + ": " + v.dump() + "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_structured()) {
        out += pad + "-\n";
        render_node(v, indent + 1, out);
      } else {
        out += pad + "- " + v.dump() + "\n";
      }
    }
  } else {
    out += pad + j.dump() + "\n";
  }
}

}  // namespace

RunResult run_command(const RunConfig& cfg) {
  RunResult res;
  ordered_json rep;
  try {
    std::pair<ordered_json, int> r;
    if (cfg.command == "verify")
      r = cmd_verify(cfg);
    else if (cfg.command == "analyze")
      r = cmd_analyze(cfg);
    else if (cfg.command == "deform")
      r = cmd_deform(cfg);
    else if (cfg.command == "decompose")
      r = cmd_decompose(cfg);
    else if (cfg.command == "ddj")
      r = cmd_ddj(cfg);
    else
      throw Error("unknown command " + cfg.command);
    rep = std::move(r.first);
    res.exit_code = r.second;
  } catch (const std::exception& e) {
    rep = ordered_json{{"command", cfg.command}, {"error", e.what()}};
    res.exit_code = kExitConfig;
  }
  res.report = rep.dump(2);
  return res;
}

std::string text_view(const std::string& report_json) {
  ordered_json j = ordered_json::parse(report_json);
  std::string out;
  render_node(j, 0, out);
  return out;
}

int apply_thread_cap() {
  const char* s = std::getenv("GENFORM_THREADS");
  if (!s || !*s) return 0;
  int k = 0;
  try {
    size_t used = 0;
    k = std::stoi(s, &used);
    if (used != std::string(s).size()) k = 0;
  } catch (...) {
    k = 0;
  }
  if (k < 1) throw Error("GENFORM_THREADS must be a positive integer");
  Eigen::setNbThreads(k);
  return k;
}

}  // namespace gf
