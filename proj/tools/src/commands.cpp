#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "onsager/error.hpp"
#include "onsager/lattice3.hpp"
#include "sweep.hpp"
#include "validation.hpp"

namespace onsager::cli {

using Json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

struct Setup {
  ReversibleChain chain;
  MobilityModel model;
};

Setup setup(const RunConfig& cfg) {
  if (cfg.chain.preset.empty() && cfg.chain.rates.empty())
    throw ConfigError("config error: key 'chain': missing (set it in the config or pass --preset)");
  return {make_chain(cfg.chain), make_model(cfg.mobility)};
}

VertexField as_vertex(const std::vector<double>& v, int n, const std::string& key) {
  if (static_cast<int>(v.size()) != n)
    throw ConfigError("config error: key '" + key + "': expected " + std::to_string(n) + " entries, got " +
                      std::to_string(v.size()));
  return Eigen::Map<const VertexField>(v.data(), n);
}

VertexField require_point(const RunConfig& cfg, int n) {
  if (!cfg.point) throw ConfigError("config error: key 'point': missing");
  return as_vertex(*cfg.point, n, "point");
}

Json to_json(const VertexField& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(to_json(VertexField(m.row(i).transpose())));
  return a;
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

void header(std::ostream& out, const std::vector<std::string>& cols) {
  for (size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
}

std::vector<std::string> indexed(const std::string& stem, int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
  return v;
}

void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

void row(std::ostream& out, const std::vector<double>& values) {
  for (size_t k = 0; k < values.size(); ++k) out << (k ? "," : "") << fmt(values[k]);
  out << '\n';
}

void push(std::vector<double>& v, const VertexField& x) {
  for (int i = 0; i < x.size(); ++i) v.push_back(x(i));
}

BvpOptions bvp_options(const RunConfig& cfg) {
  BvpOptions o;
  o.steps = cfg.bvp.steps;
  o.max_iterations = cfg.bvp.max_iterations;
  o.restarts = cfg.bvp.restarts;
  o.tolerance = cfg.bvp.tolerance;
  o.seed = cfg.seed;
  return o;
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = setup(cfg);
  const int n = s.chain.n();
  const SimplexPoint p(cfg.point ? as_vertex(*cfg.point, n, "point") : SimplexPoint::uniform(n).p());
  const CurvatureReport rep = analyze_curvature(s.chain, s.model, p);

  Json j;
  j["chain"] = {{"n", n}, {"pi", to_json(s.chain.pi())}};
  j["model"] = s.model.describe();
  j["point"] = to_json(rep.point);
  const int d = rep.riemann.dim();
  Json comps = Json::array();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) comps.push_back(rep.riemann(a, b, c, e));
  j["frame_dim"] = d;
  j["riemann"] = comps;
  j["sectional"] = to_json(rep.sectional);
  j["ricci"] = to_json(rep.ricci);
  j["scalar"] = rep.scalar;
  j["oracle_residual"] = rep.oracle_residual;
  j["explicit_residual"] = rep.explicit_residual;
  j["koszul_residual"] = rep.koszul_residual;
  j["symmetry"] = {{"antisym_ab", rep.symmetry.antisym_ab},
                   {"antisym_cd", rep.symmetry.antisym_cd},
                   {"pair", rep.symmetry.pair},
                   {"bianchi", rep.symmetry.bianchi}};
  Json cands = Json::array();
  const auto candidates = m_candidates();
  for (size_t k = 0; k < candidates.size(); ++k)
    cands.push_back({{"label", candidates[k].label()}, {"oracle_residual", rep.m.residuals[k]}});
  j["m_convention"] = {{"chosen", rep.m.chosen.label()}, {"decisive", rep.m.decisive}, {"candidates", cands}};

  if (is_unit_lattice3(s.chain)) {
    const Lattice3Forms f = lattice3_closed_forms(s.chain, s.model, p);
    const Lattice3General g = lattice3_general(LocalGeometry(s.chain, s.model, p));
    j["lattice3"] = {{"theta1", f.theta1},
                     {"theta2", f.theta2},
                     {"K12", f.K12},
                     {"R11", f.R11},
                     {"R22", f.R22},
                     {"S", f.S},
                     {"K12_table", opt(f.K12_table)},
                     {"K12_f_mean", opt(f.K12_f_mean)},
                     {"K12_example", opt(f.K12_example)},
                     {"R11_example", opt(f.R11_example)},
                     {"R22_example", opt(f.R22_example)},
                     {"S_example", opt(f.S_example)},
                     {"example", f.example},
                     {"singular", f.singular},
                     {"general", {{"K12", g.K12}, {"R11", g.R11}, {"R22", g.R22}, {"R12", g.R12}, {"S", g.S}}}};
  }
  const bool ok = rep.oracle_residual <= cfg.oracle_tolerance;
  j["status"] = ok ? "ok" : "oracle-mismatch";
  out << j.dump(2) << '\n';
  if (!ok) {
    err << "error: OracleMismatch: chart oracle residual " << fmt(rep.oracle_residual) << " exceeds "
        << fmt(cfg.oracle_tolerance) << '\n';
    return kNumericalError;
  }
  return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Setup s = setup(cfg);
  const int n = s.chain.n();
  const SimplexPoint p0(require_point(cfg, n));
  const Trajectory tr = integrate(s.chain, s.model, p0, cfg.T, cfg.dt);
  std::vector<std::string> cols{"t"};
  append(cols, indexed("p", n));
  append(cols, {"D_f", "dissipation_quadratic", "dissipation_edgesum"});
  header(out, cols);
  for (size_t k = 0; k < tr.times.size(); ++k) {
    std::vector<double> v{tr.times[k]};
    push(v, tr.states[k]);
    v.insert(v.end(), {tr.energy[k], tr.dissipation_quadratic[k], tr.dissipation_edgesum[k]});
    row(out, v);
  }
  return kOk;
}

int cmd_geodesic(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = setup(cfg);
  const int n = s.chain.n();
  const SimplexPoint p0(require_point(cfg, n));
  GeodesicRecord rec;
  if (cfg.target) {
    const SimplexPoint p1(as_vertex(*cfg.target, n, "target"));
    BvpResult res = geodesic_bvp(s.chain, s.model, p0, p1, bvp_options(cfg));
    err << "boundary residual " << fmt(res.residual) << ", length " << fmt(res.length) << '\n';
    rec = std::move(res.path);
  } else {
    const VertexField phi0 = cfg.phi0 ? as_vertex(*cfg.phi0, n, "phi0") : VertexField::Zero(n);
    rec = geodesic_ivp(s.chain, s.model, p0, phi0, cfg.T, cfg.dt);
  }
  std::vector<std::string> cols{"t"};
  append(cols, indexed("gamma", n));
  append(cols, indexed("phi", n));
  cols.push_back("speed");
  header(out, cols);
  for (size_t k = 0; k < rec.times.size(); ++k) {
    std::vector<double> v{rec.times[k]};
    push(v, rec.gamma[k]);
    push(v, rec.phi[k]);
    v.push_back(rec.speed[k]);
    row(out, v);
  }
  return kOk;
}

int cmd_transport(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = setup(cfg);
  const int n = s.chain.n();
  const SimplexPoint p0(require_point(cfg, n));
  if (cfg.eta.empty()) throw ConfigError("config error: key 'eta': missing");
  std::vector<VertexField> eta;
  for (size_t k = 0; k < cfg.eta.size(); ++k)
    eta.push_back(as_vertex(cfg.eta[k], n, "eta[" + std::to_string(k) + "]"));

  GeodesicPath path{p0.p(), VertexField::Zero(n), cfg.T, cfg.dt};
  if (cfg.target) {
    const SimplexPoint p1(as_vertex(*cfg.target, n, "target"));
    const BvpResult res = geodesic_bvp(s.chain, s.model, p0, p1, bvp_options(cfg));
    err << "boundary residual " << fmt(res.residual) << '\n';
    path.phi0 = res.phi0;
    path.T = 1.0;
  } else if (cfg.phi0) {
    path.phi0 = as_vertex(*cfg.phi0, n, "phi0");
  }
  const auto states = parallel_transport(s.chain, s.model, path, eta);

  const int m = static_cast<int>(eta.size());
  std::vector<std::string> cols{"t"};
  append(cols, indexed("gamma", n));
  append(cols, indexed("phi", n));
  for (int k = 1; k <= m; ++k)
    append(cols, indexed(m == 1 ? "eta" : "eta" + std::to_string(k) + "_", n));
  cols.push_back("speed");
  for (int a = 1; a <= m; ++a)
    for (int b = a; b <= m; ++b) cols.push_back("gram_" + std::to_string(a) + "_" + std::to_string(b));
  header(out, cols);
  for (const auto& st : states) {
    std::vector<double> v{st.t};
    push(v, st.gamma);
    push(v, st.phi);
    for (const auto& e : st.eta) push(v, e);
    const Eigen::MatrixXd L = onsager_L(s.chain, theta_jet_unchecked(s.model, s.chain, st.gamma).theta);
    v.push_back(std::sqrt(std::max(0.0, st.phi.dot(L * st.phi))));
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) v.push_back(st.eta[a].dot(L * st.eta[b]));
    row(out, v);
  }
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Setup s = setup(cfg);
  if (!is_unit_lattice3(s.chain))
    throw ConfigError("config error: key 'chain': sweep needs the lattice3 preset");
  const auto rows = run_sweep(s.chain, s.model, cfg.grid);
  header(out, {"p1", "p2", "p3", "K12", "R11", "R22", "S", "oracle_residual", "status"});
  int flagged = 0;
  for (const auto& r : rows) {
    for (double x : {r.p1, r.p2, r.p3, r.K12, r.R11, r.R22, r.S, r.oracle_residual}) out << fmt(x) << ',';
    out << r.status << '\n';
    if (r.status != "ok") ++flagged;
  }
  err << rows.size() << " grid points, " << flagged << " flagged\n";
  return kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SuiteOptions opts;
  opts.seed = cfg.seed;
  return report_results(run_suite(opts), out, err);
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw ConfigError("config error: key 'out': cannot open '" + cfg.out + "'");
      sink = &file;
    }
    if (name == "analyze") return cmd_analyze(cfg, *sink, err);
    if (name == "simulate") return cmd_simulate(cfg, *sink, err);
    if (name == "geodesic") return cmd_geodesic(cfg, *sink, err);
    if (name == "transport") return cmd_transport(cfg, *sink, err);
    if (name == "sweep") return cmd_sweep(cfg, *sink, err);
    if (name == "validate") return cmd_validate(cfg, *sink, err);
    throw ConfigError("unknown command '" + name + "'");
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace onsager::cli
