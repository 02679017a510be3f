// giant: command-line front end for the library.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "giant/digraph.hpp"
#include "giant/enumerate.hpp"
#include "giant/mc.hpp"
#include "giant/peel.hpp"
#include "giant/theory.hpp"
#include "giant/validate.hpp"

using nlohmann::json;
using namespace giant;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string in;
  std::string model = "nm";
  int n = 0;
  double c = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

std::uint64_t resolve_seed(Source& s) {
  if (!s.seed_given) {
    std::random_device rd;
    s.seed = (std::uint64_t{rd()} << 32) | rd();
    std::cerr << "seed: " << s.seed << "\n";
  }
  return s.seed;
}

Digraph generate(Source& s) {
  if (s.n < 1) throw UsageError("--n must be positive");
  if (!(s.c >= 0)) throw UsageError("--c must be non-negative");
  const Model m = parse_model(s.model);
  const std::uint64_t seed = resolve_seed(s);
  if (m == Model::nm) return sample_dnm(s.n, std::llround(s.c * s.n), seed);
  return sample_dnp(s.n, std::min(1.0, s.c / s.n), seed);
}

Digraph load(Source& s) {
  if (s.in.empty()) return generate(s);
  if (s.in == "-") return read_edge_list(std::cin);
  std::ifstream f(s.in);
  if (!f) throw std::runtime_error("cannot open " + s.in);
  return read_edge_list(f);
}

void add_source(CLI::App* cmd, Source& s, bool with_in) {
  if (with_in) cmd->add_option("--in", s.in, "edge-list file ('-' for stdin); otherwise sample with --n/--c");
  cmd->add_option("--model", s.model, "nm (m = round(c n)) or np (p = c/n)")->check(CLI::IsMember({"nm", "np"}));
  cmd->add_option("--n", s.n, "vertices");
  cmd->add_option("--c", s.c, "arc density");
  cmd->add_option("--seed", s.seed, "seed (printed when omitted)")->each([&s](const std::string&) {
    s.seed_given = true;
  });
}

// Writes to a path, or stdout for "-".
void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }
json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec(m.row(i).transpose()));
  return rows;
}

json source_json(const Source& s, const Digraph& d) {
  json j;
  if (!s.in.empty()) j["in"] = s.in;
  else {
    j["model"] = s.model;
    j["c"] = s.c;
    if (s.model == "nm") j["m"] = d.m();
    else j["p"] = s.c / s.n;
    j["seed"] = std::to_string(s.seed);
  }
  j["n"] = d.n();
  return j;
}

StateVector parse_state(const std::string& text) {
  std::vector<std::int64_t> v;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stoll(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("--state expects nu,ni,no,mu");
    }
  }
  if (v.size() != 4) throw UsageError("--state expects nu,ni,no,mu");
  return {v[0], v[1], v[2], v[3]};
}

std::string opt(const std::optional<std::pair<double, double>>& f, int which) {
  if (!f) return "";
  std::ostringstream os;
  os.precision(12);
  os << (which == 0 ? f->first : f->second);
  return os.str();
}

void print_checks(const std::vector<CheckResult>& rs, bool& ok) {
  for (const CheckResult& r : rs) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds << " s)  " << r.detail << "\n";
    ok = ok && r.pass;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Giant strong component of sparse random digraphs"};
  app.require_subcommand(1);

  Source gen_src;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "sample a digraph and print its edge list");
  add_source(gen, gen_src, false);
  gen->add_option("--out", gen_out, "output file ('-' for stdout)");

  Source scc_src;
  std::string scc_json;
  auto* scc = app.add_subcommand("scc", "strong components summary");
  add_source(scc, scc_src, true);
  scc->add_option("--json", scc_json, "JSON output path ('-' for stdout)");

  Source core_src;
  std::string core_out;
  auto* core = app.add_subcommand("core", "(1,1)-core");
  add_source(core, core_src, true);
  core->add_option("--out", core_out, "write the core as an edge list");

  Source peel_src;
  std::string peel_trace, peel_json;
  auto* peel = app.add_subcommand("peel", "run the randomized deletion process");
  add_source(peel, peel_src, true);
  peel->add_option("--trace", peel_trace, "CSV trace path");
  peel->add_option("--json", peel_json, "JSON summary path ('-' for stdout)");

  std::string kernel_state;
  bool kernel_approx = false;
  auto* kernel = app.add_subcommand("kernel", "one-step transition kernel as CSV");
  kernel->add_option("--state", kernel_state, "nu,ni,no,mu")->required();
  kernel->add_flag("--approx", kernel_approx, "substochastic q-kernel instead of the exact one");

  int oracle_nu = 5, oracle_mu = 6;
  auto* oracle = app.add_subcommand("oracle", "exact vs definitional kernel and counting bounds");
  oracle->add_option("--max-nu", oracle_nu)->check(CLI::Range(1, 6));
  oracle->add_option("--max-mu", oracle_mu)->check(CLI::NonNegativeNumber);

  double th_c = 2.0;
  std::vector<double> th_eps;
  std::string th_json;
  auto* theory_cmd = app.add_subcommand("theory", "limiting means and covariances");
  theory_cmd->add_option("--c", th_c, "arc density (> 1)");
  theory_cmd->add_option("--eps-series", th_eps, "evaluate B~ at c = 1 + eps")->delimiter(',');
  theory_cmd->add_option("--json", th_json, "JSON output path ('-' for stdout)");

  Source mc_src;
  mc_src.n = 4000;
  mc_src.c = 2.0;
  int mc_trials = 400;
  std::string mc_json, mc_csv;
  auto* mc = app.add_subcommand("mc", "Monte Carlo experiment");
  add_source(mc, mc_src, false);
  mc->add_option("--trials", mc_trials);
  mc->add_option("--json", mc_json, "JSON report path ('-' for stdout)");
  mc->add_option("--csv", mc_csv, "per-trial CSV path");

  bool quick = false;
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_flag("--quick", quick, "oracle-scale and theory checks only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      const Digraph d = generate(gen_src);
      std::ostringstream os;
      write_edge_list(os, d);
      emit(gen_out, os.str());
    } else if (*scc) {
      const Digraph d = load(scc_src);
      const SccPartition p = strongly_connected_components(d);
      const LargestScc g = largest_scc(d);
      json j{{"schema", "1"}, {"source", source_json(scc_src, d)}, {"components", p.count},
             {"largest", {{"vertices", g.vertices}, {"arcs", g.arcs}}}};
      if (!scc_json.empty()) emit(scc_json, j.dump(2) + "\n");
      else std::cout << "components " << p.count << "\nlargest vertices " << g.vertices << " arcs " << g.arcs << "\n";
    } else if (*core) {
      const Digraph d = load(core_src);
      const Subgraph cs = core_11(d);
      if (!core_out.empty()) {
        std::ostringstream os;
        write_edge_list(os, cs.graph);
        emit(core_out, os.str());
      }
      if (core_out != "-") std::cout << "core vertices " << cs.graph.n() << " arcs " << cs.graph.m() << "\n";
    } else if (*peel) {
      const Digraph d = load(peel_src);
      const std::uint64_t seed = peel_src.in.empty() ? peel_src.seed : resolve_seed(peel_src);
      const PeelResult res = run_deletion(d, seed);
      if (!peel_trace.empty()) {
        std::ostringstream os;
        os << "t,nu,nu_i,nu_o,mu,a,b,r_i,r_o,k,F1,F2\n";
        const auto& tr = res.traj;
        for (std::size_t t = 0; t < tr.states.size(); ++t) {
          const StateVector& s = tr.states[t];
          os << t << ',' << s.nu << ',' << s.ni << ',' << s.no << ',' << s.mu << ',';
          if (t == 0) os << ",,,,,";
          else {
            const TransitionDelta& dl = tr.deltas[t - 1];
            os << dl.a << ',' << dl.b << ',' << dl.ri << ',' << dl.ro << ',' << dl.k << ',';
          }
          os << opt(tr.f_track[t], 0) << ',' << opt(tr.f_track[t], 1) << "\n";
        }
        emit(peel_trace, os.str());
      }
      json j{{"schema", "1"},
             {"source", source_json(peel_src, d)},
             {"seed", std::to_string(seed)},
             {"steps", res.traj.deltas.size()},
             {"core", {{"vertices", res.core.graph.n()}, {"arcs", res.core.graph.m()}}}};
      if (!peel_json.empty()) emit(peel_json, j.dump(2) + "\n");
      else
        std::cout << "steps " << res.traj.deltas.size() << "\ncore vertices " << res.core.graph.n() << " arcs "
                  << res.core.graph.m() << "\n";
    } else if (*kernel) {
      const StateVector s = parse_state(kernel_state);
      if (s.nu < 1 || s.ni < 0 || s.no < 0 || s.mu < 0 || s.ni + s.no > s.nu || s.ni + s.no == 0)
        throw UsageError("--state must have nu >= nu_i + nu_o >= 1");
      if (!kernel_approx && s.nu > 6) throw UsageError("exact kernel needs nu <= 6 (use --approx)");
      const TransitionKernel k = kernel_approx ? q_transition(s).kernel : exact_transition(s);
      std::cout.precision(17);
      std::cout << "flavor,a,b,r_i,r_o,k,p\n";
      for (const KernelEntry& e : k.entries)
        std::cout << (e.delta.flavor == Flavor::in ? "i" : "o") << ',' << e.delta.a << ',' << e.delta.b << ','
                  << e.delta.ri << ',' << e.delta.ro << ',' << e.delta.k << ',' << e.p << "\n";
    } else if (*oracle) {
      bool ok = true;
      print_checks(oracle_suite(oracle_nu, oracle_mu), ok);
      return ok ? 0 : 1;
    } else if (*theory_cmd) {
      if (!(th_c > 1)) throw UsageError("--c must exceed 1");
      const BMatrices b = b_matrices(th_c);
      const double th = theta(th_c);
      const Characteristic ch = integrate_characteristic(likely_initial_w(th_c));
      json j{{"schema", "1"},
             {"c", th_c},
             {"theta", th},
             {"mean", {th * th, th_c * th * th}},
             {"psi", mat(b.psi)},
             {"B", mat(b.B)},
             {"B_tilde", mat(b.Btilde)},
             {"B_np", mat(b.Bnp)},
             {"K", mat(b.K)},
             {"mu_prime", vec(b.mu_prime)},
             {"diagnostics",
              {{"quadrature_panels", b.quad.panels},
               {"quadrature_last_change", b.quad.last_change},
               {"ode_steps", ch.steps},
               {"max_integral_residual", ch.max_integral_drift},
               {"max_f_residual", ch.max_f_drift},
               {"endpoint", vec(ch.end)}}}};
      json series = json::array();
      for (double e : th_eps) {
        if (!(e > 0)) throw UsageError("--eps-series values must be positive");
        const Eigen::Matrix2d bt = b_matrices(1 + e).Btilde;
        series.push_back({{"eps", e},
                          {"B_tilde", mat(bt)},
                          {"scaled", {bt(0, 0) / e, bt(0, 1) / (e * e), bt(1, 1) / (e * e * e)}}});
      }
      if (!th_eps.empty()) j["eps_series"] = series;
      if (!th_json.empty()) emit(th_json, j.dump(2) + "\n");
      else {
        std::cout.precision(10);
        std::cout << "theta " << th << "\nmean " << th * th << " " << th_c * th * th << "\nB " << b.B(0, 0) << " "
                  << b.B(0, 1) << " " << b.B(1, 1) << "\nB_np " << b.Bnp(0, 0) << " " << b.Bnp(0, 1) << " "
                  << b.Bnp(1, 1) << "\n";
        for (const auto& s : series) std::cout << "eps " << s["eps"] << " scaled B~ " << s["scaled"] << "\n";
      }
    } else if (*mc) {
      const std::uint64_t seed = resolve_seed(mc_src);
      const Model m = parse_model(mc_src.model);
      const ExperimentReport r = run_experiment(m, mc_src.n, mc_src.c, mc_trials, seed);
      if (!mc_csv.empty()) {
        std::ostringstream os;
        os << "trial,seed,nu,nu_i,nu_o,mu,core_v,core_a,giant_v,giant_a,gap_v,gap_a\n";
        for (const TrialRecord& t : r.records)
          os << t.index << ',' << t.seed << ',' << t.s0.nu << ',' << t.s0.ni << ',' << t.s0.no << ',' << t.s0.mu
             << ',' << t.core_v << ',' << t.core_a << ',' << t.giant_v << ',' << t.giant_a << ',' << t.gap_v() << ','
             << t.gap_a() << "\n";
        emit(mc_csv, os.str());
      }
      json j{{"schema", "1"},
             {"model", model_name(m)},
             {"n", r.n},
             {"c", r.c},
             {"trials", r.trials},
             {"seed", std::to_string(seed)},
             {"core_mean", vec(r.core_mean)},
             {"giant_mean", vec(r.giant_mean)},
             {"excess_mean", vec(r.excess_mean)},
             {"initial_mean", vec(r.init_mean)},
             {"cov_defined", r.cov_defined},
             {"gap_vertices", {{"max", r.gap_v.max}, {"median", r.gap_v.median}, {"mean", r.gap_v.mean}}},
             {"gap_arcs", {{"max", r.gap_a.max}, {"median", r.gap_a.median}, {"mean", r.gap_a.mean}}},
             {"core_giant_ks", r.core_giant_ks}};
      if (m == Model::nm) j["m"] = r.m;
      else j["p"] = r.p;
      if (r.cov_defined) {
        j["core_cov"] = mat(r.core_cov);
        j["giant_cov"] = mat(r.giant_cov);
        j["excess_cov"] = mat(r.excess_cov);
        j["initial_cov"] = mat(r.init_cov);
        if (r.trials >= 200) {
          const BMatrices b = b_matrices(r.c_n);
          const NormalityDiagnostics nd = normality_diagnostics(scaled_core(r), m == Model::nm ? b.B : b.Bnp);
          json pr = json::array();
          for (const Projection& p : nd.projections)
            pr.push_back({{"direction", p.name}, {"skewness", p.skewness}, {"excess_kurtosis", p.excess_kurtosis},
                          {"ks_d", p.ks_d}, {"ks_p", p.ks_p}});
          j["normality"] = {{"mean_z", vec(nd.mean_z)}, {"whitened_cov", mat(nd.whitened_cov)}, {"projections", pr}};
        }
      }
      if (!mc_json.empty()) emit(mc_json, j.dump(2) + "\n");
      else std::cout << j.dump(2) << "\n";
    } else if (*validate) {
      bool ok = true;
      if (quick) print_checks(quick_suite(), ok);
      else
        for (int k = 1; k <= 10; ++k) print_checks({acceptance_criterion(k)}, ok);
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
