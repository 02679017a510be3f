#include "giant/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "giant/digraph.hpp"
#include "giant/rng.hpp"
#include "giant/stats.hpp"
#include "giant/theory.hpp"

namespace giant {

const char* model_name(Model m) { return m == Model::nm ? "nm" : "np"; }

Model parse_model(const std::string& s) {
  if (s == "nm") return Model::nm;
  if (s == "np") return Model::np;
  throw std::invalid_argument("unknown model '" + s + "' (expected nm or np)");
}

namespace {

std::int64_t arcs_for(int n, double c) { return std::llround(c * n); }

}  // namespace

TrialRecord run_trial(Model model, int n, double c, std::uint64_t seed) {
  const Digraph d = model == Model::nm ? sample_dnm(n, arcs_for(n, c), seed) : sample_dnp(n, c / n, seed);
  TrialRecord r;
  r.seed = seed;
  r.s0 = initial_state(d);
  const Subgraph core = core_11(d);
  r.core_v = core.graph.n();
  r.core_a = core.graph.m();
  const LargestScc g = largest_scc(d);
  r.giant_v = g.vertices;
  r.giant_a = g.arcs;
  if (g.arcs > 0) {
    // core.vertices is ascending.
    for (int v : g.members)
      if (!std::binary_search(core.vertices.begin(), core.vertices.end(), v)) {
        r.contained = false;
        break;
      }
  }
  return r;
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("GIANT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) return cap;
  }
  return hw;
}

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; !failed && (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

GapStats gap_stats(std::vector<double> g) {
  GapStats s;
  if (g.empty()) return s;
  s.max = *std::max_element(g.begin(), g.end());
  double sum = 0;
  for (double v : g) sum += v;
  s.mean = sum / double(g.size());
  s.median = median(std::move(g));
  return s;
}

double theta_sq(const ExperimentReport& r) {
  const double th = theta(r.c_n);
  return th * th;
}

}  // namespace

Eigen::MatrixXd scaled_core(const ExperimentReport& r) {
  const double t2 = theta_sq(r), n = r.n, s = std::sqrt(n);
  Eigen::MatrixXd x(r.records.size(), 2);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    x(i, 0) = (r.records[i].core_v - t2 * n) / s;
    x(i, 1) = (r.records[i].core_a - r.c_n * t2 * n) / s;
  }
  return x;
}

Eigen::MatrixXd scaled_giant(const ExperimentReport& r) {
  const double t2 = theta_sq(r), n = r.n, s = std::sqrt(n);
  Eigen::MatrixXd x(r.records.size(), 2);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    x(i, 0) = (r.records[i].giant_v - t2 * n) / s;
    x(i, 1) = (r.records[i].giant_a - r.c_n * t2 * n) / s;
  }
  return x;
}

Eigen::MatrixXd scaled_excess(const ExperimentReport& r) {
  const double t2 = theta_sq(r), n = r.n, s = std::sqrt(n);
  Eigen::MatrixXd x(r.records.size(), 2);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& t = r.records[i];
    x(i, 0) = (t.giant_v - t2 * n) / s;
    x(i, 1) = (double(t.giant_a - t.giant_v) - (r.c_n - 1) * t2 * n) / s;
  }
  return x;
}

Eigen::MatrixXd scaled_initial(const ExperimentReport& r) {
  const double n = r.n, s = std::sqrt(n), c = r.c_n;
  const double tx = -std::expm1(-2 * c), ti = std::exp(-c) * -std::expm1(-c);
  Eigen::MatrixXd x(r.records.size(), 3);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& s0 = r.records[i].s0;
    x(i, 0) = (s0.nu - tx * n) / s;
    x(i, 1) = (s0.ni - ti * n) / s;
    x(i, 2) = (s0.no - ti * n) / s;
  }
  return x;
}

ExperimentReport run_experiment(Model model, int n, double c, int trials, std::uint64_t master_seed, int threads) {
  if (n < 100) throw std::invalid_argument("run_experiment: need n >= 100");
  if (trials < 1) throw std::invalid_argument("run_experiment: need trials >= 1");
  if (!(c > 1)) throw std::invalid_argument("run_experiment: need c > 1");
  ExperimentReport r;
  r.model = model;
  r.n = n;
  r.c = c;
  r.trials = trials;
  r.master_seed = master_seed;
  if (model == Model::nm) {
    r.m = arcs_for(n, c);
    r.c_n = double(r.m) / n;
  } else {
    r.p = c / n;
    r.c_n = c;
  }
  r.records.resize(trials);
  parallel_for(trials, threads > 0 ? threads : worker_count(), [&](int i) {
    TrialRecord t = run_trial(model, n, c, trial_seed(master_seed, static_cast<std::uint64_t>(i)));
    t.index = i;
    r.records[i] = t;
  });

  std::vector<double> gv, ga, cv, gvs;
  for (const auto& t : r.records) {
    gv.push_back(double(t.gap_v()));
    ga.push_back(double(t.gap_a()));
  }
  r.gap_v = gap_stats(gv);
  r.gap_a = gap_stats(ga);

  const Eigen::MatrixXd core = scaled_core(r), giant = scaled_giant(r), exc = scaled_excess(r),
                        init = scaled_initial(r);
  r.core_mean = sample_mean(core);
  r.giant_mean = sample_mean(giant);
  r.excess_mean = sample_mean(exc);
  r.init_mean = sample_mean(init);
  r.cov_defined = trials >= 2;
  if (r.cov_defined) {
    r.core_cov = sample_cov(core);
    r.giant_cov = sample_cov(giant);
    r.excess_cov = sample_cov(exc);
    r.init_cov = sample_cov(init);
  }
  for (Eigen::Index i = 0; i < core.rows(); ++i) {
    cv.push_back(core(i, 0));
    gvs.push_back(giant(i, 0));
  }
  r.core_giant_ks = ks_two_sample(cv, gvs).d;
  return r;
}

GapSummary gap_check(const ExperimentReport& r) {
  GapSummary g;
  for (const auto& t : r.records)
    if (t.gap_v() < 0 || t.gap_a() < 0 || !t.contained) {
      g.contained = false;
      ++g.violations;
    }
  g.v = r.gap_v;
  g.a = r.gap_a;
  g.mean_gap_over_sqrt_n = r.gap_v.mean / std::sqrt(double(r.n));
  return g;
}

InitialStateCheck initial_state_check(const ExperimentReport& r, const Eigen::Matrix3d& K, double diag_tol,
                                      double off_tol) {
  InitialStateCheck ck;
  const double n = r.n, c = r.c_n, T = r.trials;
  const double ti = std::exp(-c) * -std::expm1(-c);
  ck.target = Eigen::Vector3d(-std::expm1(-2 * c), ti, ti);
  const Eigen::MatrixXd x = scaled_initial(r);
  // Back to X/n: X/n = target + scaled / sqrt(n).
  ck.mean_ratio = ck.target + sample_mean(x) / std::sqrt(n);
  for (int j = 0; j < 3; ++j) ck.se[j] = std::sqrt(K(j, j) / (n * T));
  ck.means_ok = ((ck.mean_ratio - ck.target).cwiseAbs().array() <= 3 * ck.se.array()).all();
  ck.K = K;
  ck.cov = r.cov_defined ? Eigen::Matrix3d(sample_cov(x)) : Eigen::Matrix3d::Zero();
  ck.cov_ok = r.cov_defined;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ck.rel_err(i, j) = std::abs(ck.cov(i, j) - K(i, j)) / std::abs(K(i, j));
      if (ck.rel_err(i, j) > (i == j ? diag_tol : off_tol)) ck.cov_ok = false;
    }
  if (r.cov_defined) {
    const double pooled = std::sqrt((ck.cov(1, 1) + ck.cov(2, 2) - 2 * ck.cov(1, 2)) / T);
    ck.symmetry_z = pooled > 0 ? (ck.mean_ratio[1] - ck.mean_ratio[2]) * std::sqrt(n) / pooled : 0;
  }
  return ck;
}

KarpResult karp_check(int n, double p, int samples, std::uint64_t seed, double alpha) {
  if (!(p >= 0 && p < 1)) throw std::invalid_argument("karp_check: need 0 <= p < 1");
  if (n < 1 || samples < 1) throw std::invalid_argument("karp_check: need n, samples >= 1");
  std::vector<double> desc(samples), comp(samples);
  parallel_for(samples, worker_count(), [&](int i) {
    const auto k = static_cast<std::uint64_t>(i);
    desc[i] = double(descendants(sample_dnp(n, p, trial_seed(seed, 2 * k)), 0).size());
    comp[i] = double(sample_gnp_component_size(n, p, trial_seed(seed, 2 * k + 1)));
  });
  KarpResult r;
  const KsResult ks = ks_two_sample(desc, comp);
  r.d = ks.d;
  r.p_value = ks.p_value;
  r.pass = ks.p_value > alpha;
  for (int i = 0; i < samples; ++i) {
    r.mean_descendants += desc[i];
    r.mean_component += comp[i];
  }
  r.mean_descendants /= samples;
  r.mean_component /= samples;
  return r;
}

NormalityDiagnostics normality_diagnostics(const Eigen::MatrixXd& x, const Eigen::Matrix2d& B) {
  if (x.cols() != 2 || x.rows() < 2) throw std::invalid_argument("normality_diagnostics: need rows of pairs");
  NormalityDiagnostics nd;
  const double T = double(x.rows());
  const Eigen::Vector2d mean = sample_mean(x);
  nd.mean_z = Eigen::Vector2d(mean[0] / std::sqrt(B(0, 0) / T), mean[1] / std::sqrt(B(1, 1) / T));
  const Eigen::LLT<Eigen::Matrix2d> llt(B);
  if (llt.info() != Eigen::Success) throw std::domain_error("normality_diagnostics: B not positive definite");
  const Eigen::Matrix2d L = llt.matrixL();
  const Eigen::Matrix2d Linv = L.inverse();
  nd.whitened_cov = Linv * sample_cov(x) * Linv.transpose();

  const double r2 = std::sqrt(0.5);
  struct Dir {
    const char* name;
    Eigen::Vector2d u;
    bool whitened;
  };
  const Dir dirs[8] = {{"axis1", {1, 0}, false},       {"axis2", {0, 1}, false},
                       {"diag+", {r2, r2}, false},     {"diag-", {r2, -r2}, false},
                       {"white1", {1, 0}, true},       {"white2", {0, 1}, true},
                       {"white+", {r2, r2}, true},     {"white-", {r2, -r2}, true}};
  for (const Dir& d : dirs) {
    // Raw directions: standardize by the theoretical sd of u'x; whitened ones act on L^-1 x.
    const Eigen::Vector2d a = d.whitened ? Eigen::Vector2d(Linv.transpose() * d.u) : d.u;
    const double sd = std::sqrt(a.dot(B * a));
    std::vector<double> z(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) z[i] = x.row(i).dot(a) / sd;
    Projection pr;
    pr.name = d.name;
    pr.skewness = skewness(z);
    pr.excess_kurtosis = excess_kurtosis(z);
    const KsResult ks = ks_normal(z);
    pr.ks_d = ks.d;
    pr.ks_p = ks.p_value;
    nd.projections.push_back(pr);
  }
  return nd;
}

}  // namespace giant
