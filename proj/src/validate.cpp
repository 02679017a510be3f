#include "giant/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "giant/enumerate.hpp"
#include "giant/mc.hpp"
#include "giant/theory.hpp"

namespace giant {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string state_str(const StateVector& s) {
  return fmt("(%lld,%lld,%lld,%lld)", (long long)s.nu, (long long)s.ni, (long long)s.no, (long long)s.mu);
}

CheckResult kernel_equivalence(int max_nu, int max_mu) {
  CheckResult r;
  r.name = "kernel oracle equivalence";
  double worst = 0, worst_sum = 0;
  std::size_t n_states = 0;
  std::string where;
  for (const StateVector& s : admissible_states(max_nu, max_mu)) {
    ++n_states;
    const TransitionKernel ex = exact_transition(s), orc = oracle_transition(s);
    std::size_t i = 0, j = 0;
    while (i < ex.entries.size() || j < orc.entries.size()) {
      double d;
      if (j == orc.entries.size() || (i < ex.entries.size() && ex.entries[i].delta < orc.entries[j].delta)) {
        d = ex.entries[i++].p;
      } else if (i == ex.entries.size() || orc.entries[j].delta < ex.entries[i].delta) {
        d = orc.entries[j++].p;
      } else {
        d = std::abs(ex.entries[i++].p - orc.entries[j++].p);
      }
      if (d > worst) {
        worst = d;
        where = state_str(s);
      }
    }
    worst_sum = std::max(worst_sum, std::abs(ex.total() - 1));
  }
  r.pass = worst <= 1e-12 && worst_sum <= 1e-12 && n_states > 0;
  r.detail = fmt("%zu states (nu<=%d, mu<=%d); max entry diff %.2e%s%s; max |sum-1| %.2e", n_states, max_nu, max_mu,
                 worst, where.empty() ? "" : " at ", where.c_str(), worst_sum);
  return r;
}

CheckResult counting_bounds(int max_nu) {
  CheckResult r;
  r.name = "counting bounds";
  std::size_t pairs = 0, states = 0, mismatches = 0, bound_fail = 0, h_fail = 0, ubound_fail = 0;
  double worst_ratio = 0, worst_ubound = -1e300;
  for (int nu = 1; nu <= max_nu; ++nu) {
    // Histogram of every digraph on nu vertices by (in, out) degree sequence.
    std::vector<std::pair<int, int>> slots;
    for (int u = 0; u < nu; ++u)
      for (int v = 0; v < nu; ++v)
        if (u != v) slots.emplace_back(u, v);
    const int bits = static_cast<int>(slots.size());
    int pw = 1;
    for (int i = 0; i < nu; ++i) pw *= nu;
    std::map<std::pair<int, int>, std::uint64_t> hist;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      int in[8] = {}, out[8] = {};
      for (int b = 0; b < bits; ++b)
        if (mask >> b & 1) {
          ++out[slots[b].first];
          ++in[slots[b].second];
        }
      int ki = 0, ko = 0;
      for (int v = nu - 1; v >= 0; --v) {
        ki = ki * nu + in[v];
        ko = ko * nu + out[v];
      }
      ++hist[{ki, ko}];
    }
    // Every degree pair with entries < nu and equal sums.
    auto decode = [nu](int key) {
      std::vector<int> d(nu);
      for (int v = 0; v < nu; ++v, key /= nu) d[v] = key % nu;
      return d;
    };
    std::map<int, std::vector<int>> by_sum;
    for (int key = 0; key < pw; ++key) {
      int sum = 0;
      for (int x : decode(key)) sum += x;
      by_sum[sum].push_back(key);
    }
    for (const auto& [sum, keys] : by_sum)
      for (int ki : keys)
        for (int ko : keys) {
          ++pairs;
          const DegreePair dp{decode(ki), decode(ko)};
          const auto it = hist.find({ki, ko});
          const std::uint64_t truth = it == hist.end() ? 0 : it->second;
          const McKay mk = mckay_estimate(dp);
          if (truth > 0 || pairs % 7 == 0) {
            // exact_g_by_degrees is checked on every realizable pair and a sample of the rest.
            if (exact_g_by_degrees(dp) != truth) ++mismatches;
          }
          const double ratio = double(truth) / mk.upper_bound;
          worst_ratio = std::max(worst_ratio, ratio);
          if (ratio > 1 + 1e-12) ++bound_fail;
          if (!(mk.H <= 1)) ++h_fail;
        }
  }
  for (const StateVector& s : admissible_states(max_nu, max_nu * (max_nu - 1))) {
    const RealState x = to_real(s);
    if (constraint_violation(x)) continue;
    ++states;
    const auto [zi, zo] = z_of_state(x);
    const double gap = std::log(double(exact_g(s))) - log_g_upper_bound(x, zi, zo);
    worst_ubound = std::max(worst_ubound, gap);
    if (gap > 1e-12) ++ubound_fail;
  }
  r.pass = mismatches == 0 && bound_fail == 0 && h_fail == 0 && ubound_fail == 0;
  r.detail = fmt(
      "%zu degree pairs: count mismatches %zu, max count/(mu!/prod d!D!) %.4f, H>1 %zu; %zu states: "
      "max log(g/bound) %.4f",
      pairs, mismatches, worst_ratio, h_fail, states, worst_ubound);
  return r;
}

CheckResult q_kernel_check() {
  CheckResult r;
  r.name = "q-kernel mass and moments";
  const double n = 1e4, c = 2;
  const WVector w = likely_initial_w(c);
  const StateVector s{std::llround(n * w[0]), std::llround(n * w[1]), std::llround(n * w[2]), std::llround(n * w[3])};
  const QKernel q = q_transition(s);
  const Moments a = approx_moments(to_real(s)), k = kernel_moments(q.kernel);
  double worst = 0;
  for (int i = 0; i < 5; ++i) {
    worst = std::max(worst, std::abs(a.first[i] - k.first[i]));
    for (int j = i; j < 5; ++j) worst = std::max(worst, std::abs(a.second(i, j) - k.second(i, j)));
  }
  r.pass = q.kernel.total() <= 1 + 1e-12 && q.deficit < 1e-3 && worst < 1e-3;
  r.detail = fmt("s=%s mass %.9f deficit %.2e; max |moment formula - summation| over 20 quantities %.2e",
                 state_str(s).c_str(), q.kernel.total(), q.deficit, worst);
  return r;
}

// A random point of W_eps (eps = 0.25) around w'(c) for random c, away from
// the symmetric line.
WVector random_asymmetric_w(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cd(1.3, 3.5), f(0.3, 1.8);
  for (;;) {
    const double c = cd(rng);
    WVector w = likely_initial_w(c);
    w[1] *= f(rng);
    w[2] *= f(rng);
    w[3] *= std::uniform_real_distribution<double>(0.85, 1.15)(rng);
    if (std::abs(std::log(w[1] / w[2])) < 0.05) continue;
    if (w_violation(w)) continue;
    const Eigen::Vector2d I = integrals(w);
    if (std::abs(I[0] - c) >= 0.25 || std::abs(I[1] - c) >= 0.25 || !(I[0] > 1.05)) continue;
    return w;
  }
}

CheckResult ode_check() {
  CheckResult r;
  r.name = "ODE layer";
  double cons = 0, endpoint = 0, asym = 0;
  bool mono = true;
  for (double c : {1.2, 2.0, 3.0}) {
    const Characteristic ch = integrate_characteristic(likely_initial_w(c));
    const double th = theta(c);
    cons = std::max({cons, ch.max_integral_drift, ch.max_f_drift});
    endpoint = std::max({endpoint, std::abs(ch.end[0] - th * th), std::abs(ch.end[3] - c * th * th)});
  }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const WVector w0 = random_asymmetric_w(rng);
    const Characteristic ch = integrate_characteristic(w0);
    const Eigen::Vector2d f = f_mean(w0);
    asym = std::max({asym, std::abs(ch.end[0] - f[0]), std::abs(ch.end[3] - f[1])});
    cons = std::max({cons, ch.max_integral_drift, ch.max_f_drift});
    mono = mono && ch.monotone;
  }
  r.pass = cons <= 1e-8 && endpoint <= 1e-6 && asym <= 1e-6 && mono;
  r.detail = fmt("max conservation residual %.2e; symmetric endpoint err %.2e; asymmetric endpoint vs f %.2e; "
                 "monotone %s",
                 cons, endpoint, asym, mono ? "yes" : "no");
  return r;
}

CheckResult gradient_check() {
  CheckResult r;
  r.name = "gradients and PDE residual";
  std::mt19937_64 rng(11);
  double worst_rel = 0, worst_pde = 0;
  for (int i = 0; i < 50; ++i) {
    const WVector w = random_asymmetric_w(rng);
    const Eigen::Matrix<double, 2, 4> G = grad_f(w);
    for (int k = 0; k < 4; ++k) {
      const double h = 1e-6;
      WVector wp = w, wm = w;
      wp[k] += h;
      wm[k] -= h;
      const Eigen::Vector2d fd = (f_mean(wp) - f_mean(wm)) / (2 * h);
      for (int j = 0; j < 2; ++j) worst_rel = std::max(worst_rel, std::abs(fd[j] - G(j, k)) / std::abs(G(j, k)));
    }
    const WVector H = ode_rhs(w);
    for (int j = 0; j < 2; ++j) worst_pde = std::max(worst_pde, std::abs(G.row(j).dot(H)));
  }
  r.pass = worst_rel <= 1e-6 && worst_pde <= 1e-9;
  r.detail = fmt("50 points: max relative FD error %.2e; max |E[ds]' grad f_j| %.2e", worst_rel, worst_pde);
  return r;
}

CheckResult covariance_check() {
  CheckResult r;
  r.name = "covariance pipeline";
  const BMatrices b2 = b_matrices(2.0);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(b2.psi).eigenvalues().minCoeff();
  const bool converged = b2.quad.last_change < 1e-6;
  // Closed form vs ODE along the symmetric characteristic.
  const double c = 2, th = theta(c);
  std::vector<double> zs;
  for (int j = 1; j < 20; ++j) zs.push_back(c * th + (c - c * th) * j / 20.0);
  const std::vector<WVector> ode = characteristic_at(likely_initial_w(c), zs);
  double sym = 0;
  for (std::size_t j = 0; j < zs.size(); ++j)
    sym = std::max(sym, (ode[j] - symmetric_trajectory(c, zs[j])).cwiseAbs().maxCoeff());
  // Richardson over eps = 0.02, 0.01, 0.005 on B~11/eps, B~12/eps^2, B~22/eps^3.
  const double eps[3] = {0.02, 0.01, 0.005};
  double v[3][3];
  for (int e = 0; e < 3; ++e) {
    const Eigen::Matrix2d bt = b_matrices(1 + eps[e]).Btilde;
    v[0][e] = bt(0, 0) / eps[e];
    v[1][e] = bt(0, 1) / (eps[e] * eps[e]);
    v[2][e] = bt(1, 1) / (eps[e] * eps[e] * eps[e]);
  }
  const double target[3] = {40, 60, 272.0 / 3}, tol[3] = {0.10, 0.12, 0.15};
  double lim[3];
  bool series = true;
  for (int q = 0; q < 3; ++q) {
    const double r1 = 2 * v[q][1] - v[q][0], r2 = 2 * v[q][2] - v[q][1];
    lim[q] = (4 * r2 - r1) / 3;
    series = series && std::abs(lim[q] - target[q]) <= tol[q] * target[q];
  }
  r.pass = min_eig >= 0 && converged && sym <= 1e-7 && series;
  r.detail = fmt("psi(w') min eigenvalue %.4f, last panel change %.1e (%d panels); closed form vs ODE %.1e; "
                 "extrapolated B~11/eps %.3f, B~12/eps^2 %.3f, B~22/eps^3 %.3f",
                 min_eig, b2.quad.last_change, b2.quad.panels, sym, lim[0], lim[1], lim[2]);
  return r;
}

// Shared Monte Carlo batches.
const ExperimentReport& batch(Model m, int n, int trials) {
  static std::map<std::tuple<int, int, int>, ExperimentReport> cache;
  const auto key = std::make_tuple(int(m), n, trials);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, run_experiment(m, n, 2.0, trials, 42)).first;
  return it->second;
}

bool pair_ok(const NormalityDiagnostics& nd, std::string& out, const char* label) {
  double wc = 0, sk = 0, ku = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) wc = std::max(wc, std::abs(nd.whitened_cov(i, j) - (i == j ? 1.0 : 0.0)));
  for (const Projection& p : nd.projections) {
    sk = std::max(sk, std::abs(p.skewness));
    ku = std::max(ku, std::abs(p.excess_kurtosis));
  }
  const double mz = nd.mean_z.cwiseAbs().maxCoeff();
  const bool ok = mz <= 3 && wc <= 0.2 && sk < 0.3 && ku < 0.6;
  out += fmt("%s: max |mean|/SE %.2f, max whitened cov err %.3f, max |skew| %.3f, max |ex.kurt| %.3f; ", label, mz,
             wc, sk, ku);
  return ok;
}

CheckResult clt_check() {
  CheckResult r;
  r.name = "CLT at n=4000, c=2";
  const ExperimentReport& rep = batch(Model::nm, 4000, 400);
  const Eigen::Matrix2d B = b_matrices(rep.c_n).B;
  const bool a = pair_ok(normality_diagnostics(scaled_core(rep), B), r.detail, "core");
  const bool b = pair_ok(normality_diagnostics(scaled_giant(rep), B), r.detail, "giant");
  r.pass = a && b;
  return r;
}

CheckResult np_inflation_check() {
  CheckResult r;
  r.name = "D(n,p) variance inflation";
  const ExperimentReport& nm = batch(Model::nm, 4000, 400);
  const ExperimentReport& np = batch(Model::np, 4000, 400);
  const double c = 2, th = theta(c), d = 2 * th * theta_prime(c);
  const double predicted = c * d * d;
  const double vnm = nm.giant_cov(0, 0), vnp = np.giant_cov(0, 0);
  const double diff = vnp - vnm;
  r.pass = diff > 0 && std::abs(diff - predicted) <= 0.35 * predicted;
  r.detail = fmt("Var nm %.4f, Var np %.4f, difference %.4f vs c(d theta^2/dc)^2 = %.4f (rel err %.1f%%)", vnm, vnp,
                 diff, predicted, 100 * std::abs(diff - predicted) / predicted);
  return r;
}

CheckResult initial_check() {
  CheckResult r;
  r.name = "initial state";
  const ExperimentReport& rep = batch(Model::nm, 4000, 400);
  const Eigen::Matrix3d K = k_matrix(rep.c_n);
  const InitialStateCheck ck = initial_state_check(rep, K);
  r.pass = ck.means_ok && ck.cov_ok;
  const Eigen::Vector3d z = (ck.mean_ratio - ck.target).cwiseQuotient(ck.se);
  r.detail = fmt("mean z-scores (%.2f, %.2f, %.2f); cov rel err diag (%.1f%%, %.1f%%, %.1f%%) off (%.1f%%, %.1f%%, %.1f%%)",
                 z[0], z[1], z[2], 100 * ck.rel_err(0, 0), 100 * ck.rel_err(1, 1), 100 * ck.rel_err(2, 2),
                 100 * ck.rel_err(0, 1), 100 * ck.rel_err(0, 2), 100 * ck.rel_err(1, 2));
  if (!r.pass && ck.means_ok) {
    // Gaussian SE of a sample covariance entry: sqrt((K_ii K_jj + K_ij^2) / T).
    bool only_unresolvable = true;
    std::string why;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double tol = i == j ? 0.25 : 0.35;
        if (ck.rel_err(i, j) <= tol) continue;
        const double rel_se = std::sqrt((K(i, i) * K(j, j) + K(i, j) * K(i, j)) / rep.trials) / std::abs(K(i, j));
        if (3 * rel_se <= tol) only_unresolvable = false;
        why += fmt(" K%d%d: 3 SE = %.0f%% > %.0f%%;", i + 1, j + 1, 300 * rel_se, 100 * tol);
      }
    r.unresolvable = only_unresolvable;
    if (only_unresolvable) r.detail += "; failing entries are below estimator resolution at 400 trials:" + why;
  }
  return r;
}

CheckResult structure_check() {
  CheckResult r;
  r.name = "structure";
  const GapSummary g1 = gap_check(batch(Model::nm, 1000, 200));
  const GapSummary g8 = gap_check(batch(Model::nm, 8000, 200));
  const GapSummary g4 = gap_check(batch(Model::nm, 4000, 400));
  const KarpResult k = karp_check(2000, 2.0 / 2000, 2000, 42);
  const bool contained = g1.contained && g8.contained && g4.contained;
  const bool trend = g8.mean_gap_over_sqrt_n < g1.mean_gap_over_sqrt_n;
  r.pass = contained && trend && k.pass;
  r.detail = fmt("containment violations %d; mean gap/sqrt(n) %.4f (n=1000) -> %.4f (n=8000); Karp KS D=%.4f p=%.3f",
                 g1.violations + g8.violations + g4.violations, g1.mean_gap_over_sqrt_n, g8.mean_gap_over_sqrt_n,
                 k.d, k.p_value);
  return r;
}

template <class F>
CheckResult timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

CheckResult acceptance_criterion(int k) {
  CheckResult r;
  switch (k) {
    case 1: r = timed([] { return kernel_equivalence(5, 6); }); break;
    case 2: r = timed([] { return counting_bounds(5); }); break;
    case 3: r = timed(q_kernel_check); break;
    case 4: r = timed(ode_check); break;
    case 5: r = timed(gradient_check); break;
    case 6: r = timed(covariance_check); break;
    case 7: r = timed(clt_check); break;
    case 8: r = timed(np_inflation_check); break;
    case 9: r = timed(initial_check); break;
    case 10: r = timed(structure_check); break;
    default: throw std::out_of_range("acceptance_criterion: k must be 1..10");
  }
  if (r.name.empty()) r.name = fmt("criterion %d", k);
  return r;
}

std::vector<CheckResult> oracle_suite(int max_nu, int max_mu) {
  if (max_nu < 1 || max_nu > 6 || max_mu < 0) throw std::invalid_argument("oracle_suite: need 1 <= max_nu <= 6");
  return {timed([&] { return kernel_equivalence(max_nu, max_mu); }),
          timed([&] { return counting_bounds(std::min(max_nu, 5)); })};
}

std::vector<CheckResult> quick_suite() {
  std::vector<CheckResult> out;
  for (int k = 1; k <= 6; ++k) out.push_back(acceptance_criterion(k));
  return out;
}

}  // namespace giant
