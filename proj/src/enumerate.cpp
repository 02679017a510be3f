#include "giant/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "giant/theory.hpp"

namespace giant {

namespace {

using Signed128 = __int128;

BigCount binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (std::int64_t j = 1; j <= k; ++j) r = r * static_cast<BigCount>(n - k + j) / static_cast<BigCount>(j);
  return r;
}

double log_binom(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Neumaier-compensated accumulator.
struct Sum {
  double s = 0, c = 0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

// Candidate arcs of the class D_S for s: sources outside O_o, targets
// outside O_i, no loops. Bit j of an arc mask selects arcs[j].
struct ClassFrame {
  int nu = 0;
  std::vector<Arc> arcs;
  std::uint32_t need_in = 0, need_out = 0;  // vertex masks
  std::uint32_t zero_in = 0, zero_out = 0;   // O_i, O_o masks
};

ClassFrame class_frame(const StateVector& s) {
  ClassFrame f;
  f.nu = static_cast<int>(s.nu);
  const int ni = static_cast<int>(s.ni), no = static_cast<int>(s.no);
  for (int v = 0; v < f.nu; ++v) {
    const bool in_oi = v < ni, in_oo = v >= ni && v < ni + no;
    if (in_oi) f.zero_in |= 1u << v;
    else f.need_in |= 1u << v;
    if (in_oo) f.zero_out |= 1u << v;
    else f.need_out |= 1u << v;
  }
  for (int u = 0; u < f.nu; ++u)
    for (int v = 0; v < f.nu; ++v)
      if (u != v && !(f.zero_out >> u & 1) && !(f.zero_in >> v & 1)) f.arcs.push_back({u, v});
  return f;
}

// Calls visit(mask) for every mu-subset of candidate arcs forming a member
// of D_S.
template <class Visit>
void for_each_member(const StateVector& s, Visit&& visit) {
  if (s.nu < 0 || s.ni < 0 || s.no < 0 || s.mu < 0 || s.ni + s.no > s.nu) return;
  if (s.nu > 6) throw std::length_error("exhaustive enumeration refused for nu > 6");
  const ClassFrame f = class_frame(s);
  const int A = static_cast<int>(f.arcs.size());
  if (s.mu > A) return;
  if (s.mu == 0) {
    if (f.need_in == 0 && f.need_out == 0) visit(std::uint64_t{0}, f);
    return;
  }
  std::vector<std::uint32_t> src(A), dst(A);
  for (int j = 0; j < A; ++j) {
    src[j] = 1u << f.arcs[j].u;
    dst[j] = 1u << f.arcs[j].v;
  }
  const std::uint64_t limit = std::uint64_t{1} << A;
  std::uint64_t mask = (std::uint64_t{1} << s.mu) - 1;
  while (mask < limit) {
    std::uint32_t have_in = 0, have_out = 0;
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const int j = std::countr_zero(m);
      have_out |= src[j];
      have_in |= dst[j];
    }
    if ((have_in & f.need_in) == f.need_in && (have_out & f.need_out) == f.need_out) visit(mask, f);
    // Gosper's hack: next mask with the same popcount.
    const std::uint64_t c = mask & -mask, r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

std::mutex g_memo_mutex;
std::map<StateVector, std::uint64_t> g_memo;

std::uint64_t memo_exact_g(const StateVector& s) {
  {
    std::lock_guard<std::mutex> lock(g_memo_mutex);
    auto it = g_memo.find(s);
    if (it != g_memo.end()) return it->second;
  }
  const std::uint64_t g = exact_g(s);
  std::lock_guard<std::mutex> lock(g_memo_mutex);
  g_memo.emplace(s, g);
  return g;
}

void finish(TransitionKernel& k) {
  std::sort(k.entries.begin(), k.entries.end(),
            [](const KernelEntry& x, const KernelEntry& y) { return x.delta < y.delta; });
  Sum si, so;
  for (const auto& e : k.entries) (e.delta.flavor == Flavor::in ? si : so).add(e.p);
  k.mass_in = si.value();
  k.mass_out = so.value();
}

}  // namespace

double TransitionKernel::at(const TransitionDelta& d) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), d,
                             [](const KernelEntry& e, const TransitionDelta& x) { return e.delta < x; });
  return it != entries.end() && it->delta == d ? it->p : 0.0;
}

std::uint64_t exact_g(const StateVector& s) {
  if (s.nu == 0) return s.mu == 0 && s.ni == 0 && s.no == 0 ? 1 : 0;
  std::uint64_t count = 0;
  for_each_member(s, [&](std::uint64_t, const ClassFrame&) { ++count; });
  return count;
}

BigCount g_inclusion_exclusion(const StateVector& s) {
  if (s.nu < 0 || s.ni < 0 || s.no < 0 || s.mu < 0 || s.ni + s.no > s.nu) return 0;
  // X = targets needing in-degree >= 1 = O_o u R; Y = sources needing
  // out-degree >= 1 = O_i u R; R the interior. Exclude S from X and T from Y.
  const std::int64_t ni = s.ni, no = s.no, r = s.nu - s.ni - s.no;
  Signed128 total = 0;
  for (std::int64_t s1 = 0; s1 <= no; ++s1)
    for (std::int64_t t1 = 0; t1 <= ni; ++t1)
      for (std::int64_t s2 = 0; s2 <= r; ++s2)
        for (std::int64_t t2 = 0; t2 <= r; ++t2)
          for (std::int64_t j = std::max<std::int64_t>(0, s2 + t2 - r); j <= std::min(s2, t2); ++j) {
            const std::int64_t xs = (no - s1) + (r - s2);   // remaining targets
            const std::int64_t ys = (ni - t1) + (r - t2);   // remaining sources
            const std::int64_t both = r - s2 - t2 + j;      // vertices in both
            const std::int64_t avail = xs * ys - both;
            const Signed128 ways = static_cast<Signed128>(binom(no, s1) * binom(ni, t1)) *
                                   static_cast<Signed128>(binom(r, s2) * binom(s2, j) * binom(r - s2, t2 - j));
            const Signed128 term = ways * static_cast<Signed128>(binom(avail, s.mu));
            total += ((s1 + t1 + s2 + t2) % 2 == 0) ? term : -term;
          }
  return total < 0 ? 0 : static_cast<BigCount>(total);
}

std::uint64_t exact_g_by_degrees(const DegreePair& dp) {
  const int nu = static_cast<int>(dp.in.size());
  if (static_cast<int>(dp.out.size()) != nu) throw std::invalid_argument("degree pair: length mismatch");
  long long sin = 0, sout = 0;
  for (int v = 0; v < nu; ++v) {
    if (dp.in[v] < 0 || dp.out[v] < 0) throw std::invalid_argument("degree pair: negative degree");
    sin += dp.in[v];
    sout += dp.out[v];
  }
  if (sin != sout) throw std::invalid_argument("degree pair: degree sums differ");
  if (nu > 6) throw std::length_error("exact_g_by_degrees refused for nu > 6");
  std::vector<int> cap(dp.in);
  std::uint64_t count = 0;
  // Row by row: choose the out-neighbourhood of u among vertices != u with
  // spare in-degree capacity.
  auto rec = [&](auto& self, int u) -> void {
    if (u == nu) {
      if (std::all_of(cap.begin(), cap.end(), [](int c) { return c == 0; })) ++count;
      return;
    }
    const int need = dp.out[u];
    for (std::uint32_t m = 0; m < (1u << nu); ++m) {
      if (std::popcount(m) != need || (m >> u & 1)) continue;
      bool ok = true;
      for (int v = 0; v < nu && ok; ++v)
        if ((m >> v & 1) && cap[v] == 0) ok = false;
      if (!ok) continue;
      for (int v = 0; v < nu; ++v)
        if (m >> v & 1) --cap[v];
      self(self, u + 1);
      for (int v = 0; v < nu; ++v)
        if (m >> v & 1) ++cap[v];
    }
  };
  rec(rec, 0);
  return count;
}

McKay mckay_estimate(const DegreePair& dp) {
  double mu = 0, s_dd = 0, s_in2 = 0, s_out2 = 0, log_fact = 0;
  for (std::size_t v = 0; v < dp.in.size(); ++v) {
    const double d = dp.in[v], D = dp.out[v];
    mu += d;
    s_dd += d * D;
    s_in2 += d * (d - 1);
    s_out2 += D * (D - 1);
    log_fact += std::lgamma(d + 1) + std::lgamma(D + 1);
  }
  McKay r;
  r.log_upper_bound = std::lgamma(mu + 1) - log_fact;
  r.upper_bound = std::exp(r.log_upper_bound);
  r.H = mu > 0 ? std::exp(-s_dd / mu - s_in2 * s_out2 / (2 * mu * mu)) : 1.0;
  r.estimate = r.upper_bound * r.H;
  return r;
}

std::pair<double, double> z_of_state(const RealState& s) {
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  if (!(nu - ni > 0) || !(mu / (nu - ni) > 1))
    throw std::domain_error("z_of_state: need mu/(nu - nu_i) > 1");
  if (!(nu - no > 0) || !(mu / (nu - no) > 1))
    throw std::domain_error("z_of_state: need mu/(nu - nu_o) > 1");
  return {z_root(mu / (nu - ni)), z_root(mu / (nu - no))};
}

double truncated_poisson_mean(double z) { return z / -std::expm1(-z); }

double truncated_poisson_var(double z) {
  const double q = -std::expm1(-z);  // 1 - e^-z
  return z * z / q + z / q - z * z / (q * q);
}

double log_g_upper_bound(const RealState& s, double x, double y) {
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  return std::lgamma(mu + 1) + (nu - ni) * std::log(std::expm1(x)) - mu * std::log(x) +
         (nu - no) * std::log(std::expm1(y)) - mu * std::log(y);
}

double log_asym_g(const RealState& s) {
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  if (!(nu - ni - no > 0)) throw std::domain_error("asym_g: need nu - nu_i - nu_o > 0");
  const auto [zi, zo] = z_of_state(s);
  const double eta = mu * (nu - ni - no) / ((nu - ni) * (nu - no)) + zi * zo / 2;
  const double var = (nu - ni) * truncated_poisson_var(zi) * (nu - no) * truncated_poisson_var(zo);
  return log_g_upper_bound(s, zi, zo) - eta - std::log(2 * M_PI * std::sqrt(var));
}

namespace {

void check_shape(const TransitionDelta& d) {
  if (d.flavor == Flavor::in && (d.a != 1 || d.ro != 0))
    throw std::invalid_argument("i-transition needs a = 1, r_o = 0");
  if (d.flavor == Flavor::out && (d.b != 1 || d.ri != 0))
    throw std::invalid_argument("o-transition needs b = 1, r_i = 0");
  if (d.k < 1 || d.k < d.a + d.ro || d.k < d.b + d.ri)
    throw std::invalid_argument("transition needs k >= max(1, a + r_o, b + r_i)");
}

}  // namespace

double g_ratio_asym(const RealState& s, const TransitionDelta& d) {
  check_shape(d);
  const auto [zi, zo] = z_of_state(s);
  const double lam = std::pow(zi * zo / s[3], static_cast<double>(d.k));
  if (d.flavor == Flavor::in) return lam / (std::expm1(zo) * std::pow(std::expm1(zi), d.b + d.ri));
  return lam / (std::expm1(zi) * std::pow(std::expm1(zo), d.a + d.ro));
}

TransitionKernel exact_transition(const StateVector& s, const GFunction& g_in) {
  if (s.ni + s.no <= 0) throw std::invalid_argument("exact_transition: no semi-isolated vertices");
  const GFunction g = g_in ? g_in : GFunction(memo_exact_g);
  const std::uint64_t gs = g(s);
  if (gs == 0) throw std::invalid_argument("exact_transition: empty state class");
  TransitionKernel ker;
  ker.source = s;
  const std::int64_t R = s.nu - s.ni - s.no;
  const long double denom = static_cast<long double>(s.ni + s.no) * static_cast<long double>(gs);
  for (int fl = 0; fl < 2; ++fl) {
    const bool in = fl == 0;
    const std::int64_t mine = in ? s.ni : s.no, other = in ? s.no : s.ni;
    if (mine == 0) continue;
    // x = b (i-step) or a (o-step), r = r_i or r_o.
    for (std::int64_t x = 0; x <= other; ++x)
      for (std::int64_t r = 0; r <= R; ++r)
        for (std::int64_t k = std::max<std::int64_t>(1, x + r); k <= s.mu; ++k) {
          TransitionDelta d;
          d.flavor = in ? Flavor::in : Flavor::out;
          d.k = k;
          if (in) {
            d.a = 1;
            d.b = static_cast<int>(x);
            d.ri = static_cast<int>(r);
          } else {
            d.b = 1;
            d.a = static_cast<int>(x);
            d.ro = static_cast<int>(r);
          }
          const StateVector s2 = d.apply(s);
          const std::uint64_t g2 = g(s2);
          if (g2 == 0) continue;
          // Free targets (i-step) / sources (o-step) exclude the deleted
          // vertex's own zero set, B (resp. A) and R_i (resp. R_o).
          const BigCount num = static_cast<BigCount>(g2) * binom(s.nu - mine - x - r, k - x - r) *
                               static_cast<BigCount>(mine) * binom(other, x) * binom(R, r);
          if (num == 0) continue;
          ker.entries.push_back({d, static_cast<double>(static_cast<long double>(num) / denom)});
        }
  }
  finish(ker);
  return ker;
}

TransitionKernel oracle_transition(const StateVector& s) {
  if (s.ni + s.no <= 0) throw std::invalid_argument("oracle_transition: no semi-isolated vertices");
  std::map<TransitionDelta, std::uint64_t> counts;
  std::uint64_t members = 0;
  for_each_member(s, [&](std::uint64_t mask, const ClassFrame& f) {
    ++members;
    const int nu = f.nu;
    std::uint32_t out[8] = {}, in[8] = {};
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const Arc a = f.arcs[std::countr_zero(m)];
      out[a.u] |= 1u << a.v;
      in[a.v] |= 1u << a.u;
    }
    const std::uint32_t all = (1u << nu) - 1;
    for (int v = 0; v < nu; ++v) {
      if (!((f.zero_in | f.zero_out) >> v & 1)) continue;
      // Substep 1: delete v. Substep 2: delete whatever became isolated.
      std::uint32_t alive = all & ~(1u << v);
      auto indeg = [&](int x) { return std::popcount(in[x] & alive); };
      auto outdeg = [&](int x) { return std::popcount(out[x] & alive); };
      std::uint32_t iso = 0;
      for (int x = 0; x < nu; ++x)
        if ((alive >> x & 1) && indeg(x) == 0 && outdeg(x) == 0) iso |= 1u << x;
      alive &= ~iso;
      const std::uint32_t gone = all & ~alive;
      std::uint32_t zi2 = 0, zo2 = 0;
      std::int64_t arcs_left = 0;
      for (int x = 0; x < nu; ++x) {
        if (!(alive >> x & 1)) continue;
        if (indeg(x) == 0) zi2 |= 1u << x;
        if (outdeg(x) == 0) zo2 |= 1u << x;
        arcs_left += outdeg(x);
      }
      TransitionDelta d;
      d.flavor = (f.zero_in >> v & 1) ? Flavor::in : Flavor::out;
      d.a = std::popcount(gone & f.zero_in);
      d.b = std::popcount(gone & f.zero_out);
      d.ri = std::popcount(zi2 & ~f.zero_in);
      d.ro = std::popcount(zo2 & ~f.zero_out);
      d.k = s.mu - arcs_left;
      ++counts[d];
    }
  });
  if (members == 0) throw std::invalid_argument("oracle_transition: empty state class");
  TransitionKernel ker;
  ker.source = s;
  const long double denom = static_cast<long double>(s.ni + s.no) * static_cast<long double>(members);
  for (const auto& [d, c] : counts)
    ker.entries.push_back({d, static_cast<double>(static_cast<long double>(c) / denom)});
  finish(ker);
  return ker;
}

std::pair<std::uint64_t, std::uint64_t> n_counts(const StateVector& s, const StateVector& s2) {
  std::uint64_t nin = 0, nout = 0;
  const std::int64_t k = s.mu - s2.mu;
  {
    // i-shape: nu - nu' = 1 + b, nu_i' = nu_i - 1 + r_i, nu_o' = nu_o - b.
    const std::int64_t b = s.no - s2.no, ri = s2.ni - s.ni + 1;
    if (s.ni >= 1 && b >= 0 && ri >= 0 && s.nu - s2.nu == 1 + b && k >= std::max<std::int64_t>(1, b + ri))
      nin = static_cast<std::uint64_t>(binom(s.nu - s.ni - b - ri, k - b - ri));
  }
  {
    const std::int64_t a = s.ni - s2.ni, ro = s2.no - s.no + 1;
    if (s.no >= 1 && a >= 0 && ro >= 0 && s.nu - s2.nu == 1 + a && k >= std::max<std::int64_t>(1, a + ro))
      nout = static_cast<std::uint64_t>(binom(s.nu - s.no - a - ro, k - a - ro));
  }
  return {nin, nout};
}

QKernel q_transition(const StateVector& s, std::int64_t k_cap) {
  const RealState sr = to_real(s);
  const auto [zi, zo] = z_of_state(sr);
  const double nu = sr[0], ni = sr[1], no = sr[2], mu = sr[3];
  const double lam = zi * zo / mu, R = nu - ni - no;
  QKernel q;
  q.k_max = k_cap > 0 ? k_cap
                      : std::max<std::int64_t>(60, static_cast<std::int64_t>(std::ceil(4 * zi * zo * nu / mu)));
  q.kernel.source = s;
  for (int fl = 0; fl < 2; ++fl) {
    const bool in = fl == 0;
    const double mine = in ? ni : no, other = in ? no : ni;
    const double z_mine = in ? zi : zo, z_other = in ? zo : zi;
    if (mine == 0) continue;
    const double log_pref = std::log(mine / (ni + no)) - std::log(std::expm1(z_other));
    const double log_x = std::log(lam / std::expm1(z_mine));          // per deleted zero-set vertex
    const double log_y = R > 0 ? std::log(R * lam / std::expm1(z_mine)) : 0;
    const double log_w = std::log((nu - mine) * lam);                  // per free endpoint
    const auto x_max = static_cast<std::int64_t>(std::min<double>(other, double(q.k_max)));
    for (std::int64_t x = 0; x <= x_max; ++x)
      for (std::int64_t r = 0; x + r <= q.k_max; ++r) {
        if (r > 0 && R <= 0) break;
        const double base = log_pref + log_binom(other, double(x)) + x * log_x + r * log_y -
                            std::lgamma(double(r) + 1);
        for (std::int64_t k = std::max<std::int64_t>(1, x + r); k <= q.k_max; ++k) {
          const double free = double(k - x - r);
          const double lp = base + free * log_w - std::lgamma(free + 1);
          TransitionDelta d;
          d.flavor = in ? Flavor::in : Flavor::out;
          d.k = k;
          if (in) {
            d.a = 1;
            d.b = static_cast<int>(x);
            d.ri = static_cast<int>(r);
          } else {
            d.b = 1;
            d.a = static_cast<int>(x);
            d.ro = static_cast<int>(r);
          }
          q.kernel.entries.push_back({d, std::exp(lp)});
        }
      }
  }
  finish(q.kernel);
  q.deficit = 1.0 - q.kernel.total();
  return q;
}

double q_mass_closed(const StateVector& s, Flavor fl) {
  const RealState sr = to_real(s);
  const auto [zi, zo] = z_of_state(sr);
  const double nu = sr[0], ni = sr[1], no = sr[2], mu = sr[3];
  const bool in = fl == Flavor::in;
  const double mine = in ? ni : no, other = in ? no : ni;
  const double z_mine = in ? zi : zo, z_other = in ? zo : zi;
  const double lam = zi * zo / mu, R = nu - ni - no;
  const double em = std::expm1(z_mine);
  const double inner = std::exp(other * std::log1p(lam / em) + R * lam / em + (nu - mine) * lam);
  return mine / (ni + no) / std::expm1(z_other) * (inner - 1);
}

double q_in_mass_closed(const StateVector& s) { return q_mass_closed(s, Flavor::in); }

Moments approx_moments(const RealState& s) {
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  if (!(nu - ni - no > 0)) throw std::domain_error("approx_moments: need nu - nu_i - nu_o > 0");
  if (!(ni + no > 0)) throw std::domain_error("approx_moments: need nu_i + nu_o > 0");
  const auto [zi, zo] = z_of_state(s);
  const double pi = ni / (ni + no), po = no / (ni + no);
  const double den = (ni + no) * (nu - ni) * (nu - no), R = nu - ni - no;
  const double emi = std::expm1(zi), emo = std::expm1(zo);
  const double Ei = (emi + 1) / emi, Eo = (emo + 1) / emo;  // e^z/(e^z - 1)
  const double lam = zi * zo / mu;
  const double Ao = ni * lam / emo, Bi = no * lam / emi, Ri = R * lam / emi, Ro = R * lam / emo;

  Moments m;
  auto& f = m.first;
  f[kA] = pi + ni * no * mu * std::exp(-zo) / den;
  f[kB] = po + ni * no * mu * std::exp(-zi) / den;
  f[kRi] = ni * mu * R * std::exp(-zi) / den;
  f[kRo] = no * mu * R * std::exp(-zo) / den;
  f[kK] = mu / (ni + no) * (no / (nu - ni) + ni / (nu - no));

  auto& q = m.second;
  q(kA, kA) = pi + po * Ei * Ao * (1 + Ao);
  q(kB, kB) = po + pi * Eo * Bi * (1 + Bi);
  q(kA, kB) = pi * Eo * Bi + po * Ei * Ao;
  q(kA, kRi) = pi * Eo * Ri;
  q(kA, kRo) = po * Ei * Ao * Ro;
  q(kA, kK) = pi * zo * Eo + po * Ei * Ao * (1 + zi);
  q(kB, kRi) = pi * Eo * Bi * Ri;
  q(kB, kRo) = po * Ei * Ro;
  q(kB, kK) = pi * Eo * Bi * (1 + zo) + po * zi * Ei;
  q(kRi, kRi) = pi * Eo * Ri * (1 + Ri);
  q(kRi, kRo) = 0;
  q(kRi, kK) = pi * Eo * Ri * (1 + zo);
  q(kRo, kRo) = po * Ei * Ro * (1 + Ro);
  q(kRo, kK) = po * Ei * Ro * (1 + zi);
  q(kK, kK) = pi * zo * Eo * (1 + zo) + po * zi * Ei * (1 + zi);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) q(i, j) = q(j, i);
  return m;
}

Moments kernel_moments(const TransitionKernel& k) {
  Sum first[5], second[5][5];
  for (const auto& e : k.entries) {
    const double x[5] = {double(e.delta.a), double(e.delta.b), double(e.delta.ri), double(e.delta.ro),
                         double(e.delta.k)};
    for (int i = 0; i < 5; ++i) {
      first[i].add(e.p * x[i]);
      for (int j = i; j < 5; ++j) second[i][j].add(e.p * x[i] * x[j]);
    }
  }
  Moments m;
  for (int i = 0; i < 5; ++i) {
    m.first[i] = first[i].value();
    for (int j = i; j < 5; ++j) m.second(i, j) = m.second(j, i) = second[i][j].value();
  }
  return m;
}

std::vector<StateVector> admissible_states(int max_nu, int max_mu) {
  std::vector<StateVector> out;
  for (std::int64_t nu = 1; nu <= max_nu; ++nu)
    for (std::int64_t ni = 0; ni <= nu; ++ni)
      for (std::int64_t no = 0; ni + no <= nu; ++no) {
        if (ni + no == 0) continue;
        for (std::int64_t mu = 0; mu <= max_mu; ++mu) {
          const StateVector s{nu, ni, no, mu};
          if (memo_exact_g(s) > 0) out.push_back(s);
        }
      }
  return out;
}

}  // namespace giant
