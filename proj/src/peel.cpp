#include "giant/peel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "giant/rng.hpp"
#include "giant/theory.hpp"

namespace giant {

StateVector initial_state(const Digraph& d) {
  StateVector s;
  for (int v = 0; v < d.n(); ++v) {
    const bool zin = d.in_degree(v) == 0, zout = d.out_degree(v) == 0;
    if (zin && zout) continue;
    ++s.nu;
    s.ni += zin;
    s.no += zout;
  }
  s.mu = d.m();
  return s;
}

namespace {

enum : unsigned char { kNone = 0, kZeroIn = 1, kZeroOut = 2 };

// O_i and O_o as swap-remove index sets.
struct SemiIsolated {
  std::vector<int> set[3];  // indexed by kZeroIn, kZeroOut
  std::vector<int> pos;
  std::vector<unsigned char> which;

  explicit SemiIsolated(int n) : pos(n, -1), which(n, kNone) {}

  void add(int v, unsigned char w) {
    which[v] = w;
    pos[v] = static_cast<int>(set[w].size());
    set[w].push_back(v);
  }
  void remove(int v) {
    auto& s = set[which[v]];
    const int last = s.back();
    s[pos[v]] = last;
    pos[last] = pos[v];
    s.pop_back();
    which[v] = kNone;
    pos[v] = -1;
  }
  std::size_t size() const { return set[kZeroIn].size() + set[kZeroOut].size(); }
};

std::optional<std::pair<double, double>> f_if_defined(const StateVector& s, double n) {
  if (constraint_violation(to_real(s))) return std::nullopt;
  return f_values(s, n);
}

}  // namespace

PeelResult run_deletion(const Digraph& d, std::uint64_t seed) {
  const int n = d.n();
  Rng rng = make_rng(seed);
  std::vector<int> indeg(n), outdeg(n);
  std::vector<char> alive(n, 1);
  SemiIsolated semi(n);
  StateVector s;
  // t = 0: drop isolated vertices.
  for (int v = 0; v < n; ++v) {
    indeg[v] = d.in_degree(v);
    outdeg[v] = d.out_degree(v);
    if (indeg[v] == 0 && outdeg[v] == 0) {
      alive[v] = 0;
      continue;
    }
    ++s.nu;
    if (indeg[v] == 0) semi.add(v, kZeroIn);
    else if (outdeg[v] == 0) semi.add(v, kZeroOut);
  }
  s.ni = static_cast<std::int64_t>(semi.set[kZeroIn].size());
  s.no = static_cast<std::int64_t>(semi.set[kZeroOut].size());
  s.mu = d.m();

  PeelResult res;
  Trajectory& tr = res.traj;
  tr.states.push_back(s);
  tr.f_track.push_back(f_if_defined(s, n));

  std::vector<int> touched;
  while (semi.size() > 0) {
    const auto ni = semi.set[kZeroIn].size();
    const auto pick = uniform_below(rng, semi.size());
    const int v = pick < ni ? semi.set[kZeroIn][pick] : semi.set[kZeroOut][pick - ni];
    TransitionDelta dl;
    dl.flavor = pick < ni ? Flavor::in : Flavor::out;
    (dl.flavor == Flavor::in ? dl.a : dl.b) = 1;
    semi.remove(v);
    alive[v] = 0;

    touched.clear();
    for (int w : d.out(v))
      if (alive[w]) {
        --indeg[w];
        ++dl.k;
        touched.push_back(w);
      }
    for (int u : d.in(v))
      if (alive[u]) {
        --outdeg[u];
        ++dl.k;
        touched.push_back(u);
      }
    for (int x : touched) {
      if (!alive[x]) continue;
      const unsigned char was = semi.which[x];
      if (indeg[x] == 0 && outdeg[x] == 0) {
        if (was == kNone) throw std::logic_error("run_deletion: interior vertex became isolated");
        (was == kZeroIn ? dl.a : dl.b) += 1;
        semi.remove(x);
        alive[x] = 0;
      } else if (indeg[x] == 0 && was != kZeroIn) {
        ++dl.ri;
        semi.add(x, kZeroIn);
      } else if (outdeg[x] == 0 && was != kZeroOut) {
        ++dl.ro;
        semi.add(x, kZeroOut);
      }
    }
    s = dl.apply(s);
    tr.deltas.push_back(dl);
    tr.states.push_back(s);
    tr.f_track.push_back(f_if_defined(s, n));
  }
  res.core = induced_subgraph(d, alive);
  return res;
}

const char* constraint_violation(const RealState& s) {
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  if (!(mu > 0)) return "mu > 0";
  if (!(nu - ni > 0)) return "nu - nu_i > 0";
  if (!(nu - no > 0)) return "nu - nu_o > 0";
  if (!(mu / (nu - ni) > 1)) return "mu/(nu - nu_i) > 1";
  if (!(mu / (nu - no) > 1)) return "mu/(nu - nu_o) > 1";
  return nullptr;
}

std::pair<double, double> f_values(const RealState& s, double n) {
  if (const char* why = constraint_violation(s))
    throw std::domain_error(std::string("f_values: constraint violated: ") + why);
  const double nu = s[0], ni = s[1], no = s[2], mu = s[3];
  const double f1 = mu * (nu - ni - no) / ((nu - ni) * (nu - no));
  const double zi = z_root(mu / (nu - ni)), zo = z_root(mu / (nu - no));
  return {f1, zi * zo / (mu / n)};
}

bool in_s_eps(const RealState& s, double n, double c_n, double eps) {
  if (constraint_violation(s)) return false;
  if (!(s[1] + s[2] > 0)) return false;
  const auto [f1, f2] = f_values(s, n);
  return std::abs(f1 - c_n) < eps && std::abs(f2 - c_n) < eps;
}

}  // namespace giant
