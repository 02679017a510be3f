#include "giant/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "giant/rng.hpp"

namespace giant {

Digraph::Digraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
  if (n < 0) throw std::invalid_argument("digraph: negative vertex count");
  for (const Arc& a : arcs_) {
    if (a.u < 0 || a.u >= n || a.v < 0 || a.v >= n)
      throw std::invalid_argument("digraph: arc endpoint out of range");
    if (a.u == a.v) throw std::invalid_argument("digraph: loop at vertex " + std::to_string(a.u));
  }
  std::sort(arcs_.begin(), arcs_.end());
  if (std::adjacent_find(arcs_.begin(), arcs_.end()) != arcs_.end())
    throw std::invalid_argument("digraph: duplicate arc");

  out_off_.assign(n + 1, 0);
  in_off_.assign(n + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_off_[a.u + 1];
    ++in_off_[a.v + 1];
  }
  for (int v = 0; v < n; ++v) {
    out_off_[v + 1] += out_off_[v];
    in_off_[v + 1] += in_off_[v];
  }
  out_nbr_.resize(arcs_.size());
  in_nbr_.resize(arcs_.size());
  std::vector<int> oc(out_off_.begin(), out_off_.end() - 1);
  std::vector<int> ic(in_off_.begin(), in_off_.end() - 1);
  // arcs_ is sorted by (u, v), so both neighbour lists come out ascending.
  for (const Arc& a : arcs_) {
    out_nbr_[oc[a.u]++] = a.v;
    in_nbr_[ic[a.v]++] = a.u;
  }
}

bool Digraph::has_arc(int u, int v) const {
  auto o = out(u);
  return std::binary_search(o.begin(), o.end(), v);
}

Subgraph induced_subgraph(const Digraph& d, const std::vector<char>& keep) {
  Subgraph s;
  std::vector<int> relabel(d.n(), -1);
  for (int v = 0; v < d.n(); ++v) {
    if (keep[v]) {
      relabel[v] = static_cast<int>(s.vertices.size());
      s.vertices.push_back(v);
    }
  }
  std::vector<Arc> arcs;
  for (const Arc& a : d.arcs())
    if (keep[a.u] && keep[a.v]) arcs.push_back({relabel[a.u], relabel[a.v]});
  s.graph = Digraph(static_cast<int>(s.vertices.size()), std::move(arcs));
  return s;
}

namespace {

// Ordered pair with index i in the n(n-1) off-diagonal enumeration.
Arc pair_of_index(std::int64_t i, int n) {
  const auto u = static_cast<int>(i / (n - 1));
  const auto r = static_cast<int>(i % (n - 1));
  return {u, r < u ? r : r + 1};
}

// Visits the indices in [0, total) kept by independent Bernoulli(p) trials,
// in increasing order, via geometric gaps.
template <class F>
void bernoulli_indices(std::int64_t total, double p, Rng& rng, F&& visit) {
  if (p <= 0.0 || total == 0) return;
  if (p >= 1.0) {
    for (std::int64_t i = 0; i < total; ++i) visit(i);
    return;
  }
  const double log_q = std::log1p(-p);
  std::int64_t i = -1;
  while (true) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    const double gap = std::floor(std::log(u) / log_q);
    if (gap >= static_cast<double>(total - i)) return;
    i += 1 + static_cast<std::int64_t>(gap);
    if (i >= total) return;
    visit(i);
  }
}

}  // namespace

Digraph sample_dnm(int n, std::int64_t m, std::uint64_t seed) {
  const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1);
  if (n < 0 || m < 0 || m > total) throw std::invalid_argument("sample_dnm: m out of range");
  Rng rng = make_rng(seed);
  // Partial Fisher-Yates over the implicit array [0, total); only displaced
  // slots are materialised.
  std::unordered_map<std::int64_t, std::int64_t> moved;
  moved.reserve(static_cast<std::size_t>(2 * m));
  auto at = [&](std::int64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < m; ++j) {
    const std::int64_t r = j + static_cast<std::int64_t>(uniform_below(rng, total - j));
    const std::int64_t vj = at(j), vr = at(r);
    moved[r] = vj;
    moved[j] = vr;
    arcs.push_back(pair_of_index(vr, n));
  }
  return Digraph(n, std::move(arcs));
}

Digraph sample_dnp(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_dnp: p outside [0,1]");
  if (n < 0) throw std::invalid_argument("sample_dnp: negative n");
  Rng rng = make_rng(seed);
  std::vector<Arc> arcs;
  const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1);
  bernoulli_indices(total, p, rng, [&](std::int64_t i) { arcs.push_back(pair_of_index(i, n)); });
  return Digraph(n, std::move(arcs));
}

SccPartition strongly_connected_components(const Digraph& d) {
  // Iterative Tarjan: one DFS family, O(n + m).
  const int n = d.n();
  SccPartition res;
  res.component.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack, edge_pos(n, 0), call;
  std::vector<char> on_stack(n, 0);
  int counter = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      const int v = call.back();
      auto nb = d.out(v);
      if (edge_pos[v] < static_cast<int>(nb.size())) {
        const int w = nb[edge_pos[v]++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back(w);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.component[w] = res.count;
        } while (w != v);
        ++res.count;
      }
    }
  }
  return res;
}

LargestScc largest_scc(const Digraph& d) {
  LargestScc best;
  if (d.n() == 0) return best;
  const SccPartition p = strongly_connected_components(d);
  std::vector<int> size(p.count, 0), min_label(p.count, d.n());
  for (int v = 0; v < d.n(); ++v) {
    ++size[p.component[v]];
    min_label[p.component[v]] = std::min(min_label[p.component[v]], v);
  }
  int pick = 0;
  for (int c = 1; c < p.count; ++c)
    if (size[c] > size[pick] || (size[c] == size[pick] && min_label[c] < min_label[pick])) pick = c;
  best.vertices = size[pick];
  for (int v = 0; v < d.n(); ++v)
    if (p.component[v] == pick) best.members.push_back(v);
  for (const Arc& a : d.arcs())
    if (p.component[a.u] == pick && p.component[a.v] == pick) ++best.arcs;
  return best;
}

Subgraph core_11(const Digraph& d) {
  const int n = d.n();
  std::vector<int> indeg(n), outdeg(n), queue;
  std::vector<char> alive(n, 1);
  for (int v = 0; v < n; ++v) {
    indeg[v] = d.in_degree(v);
    outdeg[v] = d.out_degree(v);
    if (indeg[v] == 0 || outdeg[v] == 0) {
      alive[v] = 0;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    for (int w : d.out(v))
      if (alive[w] && --indeg[w] == 0) {
        alive[w] = 0;
        queue.push_back(w);
      }
    for (int u : d.in(v))
      if (alive[u] && --outdeg[u] == 0) {
        alive[u] = 0;
        queue.push_back(u);
      }
  }
  return induced_subgraph(d, alive);
}

namespace {

template <class Nbrs>
std::vector<int> reach(const Digraph& d, int v, Nbrs nbrs) {
  if (v < 0 || v >= d.n()) throw std::invalid_argument("reachability: vertex out of range");
  std::vector<char> seen(d.n(), 0);
  std::vector<int> todo{v}, out;
  seen[v] = 1;
  while (!todo.empty()) {
    const int x = todo.back();
    todo.pop_back();
    out.push_back(x);
    for (int y : nbrs(x))
      if (!seen[y]) {
        seen[y] = 1;
        todo.push_back(y);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> descendants(const Digraph& d, int v) {
  return reach(d, v, [&](int x) { return d.out(x); });
}

std::vector<int> ancestors(const Digraph& d, int v) {
  return reach(d, v, [&](int x) { return d.in(x); });
}

DfsForest dfs_forest(const Digraph& d) {
  const int n = d.n();
  DfsForest f;
  f.parent.assign(n, -1);
  f.tree_index.assign(n, -1);
  f.partial_desc_size.assign(n, 1);
  f.order.reserve(n);
  std::vector<int> pos(n, 0), call;
  for (int root = 0; root < n; ++root) {
    if (f.tree_index[root] != -1) continue;
    const int t = static_cast<int>(f.roots.size());
    f.roots.push_back(root);
    f.tree_index[root] = t;
    f.order.push_back(root);
    call.push_back(root);
    while (!call.empty()) {
      const int v = call.back();
      auto nb = d.out(v);
      if (pos[v] < static_cast<int>(nb.size())) {
        const int w = nb[pos[v]++];
        if (f.tree_index[w] == -1) {
          f.tree_index[w] = t;
          f.parent[w] = v;
          f.order.push_back(w);
          call.push_back(w);
        }
        continue;
      }
      call.pop_back();
      if (f.parent[v] != -1) f.partial_desc_size[f.parent[v]] += f.partial_desc_size[v];
    }
  }
  return f;
}

int sample_gnp_component_size(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_gnp: p outside [0,1]");
  if (n <= 0) throw std::invalid_argument("sample_gnp: need n >= 1");
  Rng rng = make_rng(seed);
  std::vector<std::vector<int>> adj(n);
  // Unordered pairs {u < v} enumerated row by row; gaps arrive in increasing
  // order so a running (row, offset) cursor replaces an index inversion.
  const std::int64_t total = static_cast<std::int64_t>(n) * (n - 1) / 2;
  int row = 0;
  std::int64_t row_start = 0;
  bernoulli_indices(total, p, rng, [&](std::int64_t i) {
    while (i >= row_start + (n - 1 - row)) {
      row_start += n - 1 - row;
      ++row;
    }
    const int v = row + 1 + static_cast<int>(i - row_start);
    adj[row].push_back(v);
    adj[v].push_back(row);
  });
  std::vector<char> seen(n, 0);
  std::vector<int> todo{0};
  seen[0] = 1;
  int size = 0;
  while (!todo.empty()) {
    const int x = todo.back();
    todo.pop_back();
    ++size;
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        todo.push_back(y);
      }
  }
  return size;
}

}  // namespace giant
