#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace giant {

struct Arc {
  int u = 0;
  int v = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Loop-free, multi-arc-free digraph on vertices 0..n-1. Immutable once built;
// arcs are kept sorted so equal digraphs compare equal.
class Digraph {
 public:
  Digraph() = default;
  // Throws std::invalid_argument on loops, duplicate arcs or out-of-range ends.
  Digraph(int n, std::vector<Arc> arcs);

  int n() const { return n_; }
  std::int64_t m() const { return static_cast<std::int64_t>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }

  std::span<const int> out(int v) const {
    return {out_nbr_.data() + out_off_[v], out_nbr_.data() + out_off_[v + 1]};
  }
  std::span<const int> in(int v) const {
    return {in_nbr_.data() + in_off_[v], in_nbr_.data() + in_off_[v + 1]};
  }
  int out_degree(int v) const { return out_off_[v + 1] - out_off_[v]; }
  int in_degree(int v) const { return in_off_[v + 1] - in_off_[v]; }
  bool has_arc(int u, int v) const;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<int> out_off_{0}, out_nbr_, in_off_{0}, in_nbr_;
};

// A vertex subset of a parent digraph together with the induced digraph,
// relabelled 0..k-1 in the order of `vertices` (ascending).
struct Subgraph {
  std::vector<int> vertices;
  Digraph graph;
};

Subgraph induced_subgraph(const Digraph& d, const std::vector<char>& keep);

Digraph sample_dnm(int n, std::int64_t m, std::uint64_t seed);
Digraph sample_dnp(int n, double p, std::uint64_t seed);

struct SccPartition {
  std::vector<int> component;  // component id per vertex
  int count = 0;
};

SccPartition strongly_connected_components(const Digraph& d);

struct LargestScc {
  int vertices = 0;
  std::int64_t arcs = 0;
  std::vector<int> members;
};

LargestScc largest_scc(const Digraph& d);

Subgraph core_11(const Digraph& d);

std::vector<int> descendants(const Digraph& d, int v);
std::vector<int> ancestors(const Digraph& d, int v);

struct DfsForest {
  std::vector<int> order;              // w_1..w_n, chronological
  std::vector<int> parent;             // -1 for roots
  std::vector<int> tree_index;         // vertex -> tree
  std::vector<int> partial_desc_size;  // |W(v)| within its tree
  std::vector<int> roots;
};

DfsForest dfs_forest(const Digraph& d);

int sample_gnp_component_size(int n, double p, std::uint64_t seed);

void write_edge_list(std::ostream& os, const Digraph& d);
// Throws std::runtime_error on malformed input, loops or duplicates.
Digraph read_edge_list(std::istream& is);

}  // namespace giant
