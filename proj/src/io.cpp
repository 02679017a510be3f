#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "giant/digraph.hpp"

namespace giant {

void write_edge_list(std::ostream& os, const Digraph& d) {
  os << "# digraph n=" << d.n() << " m=" << d.m() << '\n';
  for (const Arc& a : d.arcs()) os << a.u << ' ' << a.v << '\n';
}

Digraph read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("edge list: empty input");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    std::string hash, word, nf, mf;
    hs >> hash >> word >> nf >> mf;
    if (hash != "#" || word != "digraph" || nf.rfind("n=", 0) != 0 || mf.rfind("m=", 0) != 0)
      throw std::runtime_error("edge list: bad header '" + line + "'");
    try {
      n = std::stoll(nf.substr(2));
      m = std::stoll(mf.substr(2));
    } catch (const std::exception&) {
      throw std::runtime_error("edge list: bad header '" + line + "'");
    }
    if (n < 0 || m < 0) throw std::runtime_error("edge list: negative n or m");
  }
  std::vector<Arc> arcs;
  std::set<Arc> seen;
  long long lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long u, v;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest))
      throw std::runtime_error("edge list: malformed line " + std::to_string(lineno));
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::runtime_error("edge list: vertex out of range on line " + std::to_string(lineno));
    if (u == v) throw std::runtime_error("edge list: loop on line " + std::to_string(lineno));
    Arc a{static_cast<int>(u), static_cast<int>(v)};
    if (!seen.insert(a).second)
      throw std::runtime_error("edge list: duplicate arc on line " + std::to_string(lineno));
    arcs.push_back(a);
  }
  if (static_cast<long long>(arcs.size()) != m)
    throw std::runtime_error("edge list: header says m=" + std::to_string(m) + " but found " +
                             std::to_string(arcs.size()) + " arcs");
  return Digraph(static_cast<int>(n), std::move(arcs));
}

}  // namespace giant
