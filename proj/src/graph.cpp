#include "vccts/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "vccts/error.hpp"

namespace vccts {

LocGraph::LocGraph(const std::vector<Loc>& vertices, const std::vector<LocPair>& edges) {
  for (Loc v : vertices) add_vertex(v);
  for (auto [p, q] : edges) add_edge(p, q);
}

void LocGraph::add_vertex(Loc p) { adj_[p]; }

void LocGraph::add_edge(Loc p, Loc q) {
  if (p == q) throw GraphError("self-loop on location " + std::to_string(p));
  auto a = adj_.find(p), b = adj_.find(q);
  if (a == adj_.end() || b == adj_.end()) {
    throw GraphError("edge " + std::to_string(p) + "--" + std::to_string(q) + " has an unknown endpoint");
  }
  a->second.insert(q);
  b->second.insert(p);
}

void LocGraph::remove_vertex(Loc p) {
  auto it = adj_.find(p);
  if (it == adj_.end()) return;
  for (Loc q : it->second) adj_[q].erase(p);
  adj_.erase(it);
}

bool LocGraph::adjacent(Loc p, Loc q) const {
  auto it = adj_.find(p);
  return it != adj_.end() && it->second.count(q);
}

const std::set<Loc>& LocGraph::neighbors(Loc p) const {
  auto it = adj_.find(p);
  if (it == adj_.end()) throw GraphError("unknown location " + std::to_string(p));
  return it->second;
}

std::vector<Loc> LocGraph::vertices() const {
  std::vector<Loc> out;
  out.reserve(adj_.size());
  for (const auto& [p, _] : adj_) out.push_back(p);
  return out;
}

std::vector<LocPair> LocGraph::edges() const {
  std::vector<LocPair> out;
  for (const auto& [p, ns] : adj_) {
    for (Loc q : ns) {
      if (p < q) out.emplace_back(p, q);
    }
  }
  return out;
}

std::size_t LocGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, ns] : adj_) n += ns.size();
  return n / 2;
}

Loc LocGraph::max_vertex() const { return adj_.empty() ? 0 : adj_.rbegin()->first; }

ResidualMap ResidualMap::identity(const std::vector<Loc>& vertices) {
  std::map<Loc, Loc> m;
  for (Loc v : vertices) m[v] = v;
  return ResidualMap(std::move(m));
}

Loc ResidualMap::operator()(Loc p) const {
  auto it = map_.find(p);
  if (it == map_.end()) throw GraphError("residual undefined at " + std::to_string(p));
  return it->second;
}

ResidualMap ResidualMap::compose(const ResidualMap& first, const ResidualMap& second) {
  std::map<Loc, Loc> m;
  for (const auto& [x, y] : second.map_) m[x] = first(y);
  return ResidualMap(std::move(m));
}

LocGraph graph_subst(const LocGraph& g, Loc p, const LocGraph& h) {
  if (!g.has_vertex(p)) throw GraphError("substituted location " + std::to_string(p) + " not in graph");
  for (Loc v : h.vertices()) {
    if (g.has_vertex(v)) throw GraphError("vertex collision on " + std::to_string(v));
  }
  LocGraph out = g;
  const std::set<Loc> inherited = g.neighbors(p);
  out.remove_vertex(p);
  for (Loc v : h.vertices()) out.add_vertex(v);
  for (auto [a, b] : h.edges()) out.add_edge(a, b);
  for (Loc v : h.vertices()) {
    for (Loc q : inherited) out.add_edge(v, q);
  }
  return out;
}

LocGraph oplus(const LocGraph& g, const LocGraph& h, const std::vector<LocPair>& d) {
  LocGraph out = g;
  for (Loc v : h.vertices()) {
    if (g.has_vertex(v)) throw GraphError("vertex collision on " + std::to_string(v));
    out.add_vertex(v);
  }
  for (auto [a, b] : h.edges()) out.add_edge(a, b);
  for (auto [a, b] : d) {
    if (!g.has_vertex(a) || !h.has_vertex(b)) {
      throw GraphError("cross pair (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    }
    out.add_edge(a, b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical labelling

std::size_t ColoredGraph::add_vertex(std::string color) {
  colors.push_back(std::move(color));
  adj.emplace_back();
  return colors.size() - 1;
}

void ColoredGraph::add_edge(std::size_t a, std::size_t b, const std::string& label) {
  adj[a][b] = label;
  adj[b][a] = label;
}

namespace {

struct Search {
  std::size_t n = 0;
  std::vector<int> color;                              // dense ids, order of the colour strings
  std::vector<std::vector<std::pair<std::size_t, int>>> nbr;  // (neighbour, label id)
  std::size_t leaves = 0;
  std::size_t max_leaves = 0;

  bool have_best = false;
  std::vector<int> best_cert;
  std::vector<std::size_t> best_order;

  // Equitable refinement. Cells are numbered so that the numbering is isomorphism-invariant.
  void refine(std::vector<int>& cell) const {
    std::size_t cells = std::set<int>(cell.begin(), cell.end()).size();
    for (;;) {
      std::vector<std::pair<std::vector<int>, std::size_t>> sig(n);
      for (std::size_t v = 0; v < n; ++v) {
        std::vector<int> s;
        s.reserve(1 + 2 * nbr[v].size());
        std::vector<std::pair<int, int>> around;
        around.reserve(nbr[v].size());
        for (auto [u, l] : nbr[v]) around.emplace_back(cell[u], l);
        std::sort(around.begin(), around.end());
        s.push_back(cell[v]);
        for (auto [c, l] : around) {
          s.push_back(c);
          s.push_back(l);
        }
        sig[v] = {std::move(s), v};
      }
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return sig[a].first < sig[b].first; });
      std::vector<int> next(n);
      int rank = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == 0 || sig[idx[i]].first != sig[idx[i - 1]].first) ++rank;
        next[idx[i]] = rank;
      }
      cell = std::move(next);
      const std::size_t now = static_cast<std::size_t>(rank + 1);
      if (now == cells) return;
      cells = now;
    }
  }

  std::vector<int> certificate(const std::vector<int>& cell, std::vector<std::size_t>& order) const {
    order.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) order[static_cast<std::size_t>(cell[v])] = v;
    std::vector<int> cert;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = order[i];
      std::vector<std::pair<int, int>> row;
      for (auto [u, l] : nbr[v]) row.emplace_back(cell[u], l);
      std::sort(row.begin(), row.end());
      cert.push_back(color[v]);
      cert.push_back(static_cast<int>(row.size()));
      for (auto [c, l] : row) {
        cert.push_back(c);
        cert.push_back(l);
      }
    }
    return cert;
  }

  bool twins(std::size_t a, std::size_t b) const {
    // Swapping a and b fixes the graph iff their neighbourhoods agree outside {a, b}.
    std::vector<std::pair<std::size_t, int>> na, nb;
    for (auto e : nbr[a]) {
      if (e.first != b) na.push_back(e);
    }
    for (auto e : nbr[b]) {
      if (e.first != a) nb.push_back(e);
    }
    return na == nb;
  }

  void search(std::vector<int> cell) {
    refine(cell);
    // first non-singleton cell
    std::vector<std::size_t> count(n, 0);
    for (int c : cell) ++count[static_cast<std::size_t>(c)];
    int target = -1;
    for (std::size_t c = 0; c < n; ++c) {
      if (count[c] > 1) {
        target = static_cast<int>(c);
        break;
      }
    }
    if (target < 0) {
      if (++leaves > max_leaves) throw GraphError("canonical labelling exceeded its search budget");
      std::vector<std::size_t> order;
      auto cert = certificate(cell, order);
      if (!have_best || cert < best_cert) {
        have_best = true;
        best_cert = std::move(cert);
        best_order = std::move(order);
      }
      return;
    }
    std::vector<std::size_t> tried;
    for (std::size_t v = 0; v < n; ++v) {
      if (cell[v] != target) continue;
      bool redundant = false;
      for (std::size_t u : tried) {
        if (twins(u, v)) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;
      tried.push_back(v);
      // Individualise v: it keeps rank `target`, the rest of its cell moves up by one.
      std::vector<int> next(n);
      for (std::size_t w = 0; w < n; ++w) {
        next[w] = cell[w] * 2 + ((cell[w] == target && w != v) ? 1 : 0);
      }
      search(std::move(next));
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

CanonicalForm canonical_form(const ColoredGraph& g, const CanonOptions& opts) {
  const std::size_t n = g.size();
  if (n > opts.max_vertices) {
    throw GraphError("graph with " + std::to_string(n) + " vertices exceeds the canonical-labelling bound of " +
                     std::to_string(opts.max_vertices));
  }
  std::set<std::string> color_names(g.colors.begin(), g.colors.end());
  std::set<std::string> label_names;
  for (const auto& row : g.adj) {
    for (const auto& [_, l] : row) label_names.insert(l);
  }
  auto id_of = [](const std::set<std::string>& names, const std::string& s) {
    return static_cast<int>(std::distance(names.begin(), names.find(s)));
  };

  Search s;
  s.n = n;
  s.max_leaves = opts.max_leaves;
  s.color.resize(n);
  s.nbr.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    s.color[v] = id_of(color_names, g.colors[v]);
    for (const auto& [u, l] : g.adj[v]) s.nbr[v].emplace_back(u, id_of(label_names, l));
  }
  std::string header = std::to_string(n) + "|";
  for (const auto& c : color_names) header += escape(c) + "|";
  header += "|";
  for (const auto& l : label_names) header += escape(l) + "|";

  CanonicalForm out;
  if (n == 0) {
    out.key = header;
    return out;
  }
  s.search(s.color);
  out.order = s.best_order;
  out.key = header + "#";
  for (int x : s.best_cert) out.key += std::to_string(x) + ",";
  return out;
}

std::string canonical_key(const LocGraph& g, const std::map<Loc, std::string>& coloring,
                          const CanonOptions& opts) {
  ColoredGraph cg;
  std::map<Loc, std::size_t> index;
  for (Loc v : g.vertices()) {
    auto it = coloring.find(v);
    if (it == coloring.end()) throw GraphError("colouring undefined at " + std::to_string(v));
    index[v] = cg.add_vertex(it->second);
  }
  for (auto [p, q] : g.edges()) cg.add_edge(index[p], index[q], "e");
  return canonical_form(cg, opts).key;
}

}  // namespace vccts
