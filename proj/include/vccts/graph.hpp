#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace vccts {

using Loc = std::uint32_t;
using LocPair = std::pair<Loc, Loc>;

/// Finite undirected graph over locations: symmetric, irreflexive.
class LocGraph {
 public:
  LocGraph() = default;
  LocGraph(const std::vector<Loc>& vertices, const std::vector<LocPair>& edges);

  void add_vertex(Loc p);
  void add_edge(Loc p, Loc q);  // throws GraphError on self-loops or unknown endpoints
  void remove_vertex(Loc p);

  bool has_vertex(Loc p) const { return adj_.count(p) != 0; }
  bool adjacent(Loc p, Loc q) const;
  const std::set<Loc>& neighbors(Loc p) const;
  std::vector<Loc> vertices() const;
  std::vector<LocPair> edges() const;  // each edge once, p < q
  std::size_t size() const { return adj_.size(); }
  std::size_t edge_count() const;
  bool empty() const { return adj_.empty(); }
  Loc max_vertex() const;  // 0 for the empty graph

  friend bool operator==(const LocGraph&, const LocGraph&) = default;

 private:
  std::map<Loc, std::set<Loc>> adj_;
};

/// Total map from the locations of a successor state to those of its predecessor.
class ResidualMap {
 public:
  ResidualMap() = default;
  explicit ResidualMap(std::map<Loc, Loc> m) : map_(std::move(m)) {}
  static ResidualMap identity(const std::vector<Loc>& vertices);

  Loc operator()(Loc p) const;  // throws GraphError outside the domain
  void set(Loc from, Loc to) { map_[from] = to; }
  bool defined(Loc p) const { return map_.count(p) != 0; }
  const std::map<Loc, Loc>& entries() const { return map_; }

  /// x |-> first(second(x)): `second` maps the newest state back to the one `first` starts from.
  static ResidualMap compose(const ResidualMap& first, const ResidualMap& second);

  friend bool operator==(const ResidualMap&, const ResidualMap&) = default;

 private:
  std::map<Loc, Loc> map_;
};

/// G[H/p]: p replaced by H, every vertex of H inheriting p's neighbours.
LocGraph graph_subst(const LocGraph& g, Loc p, const LocGraph& h);

/// G (+)_D H: disjoint union plus the cross edges D.
LocGraph oplus(const LocGraph& g, const LocGraph& h, const std::vector<LocPair>& d);

/// Vertex-coloured graph with labelled edges, the input of canonical labelling.
struct ColoredGraph {
  std::vector<std::string> colors;
  std::vector<std::map<std::size_t, std::string>> adj;  // neighbour -> edge label, kept symmetric

  std::size_t add_vertex(std::string color);
  void add_edge(std::size_t a, std::size_t b, const std::string& label);
  std::size_t size() const { return colors.size(); }
};

struct CanonOptions {
  std::size_t max_vertices = 96;
  std::size_t max_leaves = 200000;
};

struct CanonicalForm {
  std::string key;                // equal iff coloured-isomorphic
  std::vector<std::size_t> order; // order[i] = vertex placed at canonical position i
};

/// Individualisation-refinement canonical labelling. Throws GraphError past the size guard.
CanonicalForm canonical_form(const ColoredGraph& g, const CanonOptions& opts = {});

std::string canonical_key(const LocGraph& g, const std::map<Loc, std::string>& coloring,
                          const CanonOptions& opts = {});

}  // namespace vccts
