#pragma once

#include <string>
#include <utility>
#include <vector>

#include "causalnet/formula.hpp"

namespace causalnet {

// Local behaviour of a vertex, determined by the cardinalities of its state
// set and dual: Generic (both non-trivial), FirstOrder (single effect),
// FirstOrderDual (single state), UnitObj (both trivial).
enum class LocalKind { Generic, FirstOrder, FirstOrderDual, UnitObj };

std::string local_kind_name(LocalKind k);
LocalKind local_kind_from_name(const std::string& name);
LocalKind dual_kind(LocalKind k);

// Finite DAG with named, kind-annotated vertices. Edges are (source, target)
// index pairs, kept sorted and deduplicated.
struct Dag {
  std::vector<std::string> names;
  std::vector<LocalKind> kinds;
  std::vector<std::pair<int, int>> edges;

  std::size_t size() const { return names.size(); }
  int index_of(const std::string& name) const;
  bool has_edge(int u, int v) const;
  void normalize_edges();  // sort + dedupe
  void validate() const;   // unique non-empty names, in-range edges, acyclic
};

Dag transitive_closure(const Dag& g);

// Transitive closure pruned to the edges that can carry signalling: sources
// with more than one effect (Generic, FirstOrderDual), targets with more
// than one state (Generic, FirstOrder). Two graphs denote the same type iff
// their standard forms are equal.
Dag standard_form(const Dag& g);

// Graph-type inclusion. pre: same names and kinds.
bool includes(const Dag& g, const Dag& h);

struct CompatResult {
  bool compatible = true;
  std::vector<int> cycle;  // named witness when incompatible
};

// One graph's type is contained in the dual of the other's iff the union of
// their standard forms is acyclic. pre: same names, pointwise dual kinds.
CompatResult compatible(const Dag& g, const Dag& h);

// Replaces vertex `name` of g by the whole of h (vertices spliced in at its
// position). Edges into/out of `name` fan over all of h's vertices.
Dag substitute(const Dag& g, const std::string& name, const Dag& h);

Dag series(const Dag& g, const Dag& h);    // all edges from g to h
Dag parallel(const Dag& g, const Dag& h);  // disjoint union

// All topological sorts, lexicographically ordered by vertex index.
std::vector<std::vector<int>> topological_sorts(const Dag& g);

// All strict down-closed vertex subsets (closed under predecessors), in
// ascending bitmask order; includes the empty set, excludes the full set.
std::vector<std::vector<int>> down_closed_subsets(const Dag& g);

Json dag_to_json(const Dag& g);
Dag dag_from_json(const Json& j);

// CLI-friendly construction: vertices "a,b:fo,c:fo_dual,d:unit" (default kind
// generic), edges "a>b,b>c" (empty string for none).
Dag dag_from_edge_list(const std::string& vertices, const std::string& edges);

std::string dag_dot(const Dag& g);

}  // namespace causalnet
