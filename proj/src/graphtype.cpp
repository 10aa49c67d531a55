#include "causalnet/graphtype.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "causalnet/errors.hpp"

namespace causalnet {

std::string local_kind_name(LocalKind k) {
  switch (k) {
    case LocalKind::Generic: return "generic";
    case LocalKind::FirstOrder: return "fo";
    case LocalKind::FirstOrderDual: return "fo_dual";
    case LocalKind::UnitObj: return "unit";
  }
  return "?";
}

LocalKind local_kind_from_name(const std::string& name) {
  if (name == "generic") return LocalKind::Generic;
  if (name == "fo") return LocalKind::FirstOrder;
  if (name == "fo_dual") return LocalKind::FirstOrderDual;
  if (name == "unit") return LocalKind::UnitObj;
  throw ValidationError("unknown vertex kind '" + name + "'");
}

LocalKind dual_kind(LocalKind k) {
  switch (k) {
    case LocalKind::Generic: return LocalKind::Generic;
    case LocalKind::FirstOrder: return LocalKind::FirstOrderDual;
    case LocalKind::FirstOrderDual: return LocalKind::FirstOrder;
    case LocalKind::UnitObj: return LocalKind::UnitObj;
  }
  return LocalKind::Generic;
}

int Dag::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

bool Dag::has_edge(int u, int v) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

void Dag::normalize_edges() {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void Dag::validate() const {
  if (names.size() != kinds.size())
    throw ValidationError("graph: names/kinds size mismatch");
  std::set<std::string> seen;
  for (const std::string& n : names) {
    if (n.empty()) throw ValidationError("graph: empty vertex name");
    if (!seen.insert(n).second)
      throw ValidationError("graph: duplicate vertex name '" + n + "'");
  }
  const int n = static_cast<int>(names.size());
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ValidationError("graph: edge endpoint out of range");
    if (u == v) throw ValidationError("graph: self-loop at '" + names[static_cast<std::size_t>(u)] + "'");
  }
  if (!std::is_sorted(edges.begin(), edges.end()))
    throw ValidationError("graph: edges not normalized");
  // acyclicity (Kahn)
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  for (auto [u, v] : edges) indeg[static_cast<std::size_t>(v)]++;
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (indeg[static_cast<std::size_t>(i)] == 0) queue.push_back(i);
  std::size_t head = 0;
  int seen_count = 0;
  while (head < queue.size()) {
    int u = queue[head++];
    ++seen_count;
    for (auto [a, b] : edges)
      if (a == u && --indeg[static_cast<std::size_t>(b)] == 0) queue.push_back(b);
  }
  if (seen_count != n) throw ValidationError("graph: contains a directed cycle");
}

Dag transitive_closure(const Dag& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n),
                                       std::vector<bool>(static_cast<std::size_t>(n), false));
  for (auto [u, v] : g.edges) reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])
        for (int j = 0; j < n; ++j)
          if (reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
            reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  Dag out;
  out.names = g.names;
  out.kinds = g.kinds;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
        out.edges.emplace_back(u, v);
  out.normalize_edges();
  return out;
}

Dag standard_form(const Dag& g) {
  Dag closed = transitive_closure(g);
  auto can_emit = [](LocalKind k) {
    return k == LocalKind::Generic || k == LocalKind::FirstOrderDual;
  };
  auto can_receive = [](LocalKind k) {
    return k == LocalKind::Generic || k == LocalKind::FirstOrder;
  };
  std::vector<std::pair<int, int>> kept;
  for (auto [u, v] : closed.edges)
    if (can_emit(g.kinds[static_cast<std::size_t>(u)]) &&
        can_receive(g.kinds[static_cast<std::size_t>(v)]))
      kept.emplace_back(u, v);
  closed.edges = std::move(kept);
  return closed;
}

bool includes(const Dag& g, const Dag& h) {
  if (g.names != h.names || g.kinds != h.kinds)
    throw NotCompatibleError("includes: graphs must share vertices and kinds");
  Dag sg = standard_form(g);
  Dag sh = standard_form(h);
  return std::includes(sh.edges.begin(), sh.edges.end(), sg.edges.begin(),
                       sg.edges.end());
}

namespace {

std::vector<int> find_cycle_in_edges(int n,
                                     const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) adj[static_cast<std::size_t>(u)].push_back(v);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  std::vector<int> path;
  std::vector<std::pair<int, std::size_t>> stack;
  for (int s0 = 0; s0 < n; ++s0) {
    if (color[static_cast<std::size_t>(s0)] != 0) continue;
    stack.emplace_back(s0, 0);
    while (!stack.empty()) {
      int u = stack.back().first;
      std::size_t i = stack.back().second;
      if (i == 0) {
        color[static_cast<std::size_t>(u)] = 1;
        path.push_back(u);
      }
      if (i < adj[static_cast<std::size_t>(u)].size()) {
        stack.back().second++;
        int v = adj[static_cast<std::size_t>(u)][i];
        if (color[static_cast<std::size_t>(v)] == 1) {
          auto it = std::find(path.begin(), path.end(), v);
          return std::vector<int>(it, path.end());
        }
        if (color[static_cast<std::size_t>(v)] == 0) stack.emplace_back(v, 0);
      } else {
        color[static_cast<std::size_t>(u)] = 2;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

CompatResult compatible(const Dag& g, const Dag& h) {
  if (g.names != h.names)
    throw NotCompatibleError("compatible: graphs must share a vertex set");
  for (std::size_t i = 0; i < g.kinds.size(); ++i)
    if (h.kinds[i] != dual_kind(g.kinds[i]))
      throw NotCompatibleError("compatible: vertex '" + g.names[i] +
                               "' kinds are not dual");
  Dag sg = standard_form(g);
  Dag sh = standard_form(h);
  std::vector<std::pair<int, int>> merged = sg.edges;
  merged.insert(merged.end(), sh.edges.begin(), sh.edges.end());
  CompatResult res;
  res.cycle = find_cycle_in_edges(static_cast<int>(g.size()), merged);
  res.compatible = res.cycle.empty();
  return res;
}

Dag substitute(const Dag& g, const std::string& name, const Dag& h) {
  int vi = g.index_of(name);
  if (vi < 0) throw ValidationError("substitute: no vertex '" + name + "'");
  for (const std::string& hn : h.names)
    if (g.index_of(hn) >= 0 && hn != name)
      throw NotCompatibleError("substitute: vertex name '" + hn +
                               "' already present");
  if (h.index_of(name) >= 0)
    throw NotCompatibleError("substitute: replacement reuses the name '" +
                             name + "'");
  Dag out;
  const int n = static_cast<int>(g.size());
  const int m = static_cast<int>(h.size());
  // splice h's vertices at position vi
  std::vector<int> gmap(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    if (i < vi) gmap[static_cast<std::size_t>(i)] = i;
    else if (i > vi) gmap[static_cast<std::size_t>(i)] = i - 1 + m;
  }
  for (int i = 0; i < vi; ++i) {
    out.names.push_back(g.names[static_cast<std::size_t>(i)]);
    out.kinds.push_back(g.kinds[static_cast<std::size_t>(i)]);
  }
  for (int j = 0; j < m; ++j) {
    out.names.push_back(h.names[static_cast<std::size_t>(j)]);
    out.kinds.push_back(h.kinds[static_cast<std::size_t>(j)]);
  }
  for (int i = vi + 1; i < n; ++i) {
    out.names.push_back(g.names[static_cast<std::size_t>(i)]);
    out.kinds.push_back(g.kinds[static_cast<std::size_t>(i)]);
  }
  auto hmap = [&](int j) { return vi + j; };
  for (auto [u, v] : g.edges) {
    if (u == vi && v == vi) continue;
    if (u == vi) {
      for (int j = 0; j < m; ++j)
        out.edges.emplace_back(hmap(j), gmap[static_cast<std::size_t>(v)]);
    } else if (v == vi) {
      for (int j = 0; j < m; ++j)
        out.edges.emplace_back(gmap[static_cast<std::size_t>(u)], hmap(j));
    } else {
      out.edges.emplace_back(gmap[static_cast<std::size_t>(u)],
                             gmap[static_cast<std::size_t>(v)]);
    }
  }
  for (auto [u, v] : h.edges) out.edges.emplace_back(hmap(u), hmap(v));
  out.normalize_edges();
  out.validate();
  return out;
}

static Dag join(const Dag& g, const Dag& h, bool with_edges) {
  for (const std::string& hn : h.names)
    if (g.index_of(hn) >= 0)
      throw NotCompatibleError("composition: vertex name '" + hn +
                               "' appears on both sides");
  Dag out;
  out.names = g.names;
  out.kinds = g.kinds;
  out.names.insert(out.names.end(), h.names.begin(), h.names.end());
  out.kinds.insert(out.kinds.end(), h.kinds.begin(), h.kinds.end());
  const int off = static_cast<int>(g.size());
  out.edges = g.edges;
  for (auto [u, v] : h.edges) out.edges.emplace_back(u + off, v + off);
  if (with_edges)
    for (int u = 0; u < off; ++u)
      for (int v = 0; v < static_cast<int>(h.size()); ++v)
        out.edges.emplace_back(u, v + off);
  out.normalize_edges();
  out.validate();
  return out;
}

Dag series(const Dag& g, const Dag& h) { return join(g, h, true); }
Dag parallel(const Dag& g, const Dag& h) { return join(g, h, false); }

std::vector<std::vector<int>> topological_sorts(const Dag& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  for (auto [u, v] : g.edges) preds[static_cast<std::size_t>(v)].push_back(u);
  std::vector<std::vector<int>> sorts;
  std::vector<bool> placed(static_cast<std::size_t>(n), false);
  std::vector<int> current;
  auto ready = [&](int v) {
    for (int p : preds[static_cast<std::size_t>(v)])
      if (!placed[static_cast<std::size_t>(p)]) return false;
    return true;
  };
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == n) {
      sorts.push_back(current);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (placed[static_cast<std::size_t>(v)] || !ready(v)) continue;
      placed[static_cast<std::size_t>(v)] = true;
      current.push_back(v);
      self(self);
      current.pop_back();
      placed[static_cast<std::size_t>(v)] = false;
    }
  };
  rec(rec);
  return sorts;
}

std::vector<std::vector<int>> down_closed_subsets(const Dag& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<int>> subsets;
  const unsigned full = n >= 32 ? 0u : (1u << n) - 1u;
  if (n >= 32) throw GuardError("down_closed_subsets: graph too large");
  for (unsigned mask = 0; mask < full; ++mask) {
    bool ok = true;
    for (auto [u, v] : g.edges) {
      if ((mask >> v) & 1u) {
        if (!((mask >> u) & 1u)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) subset.push_back(i);
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

Json dag_to_json(const Dag& g) {
  Json j;
  j["vertices"] = Json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    Json v;
    v["name"] = g.names[i];
    v["kind"] = local_kind_name(g.kinds[i]);
    j["vertices"].push_back(std::move(v));
  }
  j["edges"] = Json::array();
  for (auto [u, v] : g.edges)
    j["edges"].push_back(Json::array({g.names[static_cast<std::size_t>(u)],
                                      g.names[static_cast<std::size_t>(v)]}));
  return j;
}

Dag dag_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices"))
    throw ValidationError("graph JSON requires 'vertices'");
  Dag g;
  for (const Json& v : j["vertices"]) {
    if (!v.is_object() || !v.contains("name"))
      throw ValidationError("graph vertex requires 'name'");
    g.names.push_back(v["name"].get<std::string>());
    g.kinds.push_back(local_kind_from_name(v.value("kind", std::string("generic"))));
  }
  if (j.contains("edges")) {
    for (const Json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw ValidationError("graph edge must be a [source, target] pair");
      int u = g.index_of(e[0].get<std::string>());
      int v = g.index_of(e[1].get<std::string>());
      if (u < 0 || v < 0) throw ValidationError("graph edge names unknown");
      g.edges.emplace_back(u, v);
    }
  }
  g.normalize_edges();
  g.validate();
  return g;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty() || !parts.empty()) parts.push_back(cur);
  while (!parts.empty() && parts.back().empty()) parts.pop_back();
  return parts;
}

}  // namespace

Dag dag_from_edge_list(const std::string& vertices, const std::string& edges) {
  Dag g;
  for (const std::string& part : split_list(vertices)) {
    if (part.empty()) throw ValidationError("empty vertex entry");
    auto colon = part.find(':');
    std::string name = part.substr(0, colon);
    LocalKind kind = colon == std::string::npos
                         ? LocalKind::Generic
                         : local_kind_from_name(part.substr(colon + 1));
    g.names.push_back(name);
    g.kinds.push_back(kind);
  }
  for (const std::string& part : split_list(edges)) {
    if (part.empty()) throw ValidationError("empty edge entry");
    auto gt = part.find('>');
    if (gt == std::string::npos)
      throw ValidationError("edge '" + part + "' must look like u>v");
    int u = g.index_of(part.substr(0, gt));
    int v = g.index_of(part.substr(gt + 1));
    if (u < 0 || v < 0)
      throw ValidationError("edge '" + part + "' names an unknown vertex");
    g.edges.emplace_back(u, v);
  }
  g.normalize_edges();
  g.validate();
  return g;
}

std::string dag_dot(const Dag& g) {
  std::ostringstream os;
  os << "digraph graphtype {\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    os << "  v" << i << " [label=\"" << g.names[i] << " ("
       << local_kind_name(g.kinds[i]) << ")\"];\n";
  for (auto [u, v] : g.edges) os << "  v" << u << " -> v" << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace causalnet
