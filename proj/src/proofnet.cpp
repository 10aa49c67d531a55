#include "causalnet/proofnet.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <map>
#include <sstream>

#include "causalnet/errors.hpp"

namespace causalnet {

std::string link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Axiom: return "axiom";
    case LinkKind::FoAxiom: return "fo_axiom";
    case LinkKind::UnitLink: return "unit";
    case LinkKind::Cut: return "cut";
    case LinkKind::Tensor: return "tensor";
    case LinkKind::Seq: return "seq";
    case LinkKind::Par: return "par";
  }
  return "?";
}

LinkKind link_kind_from_name(const std::string& name) {
  if (name == "axiom") return LinkKind::Axiom;
  if (name == "fo_axiom") return LinkKind::FoAxiom;
  if (name == "unit") return LinkKind::UnitLink;
  if (name == "cut") return LinkKind::Cut;
  if (name == "tensor") return LinkKind::Tensor;
  if (name == "seq") return LinkKind::Seq;
  if (name == "par") return LinkKind::Par;
  throw ValidationError("unknown link kind '" + name + "'");
}

const std::vector<std::string>& link_options(LinkKind k) {
  static const std::vector<std::string> axiom{"la", "ra"};
  static const std::vector<std::string> fo{"fo"};
  static const std::vector<std::string> unit{"i"};
  static const std::vector<std::string> cut{"lc", "rc"};
  static const std::vector<std::string> tensor{"ul", "ur", "dl", "dr"};
  static const std::vector<std::string> seq{"us", "ds"};
  static const std::vector<std::string> par{"up", "dp"};
  switch (k) {
    case LinkKind::Axiom: return axiom;
    case LinkKind::FoAxiom: return fo;
    case LinkKind::UnitLink: return unit;
    case LinkKind::Cut: return cut;
    case LinkKind::Tensor: return tensor;
    case LinkKind::Seq: return seq;
    case LinkKind::Par: return par;
  }
  return unit;  // unreachable
}

namespace {

struct Arity {
  std::size_t premises;
  std::size_t conclusions;
};

Arity link_arity(LinkKind k) {
  switch (k) {
    case LinkKind::Axiom:
    case LinkKind::FoAxiom: return {0, 2};
    case LinkKind::UnitLink: return {0, 1};
    case LinkKind::Cut: return {2, 0};
    default: return {2, 1};
  }
}

// Up to two directed edges per (link, option). l/r are premises, c the
// conclusion; for axioms and cuts the roles fall on conclusions/premises.
void option_edges(const Link& link, int opt, std::array<std::pair<int, int>, 2>& out,
                  int& count) {
  count = 0;
  auto add = [&](int a, int b) { out[static_cast<std::size_t>(count++)] = {a, b}; };
  switch (link.kind) {
    case LinkKind::Axiom: {
      int c1 = link.conclusions[0], c2 = link.conclusions[1];
      if (opt == 0) add(c2, c1);  // la
      else add(c1, c2);           // ra
      break;
    }
    case LinkKind::FoAxiom:
      // one-way: negative conclusion to positive conclusion
      add(link.conclusions[0], link.conclusions[1]);
      break;
    case LinkKind::UnitLink:
      break;
    case LinkKind::Cut: {
      int p1 = link.premises[0], p2 = link.premises[1];
      if (opt == 0) add(p1, p2);  // lc
      else add(p2, p1);           // rc
      break;
    }
    case LinkKind::Tensor: {
      int l = link.premises[0], r = link.premises[1], c = link.conclusions[0];
      switch (opt) {
        case 0: add(c, r); add(r, l); break;  // ul
        case 1: add(c, l); add(l, r); break;  // ur
        case 2: add(r, l); add(l, c); break;  // dl
        case 3: add(l, r); add(r, c); break;  // dr
      }
      break;
    }
    case LinkKind::Seq: {
      int l = link.premises[0], r = link.premises[1], c = link.conclusions[0];
      if (opt == 0) { add(c, l); add(l, r); }  // us
      else { add(l, r); add(r, c); }           // ds
      break;
    }
    case LinkKind::Par: {
      int l = link.premises[0], r = link.premises[1], c = link.conclusions[0];
      if (opt == 0) { add(c, l); add(c, r); }  // up
      else { add(l, c); add(r, c); }           // dp
      break;
    }
  }
}

}  // namespace

void ProofStructure::validate() const {
  const int n = static_cast<int>(labels.size());
  if (n == 0) throw ValidationError("proof structure has no nodes");
  std::vector<int> as_conclusion(static_cast<std::size_t>(n), 0);
  std::vector<int> as_premise(static_cast<std::size_t>(n), 0);
  auto in_range = [&](int id) {
    if (id < 0 || id >= n)
      throw ValidationError("node id " + std::to_string(id) + " out of range");
  };
  for (std::size_t li = 0; li < links.size(); ++li) {
    const Link& l = links[li];
    Arity a = link_arity(l.kind);
    if (l.premises.size() != a.premises || l.conclusions.size() != a.conclusions)
      throw ValidationError("link " + std::to_string(li) + " (" +
                            link_kind_name(l.kind) + ") has wrong arity");
    for (int id : l.premises) { in_range(id); as_premise[static_cast<std::size_t>(id)]++; }
    for (int id : l.conclusions) { in_range(id); as_conclusion[static_cast<std::size_t>(id)]++; }
    switch (l.kind) {
      case LinkKind::Axiom: {
        const Formula& p = labels[static_cast<std::size_t>(l.conclusions[0])];
        const Formula& q = labels[static_cast<std::size_t>(l.conclusions[1])];
        if (!p.is_atom() || !q.is_atom() || p.fo || q.fo || p.neg || !q.neg ||
            p.name != q.name)
          throw ValidationError("axiom link " + std::to_string(li) +
                                " must conclude a regular atom and its dual, "
                                "positive first");
        break;
      }
      case LinkKind::FoAxiom: {
        const Formula& m = labels[static_cast<std::size_t>(l.conclusions[0])];
        const Formula& p = labels[static_cast<std::size_t>(l.conclusions[1])];
        if (!m.is_atom() || !p.is_atom() || !m.fo || !p.fo || !m.neg || p.neg ||
            m.name != p.name)
          throw ValidationError("fo_axiom link " + std::to_string(li) +
                                " must conclude a first-order atom pair, "
                                "negative first");
        break;
      }
      case LinkKind::UnitLink:
        if (!labels[static_cast<std::size_t>(l.conclusions[0])].is_unit())
          throw ValidationError("unit link " + std::to_string(li) +
                                " must conclude I");
        break;
      case LinkKind::Cut: {
        const Formula& p = labels[static_cast<std::size_t>(l.premises[0])];
        const Formula& q = labels[static_cast<std::size_t>(l.premises[1])];
        if (!(negate(p) == q))
          throw ValidationError("cut link " + std::to_string(li) +
                                " premises must be dual formulae");
        break;
      }
      case LinkKind::Tensor:
      case LinkKind::Seq:
      case LinkKind::Par: {
        const Formula& c = labels[static_cast<std::size_t>(l.conclusions[0])];
        Op want = l.kind == LinkKind::Tensor ? Op::Tensor
                  : l.kind == LinkKind::Seq ? Op::Seq
                                            : Op::Par;
        if (c.op != want ||
            !(c.children[0] == labels[static_cast<std::size_t>(l.premises[0])]) ||
            !(c.children[1] == labels[static_cast<std::size_t>(l.premises[1])]))
          throw ValidationError("link " + std::to_string(li) +
                                " conclusion label does not match premises");
        break;
      }
    }
  }
  std::vector<int> doors;
  for (int id = 0; id < n; ++id) {
    if (as_conclusion[static_cast<std::size_t>(id)] != 1)
      throw ValidationError("node " + std::to_string(id) +
                            " must be the conclusion of exactly one link");
    if (as_premise[static_cast<std::size_t>(id)] > 1)
      throw ValidationError("node " + std::to_string(id) +
                            " is a premise of more than one link");
    if (as_premise[static_cast<std::size_t>(id)] == 0) doors.push_back(id);
  }
  if (doors != conclusions)
    throw ValidationError("conclusion list does not match the door nodes");
}

std::vector<std::size_t> ProofStructure::kind_counts() const {
  std::vector<std::size_t> counts(7, 0);
  for (const Link& l : links) counts[static_cast<std::size_t>(l.kind)]++;
  return counts;
}

ProofStructure structure_of(const Formula& f) {
  if (!is_balanced(f))
    throw ValidationError("structure_of requires a balanced formula");
  ProofStructure s;
  std::vector<std::array<int, 2>> kids;
  auto assign = [&](auto&& self, const Formula& g) -> int {
    int id = static_cast<int>(s.labels.size());
    s.labels.push_back(g);
    kids.push_back({-1, -1});
    if (g.is_binary()) {
      int l = self(self, g.children[0]);
      int r = self(self, g.children[1]);
      kids[static_cast<std::size_t>(id)] = {l, r};
    }
    return id;
  };
  assign(assign, f);
  std::map<std::string, int> first_leaf;
  const int n = static_cast<int>(s.labels.size());
  for (int id = 0; id < n; ++id) {
    const Formula& g = s.labels[static_cast<std::size_t>(id)];
    if (g.is_binary()) {
      LinkKind k = g.op == Op::Tensor ? LinkKind::Tensor
                   : g.op == Op::Seq ? LinkKind::Seq
                                     : LinkKind::Par;
      s.links.push_back({k,
                         {kids[static_cast<std::size_t>(id)][0],
                          kids[static_cast<std::size_t>(id)][1]},
                         {id}});
    } else if (g.is_unit()) {
      s.links.push_back({LinkKind::UnitLink, {}, {id}});
    } else {
      auto it = first_leaf.find(g.name);
      if (it == first_leaf.end()) {
        first_leaf[g.name] = id;
      } else {
        int other = it->second;
        int pos_id = g.neg ? other : id;
        int neg_id = g.neg ? id : other;
        if (g.fo)
          s.links.push_back({LinkKind::FoAxiom, {}, {neg_id, pos_id}});
        else
          s.links.push_back({LinkKind::Axiom, {}, {pos_id, neg_id}});
      }
    }
  }
  s.conclusions = {0};
  s.validate();
  return s;
}

mpz_class switching_count(const ProofStructure& s) {
  mpz_class total(1);
  for (const Link& l : s.links)
    total *= static_cast<unsigned long>(link_options(l.kind).size());
  return total;
}

std::vector<std::pair<int, int>> switching_edges(const ProofStructure& s,
                                                 const Switching& sw) {
  if (sw.choice.size() != s.links.size())
    throw ValidationError("switching does not match the link list");
  std::vector<std::pair<int, int>> edges;
  std::array<std::pair<int, int>, 2> buf;
  for (std::size_t li = 0; li < s.links.size(); ++li) {
    int opt = sw.choice[li];
    if (opt < 0 ||
        opt >= static_cast<int>(link_options(s.links[li].kind).size()))
      throw ValidationError("switching option out of range at link " +
                            std::to_string(li));
    int cnt = 0;
    option_edges(s.links[li], opt, buf, cnt);
    for (int i = 0; i < cnt; ++i) edges.push_back(buf[static_cast<std::size_t>(i)]);
  }
  // distinct links can contribute the same directed edge; report the edge set
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

namespace {

// Deterministic cycle extraction: DFS from the smallest node id with
// neighbors visited in ascending order; returns the first back-edge cycle.
std::vector<int> find_cycle(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) adj[static_cast<std::size_t>(u)].push_back(v);
  for (auto& a : adj) std::sort(a.begin(), a.end());
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

NetVerdict is_proof_net(const ProofStructure& s, const NetOptions& opts) {
  s.validate();
  mpz_class total = switching_count(s);
  if (total > mpz_class(static_cast<unsigned long>(opts.max_switchings)))
    throw GuardError("switching space of size " + total.get_str() +
                     " exceeds the enumeration bound " +
                     std::to_string(opts.max_switchings) +
                     "; raise --max-switchings to proceed");
  const int n = static_cast<int>(s.node_count());
  const std::size_t L = s.links.size();

  // Per link and option: flat edge fragments.
  std::vector<int> nopts(L);
  std::vector<std::array<std::array<std::pair<int, int>, 2>, 4>> frag(L);
  std::vector<std::array<int, 4>> frag_len(L);
  for (std::size_t li = 0; li < L; ++li) {
    nopts[li] = static_cast<int>(link_options(s.links[li].kind).size());
    for (int o = 0; o < nopts[li]; ++o)
      option_edges(s.links[li], o, frag[li][static_cast<std::size_t>(o)],
                   frag_len[li][static_cast<std::size_t>(o)]);
  }

  std::vector<int> indeg(static_cast<std::size_t>(n));
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(n));
  // adjacency heads rebuilt per switching: node -> up to 4 successors
  std::vector<std::array<int, 4>> succ(static_cast<std::size_t>(n));
  std::vector<int> succ_len(static_cast<std::size_t>(n));

  auto cyclic = [&](const std::vector<int>& choice) -> bool {
    std::fill(indeg.begin(), indeg.end(), 0);
    std::fill(succ_len.begin(), succ_len.end(), 0);
    for (std::size_t li = 0; li < L; ++li) {
      const auto& edges = frag[li][static_cast<std::size_t>(choice[li])];
      int cnt = frag_len[li][static_cast<std::size_t>(choice[li])];
      for (int i = 0; i < cnt; ++i) {
        auto [u, v] = edges[static_cast<std::size_t>(i)];
        succ[static_cast<std::size_t>(u)][static_cast<std::size_t>(
            succ_len[static_cast<std::size_t>(u)]++)] = v;
        indeg[static_cast<std::size_t>(v)]++;
      }
    }
    queue.clear();
    for (int i = 0; i < n; ++i)
      if (indeg[static_cast<std::size_t>(i)] == 0) queue.push_back(i);
    std::size_t head = 0;
    int seen = 0;
    while (head < queue.size()) {
      int u = queue[head++];
      ++seen;
      for (int i = 0; i < succ_len[static_cast<std::size_t>(u)]; ++i) {
        int v = succ[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)];
        if (--indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
      }
    }
    return seen != n;
  };

  auto fail_with = [&](const std::vector<int>& choice) {
    NetVerdict v;
    v.net = false;
    v.witness = Switching{choice};
    v.cycle = find_cycle(n, switching_edges(s, *v.witness));
    return v;
  };

  if (opts.prune_all_down) {
    std::vector<int> down(L);
    for (std::size_t li = 0; li < L; ++li) {
      switch (s.links[li].kind) {
        case LinkKind::Axiom: down[li] = 1; break;   // ra
        case LinkKind::Tensor: down[li] = 2; break;  // dl
        case LinkKind::Seq: down[li] = 1; break;     // ds
        case LinkKind::Par: down[li] = 1; break;     // dp
        default: down[li] = 0; break;
      }
    }
    if (cyclic(down)) return fail_with(down);
  }

  std::vector<int> choice(L, 0);
  while (true) {
    if (cyclic(choice)) return fail_with(choice);
    // odometer: last link varies fastest (lexicographic order)
    std::size_t i = L;
    while (i > 0) {
      --i;
      if (++choice[i] < nopts[i]) break;
      choice[i] = 0;
      if (i == 0) return NetVerdict{};
    }
    if (L == 0) return NetVerdict{};  // single empty switching
  }
}

NetVerdict check_formula(const Formula& f, const NetOptions& opts) {
  return is_proof_net(structure_of(f), opts);
}

Json structure_to_json(const ProofStructure& s) {
  Json j;
  j["nodes"] = Json::array();
  for (std::size_t id = 0; id < s.labels.size(); ++id) {
    Json node;
    node["id"] = id;
    node["formula"] = formula_to_json(s.labels[id]);
    j["nodes"].push_back(std::move(node));
  }
  j["links"] = Json::array();
  for (const Link& l : s.links) {
    Json link;
    link["kind"] = link_kind_name(l.kind);
    link["premises"] = l.premises;
    link["conclusions"] = l.conclusions;
    j["links"].push_back(std::move(link));
  }
  j["conclusions"] = s.conclusions;
  return j;
}

ProofStructure structure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("links"))
    throw ValidationError("structure JSON requires 'nodes' and 'links'");
  ProofStructure s;
  if (!j["nodes"].is_array()) throw ValidationError("'nodes' must be an array");
  s.labels.resize(j["nodes"].size());
  std::vector<bool> seen(j["nodes"].size(), false);
  for (const Json& node : j["nodes"]) {
    if (!node.is_object() || !node.contains("id") || !node.contains("formula"))
      throw ValidationError("structure node requires 'id' and 'formula'");
    std::size_t id = node["id"].get<std::size_t>();
    if (id >= s.labels.size() || seen[id])
      throw ValidationError("structure node ids must be 0..n-1, unique");
    seen[id] = true;
    s.labels[id] = formula_from_json(node["formula"]);
  }
  if (!j["links"].is_array()) throw ValidationError("'links' must be an array");
  for (const Json& link : j["links"]) {
    if (!link.is_object() || !link.contains("kind"))
      throw ValidationError("structure link requires 'kind'");
    Link l;
    l.kind = link_kind_from_name(link["kind"].get<std::string>());
    if (link.contains("premises")) l.premises = link["premises"].get<std::vector<int>>();
    if (link.contains("conclusions"))
      l.conclusions = link["conclusions"].get<std::vector<int>>();
    s.links.push_back(std::move(l));
  }
  // recompute doors, then verify any provided list agrees
  std::vector<int> premise_count(s.labels.size(), 0);
  std::vector<int> conclusion_count(s.labels.size(), 0);
  for (const Link& l : s.links) {
    for (int id : l.premises)
      if (id >= 0 && id < static_cast<int>(s.labels.size()))
        premise_count[static_cast<std::size_t>(id)]++;
    for (int id : l.conclusions)
      if (id >= 0 && id < static_cast<int>(s.labels.size()))
        conclusion_count[static_cast<std::size_t>(id)]++;
  }
  for (std::size_t id = 0; id < s.labels.size(); ++id)
    if (conclusion_count[id] == 1 && premise_count[id] == 0)
      s.conclusions.push_back(static_cast<int>(id));
  if (j.contains("conclusions") &&
      j["conclusions"].get<std::vector<int>>() != s.conclusions)
    throw ValidationError("provided conclusion list does not match structure");
  s.validate();
  return s;
}

Json switching_to_json(const ProofStructure& s, const Switching& sw) {
  Json arr = Json::array();
  for (std::size_t li = 0; li < s.links.size(); ++li)
    arr.push_back(link_options(s.links[li].kind)[static_cast<std::size_t>(
        sw.choice[li])]);
  return arr;
}

Json verdict_to_json(const ProofStructure& s, const NetVerdict& v) {
  Json j;
  j["verdict"] = v.net ? "net" : "not_net";
  if (!v.net) {
    j["switching"] = switching_to_json(s, *v.witness);
    j["cycle"] = v.cycle;
  }
  return j;
}

static std::string dot_escape(const std::string& in) {
  std::string out;
  for (char c : in) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string structure_dot(const ProofStructure& s) {
  std::ostringstream os;
  os << "digraph structure {\n  rankdir=BT;\n";
  for (std::size_t id = 0; id < s.labels.size(); ++id)
    os << "  n" << id << " [label=\"" << id << ": "
       << dot_escape(render(s.labels[id])) << "\"];\n";
  for (std::size_t li = 0; li < s.links.size(); ++li) {
    const Link& l = s.links[li];
    os << "  l" << li << " [shape=box,label=\"" << link_kind_name(l.kind)
       << "\"];\n";
    for (int p : l.premises) os << "  n" << p << " -> l" << li << ";\n";
    for (int c : l.conclusions) os << "  l" << li << " -> n" << c << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string switching_dot(const ProofStructure& s, const Switching& sw) {
  std::ostringstream os;
  os << "digraph switching {\n";
  for (std::size_t id = 0; id < s.labels.size(); ++id)
    os << "  n" << id << " [label=\"" << id << ": "
       << dot_escape(render(s.labels[id])) << "\"];\n";
  for (auto [u, v] : switching_edges(s, sw))
    os << "  n" << u << " -> n" << v << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace causalnet
