#include "causalnet/rewrite.hpp"

#include <functional>
#include <string>
#include <vector>

#include "causalnet/errors.hpp"

namespace causalnet {

namespace {

int next_fresh_index(const ProofStructure& s) {
  int maxi = 0;
  for (const auto& f : s.labels) {
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
      if (g.op == Op::Atom && !g.name.empty() && g.name[0] == kFreshPrefix) {
        try {
          maxi = std::max(maxi, std::stoi(g.name.substr(1)));
        } catch (...) {
        }
      }
      for (const auto& c : g.children) walk(c);
    };
    walk(f);
  }
  return maxi + 1;
}

struct Builder {
  ProofStructure t;
  int counter = 1;

  int add_node(Formula label) {
    t.labels.push_back(std::move(label));
    return static_cast<int>(t.labels.size()) - 1;
  }

  std::string fresh() { return std::string(1, kFreshPrefix) + std::to_string(counter++); }
};

// Recomputes every internal label from the labels of the link premises, so
// that relabelled leaves propagate upward.
void recompute_labels(ProofStructure& t) {
  std::vector<int> concl_of(t.labels.size(), -1);
  for (std::size_t li = 0; li < t.links.size(); ++li)
    for (int c : t.links[li].conclusions) concl_of[static_cast<std::size_t>(c)] = static_cast<int>(li);

  std::vector<char> done(t.labels.size(), 0);
  std::function<void(int)> eval = [&](int node) {
    auto u = static_cast<std::size_t>(node);
    if (done[u]) return;
    done[u] = 1;
    int li = concl_of[u];
    if (li < 0) throw ValidationError("node " + std::to_string(node) + " is not the conclusion of any link");
    const Link& l = t.links[static_cast<std::size_t>(li)];
    switch (l.kind) {
      case LinkKind::Tensor:
      case LinkKind::Seq:
      case LinkKind::Par: {
        eval(l.premises[0]);
        eval(l.premises[1]);
        const Formula& a = t.labels[static_cast<std::size_t>(l.premises[0])];
        const Formula& b = t.labels[static_cast<std::size_t>(l.premises[1])];
        Op op = l.kind == LinkKind::Tensor ? Op::Tensor : l.kind == LinkKind::Seq ? Op::Seq : Op::Par;
        t.labels[u] = Formula{op, "", false, false, {a, b}};
        break;
      }
      default:
        break;  // leaf labels stay as set
    }
  };
  for (std::size_t i = 0; i < t.labels.size(); ++i) eval(static_cast<int>(i));
}

void recompute_conclusions(ProofStructure& t) {
  std::vector<char> is_premise(t.labels.size(), 0);
  for (const auto& l : t.links)
    for (int p : l.premises) is_premise[static_cast<std::size_t>(p)] = 1;
  t.conclusions.clear();
  for (std::size_t i = 0; i < t.labels.size(); ++i)
    if (!is_premise[i]) t.conclusions.push_back(static_cast<int>(i));
}

void reject_cuts(const ProofStructure& s, const char* what) {
  for (const auto& l : s.links)
    if (l.kind == LinkKind::Cut)
      throw ValidationError(std::string(what) + " requires a cut-free structure");
}

}  // namespace

ProofStructure pom(const ProofStructure& s) {
  s.validate();
  reject_cuts(s, "pom rewrite");

  Builder b;
  b.t.labels = s.labels;
  b.counter = next_fresh_index(s);
  std::vector<int> side_roots;

  for (const Link& l : s.links) {
    switch (l.kind) {
      case LinkKind::UnitLink: {
        // I  becomes  x~ % x  over a fresh axiom.
        int u = l.conclusions[0];
        std::string x = b.fresh();
        int nl = b.add_node(Formula::atom(x, false, true));
        int nr = b.add_node(Formula::atom(x, false, false));
        b.t.links.push_back(Link{LinkKind::Axiom, {}, {nr, nl}});
        b.t.links.push_back(Link{LinkKind::Par, {nl, nr}, {u}});
        break;
      }
      case LinkKind::FoAxiom: {
        // !A~ , !A  become fresh regular atoms  x , y  plus a side channel
        // x~ < y~ that is par-chained onto the structure afterwards.
        int nneg = l.conclusions[0];
        int npos = l.conclusions[1];
        std::string x = b.fresh();
        std::string y = b.fresh();
        b.t.labels[static_cast<std::size_t>(nneg)] = Formula::atom(x, false, false);
        b.t.labels[static_cast<std::size_t>(npos)] = Formula::atom(y, false, false);
        int n1 = b.add_node(Formula::atom(x, false, true));
        int n2 = b.add_node(Formula::atom(y, false, true));
        int n3 = b.add_node(Formula::seq(Formula::atom(x, false, true), Formula::atom(y, false, true)));
        b.t.links.push_back(Link{LinkKind::Axiom, {}, {nneg, n1}});
        b.t.links.push_back(Link{LinkKind::Axiom, {}, {npos, n2}});
        b.t.links.push_back(Link{LinkKind::Seq, {n1, n2}, {n3}});
        side_roots.push_back(n3);
        break;
      }
      default:
        b.t.links.push_back(l);
        break;
    }
  }

  int attach = s.conclusions.empty() ? -1 : s.conclusions[0];
  for (int r : side_roots) {
    int nr = b.add_node(Formula::unit());  // placeholder, recomputed below
    b.t.links.push_back(Link{LinkKind::Par, {attach, r}, {nr}});
    attach = nr;
  }

  recompute_labels(b.t);
  recompute_conclusions(b.t);
  b.t.validate();
  return b.t;
}

ProofStructure fo(const ProofStructure& s) {
  s.validate();
  reject_cuts(s, "fo rewrite");

  Builder b;
  b.t.labels = s.labels;
  b.counter = next_fresh_index(s);

  for (const Link& l : s.links) {
    switch (l.kind) {
      case LinkKind::UnitLink: {
        // I  becomes  !x~ % !x  over a fresh fo_axiom.
        int u = l.conclusions[0];
        std::string x = b.fresh();
        int n1 = b.add_node(Formula::atom(x, true, true));
        int n2 = b.add_node(Formula::atom(x, true, false));
        b.t.links.push_back(Link{LinkKind::FoAxiom, {}, {n1, n2}});
        b.t.links.push_back(Link{LinkKind::Par, {n1, n2}, {u}});
        break;
      }
      case LinkKind::Axiom: {
        // A , A~  become  !y~ % !x , !y * !x~  wired by two opposite
        // fo_axioms: the channel runs input-to-output through both doors.
        int cpos = l.conclusions[0];
        int cneg = l.conclusions[1];
        std::string y = b.fresh();
        std::string x = b.fresh();
        int p1 = b.add_node(Formula::atom(y, true, true));
        int p2 = b.add_node(Formula::atom(x, true, false));
        int q1 = b.add_node(Formula::atom(y, true, false));
        int q2 = b.add_node(Formula::atom(x, true, true));
        b.t.links.push_back(Link{LinkKind::Par, {p1, p2}, {cpos}});
        b.t.links.push_back(Link{LinkKind::Tensor, {q1, q2}, {cneg}});
        b.t.links.push_back(Link{LinkKind::FoAxiom, {}, {p1, q1}});
        b.t.links.push_back(Link{LinkKind::FoAxiom, {}, {q2, p2}});
        break;
      }
      case LinkKind::Seq: {
        // A < B  becomes  (A * !x~) % (!x * B): the side channel carries the
        // left-to-right ordering.
        int pl = l.premises[0];
        int pr = l.premises[1];
        int c = l.conclusions[0];
        std::string x = b.fresh();
        int s1 = b.add_node(Formula::atom(x, true, true));
        int s2 = b.add_node(Formula::atom(x, true, false));
        int t1 = b.add_node(Formula::unit());  // placeholders, recomputed
        int t2 = b.add_node(Formula::unit());
        b.t.links.push_back(Link{LinkKind::Tensor, {pl, s1}, {t1}});
        b.t.links.push_back(Link{LinkKind::Tensor, {s2, pr}, {t2}});
        b.t.links.push_back(Link{LinkKind::FoAxiom, {}, {s1, s2}});
        b.t.links.push_back(Link{LinkKind::Par, {t1, t2}, {c}});
        break;
      }
      default:
        b.t.links.push_back(l);
        break;
    }
  }

  recompute_labels(b.t);
  recompute_conclusions(b.t);
  b.t.validate();
  return b.t;
}

}  // namespace causalnet
