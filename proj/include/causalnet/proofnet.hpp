#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalnet/formula.hpp"

namespace causalnet {

enum class LinkKind { Axiom, FoAxiom, UnitLink, Cut, Tensor, Seq, Par };

std::string link_kind_name(LinkKind k);
LinkKind link_kind_from_name(const std::string& name);

struct Link {
  LinkKind kind = LinkKind::Axiom;
  std::vector<int> premises;     // cut, tensor, seq, par: two; others: none
  std::vector<int> conclusions;  // axiom/fo_axiom: two; cut: none; others: one
};

// A proof structure: occurrence nodes labelled with formulae, partitioned
// into links. Every node is the conclusion of exactly one link and the
// premise of at most one. fo_axiom conclusions are ordered (negative,
// positive); axiom conclusions (positive, negative).
struct ProofStructure {
  std::vector<Formula> labels;
  std::vector<Link> links;
  std::vector<int> conclusions;  // ascending; conclusion of a link, premise of none

  std::size_t node_count() const { return labels.size(); }
  void validate() const;  // throws ValidationError
  // counts per link kind, indexed by LinkKind
  std::vector<std::size_t> kind_counts() const;
};

// Canonical option names per link kind, in enumeration order.
const std::vector<std::string>& link_options(LinkKind k);

// One option index per link, aligned with ProofStructure::links.
struct Switching {
  std::vector<int> choice;
};

// Builds the proof structure of a balanced formula: nodes are the subformula
// occurrences in pre-order, leaves joined by axiom/fo_axiom/unit links,
// internal nodes by their connective's link. Links are emitted in order of
// their defining node (second leaf of the pair for axioms).
ProofStructure structure_of(const Formula& f);

mpz_class switching_count(const ProofStructure& s);

// Directed switching-graph edges over node ids for one switching assignment.
std::vector<std::pair<int, int>> switching_edges(const ProofStructure& s,
                                                 const Switching& sw);

struct NetOptions {
  std::uint64_t max_switchings = (1ull << 26);
  // Opt-in shortcut: test the all-down switching first. Changes which
  // witness is reported on failure, so it is off by default.
  bool prune_all_down = false;
};

struct NetVerdict {
  bool net = true;
  std::optional<Switching> witness;  // lexicographically least failing switching
  std::vector<int> cycle;            // node ids along the witness cycle
};

// Decides the proof-net criterion: every switching graph is acyclic.
// Enumeration is lexicographic (last link varies fastest), so the reported
// witness is the least failing switching unless prune_all_down is set.
NetVerdict is_proof_net(const ProofStructure& s, const NetOptions& opts = {});

// parse -> balance check -> structure_of -> is_proof_net.
NetVerdict check_formula(const Formula& f, const NetOptions& opts = {});

Json structure_to_json(const ProofStructure& s);
ProofStructure structure_from_json(const Json& j);
Json switching_to_json(const ProofStructure& s, const Switching& sw);
Json verdict_to_json(const ProofStructure& s, const NetVerdict& v);

std::string structure_dot(const ProofStructure& s);
std::string switching_dot(const ProofStructure& s, const Switching& sw);

}  // namespace causalnet
