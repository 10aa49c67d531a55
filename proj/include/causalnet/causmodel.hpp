#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "causalnet/formula.hpp"
#include "causalnet/graphtype.hpp"
#include "causalnet/linalg.hpp"

namespace causalnet {

// A finite-dimensional higher-order causal object over exact rationals: a
// carrier dimension, an affine-closed set of states (vectors over the
// carrier), and the two normalisation scalars. Flatness pins them down: the
// normalised uniform state mu * (1,...,1) must be a state and the normalised
// total effect theta * sum(-) must evaluate to 1 on every state, which forces
// mu * theta * dim = 1.
struct CausalObject {
  std::size_t dim = 1;
  AffineSubspace states = AffineSubspace::point(Vec{Rat(1)});
  Rat mu = Rat(1);
  Rat theta = Rat(1);

  bool operator==(const CausalObject& o) const {
    return dim == o.dim && mu == o.mu && theta == o.theta && states == o.states;
  }

  void verify_flat() const;  // throws ValidationError when not flat

  // A first-order object admits exactly one effect (its states fill the
  // normalisation hyperplane); a first-order dual admits exactly one state.
  bool is_first_order() const;
  bool is_first_order_dual() const;
  LocalKind classify() const;
};

// Constructors of the object algebra. All results are flat when the inputs
// are; the preconditions below throw NotCompatibleError when violated.
CausalObject unit_object();                 // dim 1, single state (1)
CausalObject first_order(std::size_t d);    // states = normalisation hyperplane
CausalObject dual(const CausalObject& a);   // effects of a, scalars swapped
CausalObject tensor(const CausalObject& a, const CausalObject& b);
CausalObject parr(const CausalObject& a, const CausalObject& b);
CausalObject seq(const CausalObject& a, const CausalObject& b);        // a before b
CausalObject seq_after(const CausalObject& a, const CausalObject& b);  // a after b
CausalObject oplus(const CausalObject& a, const CausalObject& b);      // needs equal theta
CausalObject times(const CausalObject& a, const CausalObject& b);      // needs equal mu
// Union/intersection need identical carrier dimension and scalars.
CausalObject union_object(const CausalObject& a, const CausalObject& b);
CausalObject intersection_object(const CausalObject& a, const CausalObject& b);

CausalObject bit_object();   // first_order(2)
CausalObject bit_channel();  // 2 -o 2: affine channels on a bit; neither
                             // first-order nor first-order dual

// Re-lays-out a subspace over a product carrier: the input carrier is a
// row-major product of blocks of sizes dims[order[0]], dims[order[1]], ...;
// the output carrier is the product in index order dims[0], dims[1], ....
AffineSubspace reindex_blocks(const AffineSubspace& s,
                              const std::vector<std::size_t>& dims,
                              const std::vector<int>& order);

// Atom interpretations: each name maps to the object of its positive
// occurrence (negative occurrences take the dual). Interpreting first-order
// atoms requires first-order objects; regular atoms require objects that are
// neither first-order nor first-order dual.
struct Interpretation {
  std::map<std::string, CausalObject> atoms;
  std::size_t max_dim = std::size_t{1} << 20;  // carrier guard for interpret
};

// !A -> bit, regular A -> bit channel.
Interpretation default_interpretation(const Formula& f);

std::size_t carrier_dim(const Formula& f, const Interpretation& phi);
CausalObject interpret(const Formula& f, const Interpretation& phi);

// The contraction covector of a balanced formula over the leaf-order carrier:
// the product over atom pairs of the pairing between the pair's two slots
// (and 1 on unit slots).
Vec contraction_effect(const Formula& f, const Interpretation& phi);

struct ConsistencyOptions {
  // Carriers up to this size are interpreted densely; above it the check
  // peels the top-level par blocks, which must each fit within the limit.
  std::size_t dense_limit = 256;
};

// Whether the contraction covector of f is a state of interpret(f, phi);
// equivalently, whether it pairs to 1 with the single-state offset and to 0
// with every state direction of interpret(negate(f), phi).
bool consistent(const Formula& f, const Interpretation& phi,
                const ConsistencyOptions& opts = {});

enum class GraphTypeMethod { Signalling, Ordered, Local2 };

// The graph type over g with vertex objects gamma (aligned with g.names),
// computed by one of three equivalent constructions: intersection over
// down-closed cuts, intersection over topological sorts, or the affine hull
// of bit-wired graph states.
CausalObject graph_type(const Dag& g, const std::vector<CausalObject>& gamma,
                        GraphTypeMethod m,
                        std::size_t max_dim = std::size_t{1} << 20);

// Default vertex objects by kind: generic -> 2 -o 2, fo -> 2, fo_dual -> 2*,
// unit -> I.
std::vector<CausalObject> default_gamma(const Dag& g);

Json subspace_to_json(const AffineSubspace& s);
AffineSubspace subspace_from_json(const Json& j);
Json object_to_json(const CausalObject& o);
CausalObject object_from_json(const Json& j);

}  // namespace causalnet
