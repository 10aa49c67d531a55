#pragma once

#include "causalnet/proofnet.hpp"

namespace causalnet {

// Prefix of generated atom names ("@1", "@2", ...). The formula parser
// rejects it, so generated names can never collide with user input.
inline constexpr char kFreshPrefix = '@';

// Eliminates unit and fo_axiom links. Each unit leaf becomes (x~ % x) over a
// fresh axiom; each fo_axiom becomes a pair of fresh regular atoms at its old
// conclusions plus a one-way side channel (x~ < y~) par-chained onto the
// structure's first conclusion. The proof-net verdict is preserved.
// Requires a cut-free structure.
ProofStructure pom(const ProofStructure& s);

// Eliminates unit, axiom and seq links. Units become (!x~ % !x) over a fresh
// fo_axiom; an axiom on A becomes the channel pair A -> (!y~ % !x),
// A~ -> (!y * !x~) wired by two opposite fo_axioms; a seq A < B becomes
// (A * !x~) % (!x * B) with a one-way side channel. The proof-net verdict is
// preserved. Requires a cut-free structure.
ProofStructure fo(const ProofStructure& s);

}  // namespace causalnet
