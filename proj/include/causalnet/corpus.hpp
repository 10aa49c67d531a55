#pragma once

#include <cstdint>
#include <vector>

#include "causalnet/formula.hpp"

namespace causalnet {

// Options for the random balanced-formula generator. The shape caps are
// enforced under the default interpretation and keep both switching
// enumeration and semantic checks fast; candidates violating a cap are
// redrawn.
struct CorpusOptions {
  std::size_t count = 500;
  std::uint64_t seed = 1;
  int max_pairs = 6;  // atom pairs per formula (at least 1)
  int max_units = 2;
  bool allow_fo = true;
  bool allow_units = true;
  std::uint64_t max_switchings = std::uint64_t{1} << 14;
  std::size_t max_total_dim = std::size_t{1} << 14;
  std::size_t max_block_dim = 128;  // per top-level par block
};

// Deterministic for fixed options: the same seed always yields the same
// formulae, independent of platform.
std::vector<Formula> generate_corpus(const CorpusOptions& opts);

}  // namespace causalnet
