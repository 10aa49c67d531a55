#include "causalnet/corpus.hpp"

#include <random>
#include <string>

#include "causalnet/errors.hpp"
#include "causalnet/proofnet.hpp"

namespace causalnet {

namespace {

// mt19937_64 output is pinned by the standard; avoiding std::*_distribution
// keeps the stream identical across standard libraries.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::string pair_name(int k) {
  std::string base(1, static_cast<char>('A' + k % 26));
  if (k >= 26) base += std::to_string(k / 26);
  return base;
}

Formula build_tree(std::mt19937_64& rng, std::vector<Formula>& leaves,
                   std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return leaves[lo];
  std::size_t split = lo + 1 + below(rng, hi - lo - 1);
  Formula l = build_tree(rng, leaves, lo, split);
  Formula r = build_tree(rng, leaves, split, hi);
  switch (below(rng, 10)) {
    case 0: case 1: case 2: case 3: return Formula::par(std::move(l), std::move(r));
    case 4: case 5: case 6: return Formula::tensor(std::move(l), std::move(r));
    default: return Formula::seq(std::move(l), std::move(r));
  }
}

std::size_t default_leaf_dim(const Leaf& leaf) {
  if (leaf.unit) return 1;
  return leaf.fo ? 2 : 4;
}

std::size_t carrier_of(const Formula& f) {
  std::size_t d = 1;
  for (const auto& leaf : leaf_order(f)) d *= default_leaf_dim(leaf);
  return d;
}

void par_blocks(const Formula& f, std::vector<const Formula*>& out) {
  if (f.op == Op::Par) {
    par_blocks(f.children[0], out);
    par_blocks(f.children[1], out);
  } else {
    out.push_back(&f);
  }
}

bool within_caps(const Formula& f, const CorpusOptions& o) {
  std::size_t total = carrier_of(f);
  if (total > o.max_total_dim) return false;
  if (total > o.max_block_dim) {
    std::vector<const Formula*> blocks;
    par_blocks(f, blocks);
    if (blocks.size() == 1) return false;
    for (const Formula* b : blocks)
      if (carrier_of(*b) > o.max_block_dim) return false;
  }
  ProofStructure s = structure_of(f);
  return switching_count(s) <= o.max_switchings;
}

Formula random_formula(std::mt19937_64& rng, const CorpusOptions& o) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    int pairs = 1 + static_cast<int>(below(rng, static_cast<std::uint64_t>(o.max_pairs)));
    int units = o.allow_units
                    ? static_cast<int>(below(rng, static_cast<std::uint64_t>(o.max_units) + 1))
                    : 0;
    std::vector<Formula> leaves;
    for (int k = 0; k < pairs; ++k) {
      bool fo = o.allow_fo && below(rng, 2) == 1;
      leaves.push_back(Formula::atom(pair_name(k), fo, false));
      leaves.push_back(Formula::atom(pair_name(k), fo, true));
    }
    for (int k = 0; k < units; ++k) leaves.push_back(Formula::unit());
    for (std::size_t i = leaves.size(); i > 1; --i)
      std::swap(leaves[i - 1], leaves[below(rng, i)]);
    Formula f = build_tree(rng, leaves, 0, leaves.size());
    if (within_caps(f, o)) return f;
  }
  throw Error("formula generator exhausted its retry budget; relax the caps");
}

}  // namespace

std::vector<Formula> generate_corpus(const CorpusOptions& opts) {
  if (opts.max_pairs < 1) throw ValidationError("corpus needs at least one atom pair");
  std::mt19937_64 rng(opts.seed);
  std::vector<Formula> out;
  out.reserve(opts.count);
  for (std::size_t i = 0; i < opts.count; ++i) out.push_back(random_formula(rng, opts));
  return out;
}

}  // namespace causalnet
