#include "causalnet/causmodel.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "causalnet/errors.hpp"

namespace causalnet {

namespace {

// Inserts w into an RREF basis unless it is already in the row span.
bool rref_insert(Mat& basis, std::vector<int>& pivots, Vec w) {
  if (reduce_against(w, basis, pivots)) return false;
  std::size_t p = 0;
  while (w[p] == 0) ++p;
  Rat inv = 1 / w[p];
  for (auto& x : w) x *= inv;
  for (auto& row : basis)
    if (row[p] != 0) {
      Rat c = row[p];
      for (std::size_t k = 0; k < w.size(); ++k) row[k] -= c * w[k];
    }
  auto pos = std::upper_bound(pivots.begin(), pivots.end(), static_cast<int>(p)) - pivots.begin();
  basis.insert(basis.begin() + pos, std::move(w));
  pivots.insert(pivots.begin() + pos, static_cast<int>(p));
  return true;
}

std::size_t checked_product(std::size_t a, std::size_t b, std::size_t limit) {
  if (b != 0 && a > limit / b)
    throw GuardError("carrier dimension exceeds the configured limit");
  std::size_t n = a * b;
  if (n > limit) throw GuardError("carrier dimension exceeds the configured limit");
  return n;
}

}  // namespace

void CausalObject::verify_flat() const {
  if (dim == 0) throw ValidationError("carrier dimension must be positive");
  if (states.is_empty() || states.ambient() != dim)
    throw ValidationError("state set must be a non-empty subspace over the carrier");
  if (!states.contains(scaled(ones(dim), mu)))
    throw ValidationError("normalised uniform state is not a state");
  Rat s(0);
  for (const auto& x : states.offset()) s += x;
  if (theta * s != 1)
    throw ValidationError("normalised total effect does not evaluate to 1 on states");
  for (const auto& d : states.directions()) {
    Rat t(0);
    for (const auto& x : d) t += x;
    if (t != 0)
      throw ValidationError("normalised total effect does not evaluate to 1 on states");
  }
  if (mu * theta * Rat(static_cast<unsigned long>(dim)) != 1)
    throw ValidationError("normalisation scalars do not match the carrier dimension");
}

bool CausalObject::is_first_order() const {
  return states.affine_dim() + 1 == static_cast<long>(dim);
}

bool CausalObject::is_first_order_dual() const { return states.affine_dim() == 0; }

LocalKind CausalObject::classify() const {
  bool f = is_first_order(), d = is_first_order_dual();
  if (f && d) return LocalKind::UnitObj;
  if (f) return LocalKind::FirstOrder;
  if (d) return LocalKind::FirstOrderDual;
  return LocalKind::Generic;
}

CausalObject unit_object() {
  CausalObject r;
  r.dim = 1;
  r.states = AffineSubspace::point(Vec{Rat(1)});
  r.mu = 1;
  r.theta = 1;
  return r;
}

CausalObject first_order(std::size_t d) {
  if (d == 0) throw ValidationError("carrier dimension must be positive");
  CausalObject r;
  r.dim = d;
  r.states = AffineSubspace::solve(Mat{ones(d)}, Vec{Rat(1)}, d);
  r.mu = Rat(1) / Rat(static_cast<unsigned long>(d));
  r.theta = 1;
  return r;
}

CausalObject dual(const CausalObject& a) {
  CausalObject r;
  r.dim = a.dim;
  r.states = a.states.annihilator_one();
  r.mu = a.theta;
  r.theta = a.mu;
  if (r.states.is_empty()) throw ValidationError("dual of a non-flat object");
  return r;
}

CausalObject tensor(const CausalObject& a, const CausalObject& b) {
  CausalObject r;
  r.dim = a.dim * b.dim;
  const Vec& ao = a.states.offset();
  const Vec& bo = b.states.offset();
  Mat dirs;
  for (const auto& da : a.states.directions()) dirs.push_back(kron(da, bo));
  for (const auto& db : b.states.directions()) dirs.push_back(kron(ao, db));
  for (const auto& da : a.states.directions())
    for (const auto& db : b.states.directions()) dirs.push_back(kron(da, db));
  r.states = AffineSubspace::make(kron(ao, bo), std::move(dirs));
  r.mu = a.mu * b.mu;
  r.theta = a.theta * b.theta;
  return r;
}

CausalObject parr(const CausalObject& a, const CausalObject& b) {
  return dual(tensor(dual(a), dual(b)));
}

CausalObject seq(const CausalObject& a, const CausalObject& b) {
  std::size_t da = a.dim, db = b.dim, n = da * db;
  Mat rows;
  Vec rhs;
  // No signalling from right to left: every effect on b yields the same
  // left marginal, i.e. state directions of b's dual pair to zero.
  AffineSubspace bdual = b.states.annihilator_one();
  for (const auto& beta : bdual.directions()) {
    for (std::size_t i = 0; i < da; ++i) {
      Vec row = zeros(n);
      for (std::size_t j = 0; j < db; ++j) row[i * db + j] = beta[j];
      rows.push_back(std::move(row));
      rhs.push_back(Rat(0));
    }
  }
  // ... and that common marginal is a state of a.
  Vec crhs;
  Mat cons = a.states.constraint_rows(&crhs);
  for (std::size_t k = 0; k < cons.size(); ++k) {
    Vec row = zeros(n);
    for (std::size_t i = 0; i < da; ++i) {
      Rat c = cons[k][i] * b.theta;
      if (c != 0)
        for (std::size_t j = 0; j < db; ++j) row[i * db + j] = c;
    }
    rows.push_back(std::move(row));
    rhs.push_back(crhs[k]);
  }
  CausalObject r;
  r.dim = n;
  r.states = AffineSubspace::solve(rows, rhs, n);
  r.mu = a.mu * b.mu;
  r.theta = a.theta * b.theta;
  if (r.states.is_empty()) throw ValidationError("sequencing produced an empty state set");
  return r;
}

CausalObject seq_after(const CausalObject& a, const CausalObject& b) {
  std::size_t da = a.dim, db = b.dim, n = da * db;
  Mat rows;
  Vec rhs;
  AffineSubspace adual = a.states.annihilator_one();
  for (const auto& alpha : adual.directions()) {
    for (std::size_t j = 0; j < db; ++j) {
      Vec row = zeros(n);
      for (std::size_t i = 0; i < da; ++i) row[i * db + j] = alpha[i];
      rows.push_back(std::move(row));
      rhs.push_back(Rat(0));
    }
  }
  Vec crhs;
  Mat cons = b.states.constraint_rows(&crhs);
  for (std::size_t k = 0; k < cons.size(); ++k) {
    Vec row = zeros(n);
    for (std::size_t j = 0; j < db; ++j) {
      Rat c = cons[k][j] * a.theta;
      if (c != 0)
        for (std::size_t i = 0; i < da; ++i) row[i * db + j] = c;
    }
    rows.push_back(std::move(row));
    rhs.push_back(crhs[k]);
  }
  CausalObject r;
  r.dim = n;
  r.states = AffineSubspace::solve(rows, rhs, n);
  r.mu = a.mu * b.mu;
  r.theta = a.theta * b.theta;
  if (r.states.is_empty()) throw ValidationError("sequencing produced an empty state set");
  return r;
}

CausalObject oplus(const CausalObject& a, const CausalObject& b) {
  if (a.theta != b.theta)
    throw NotCompatibleError("direct sum needs matching total-effect scalars");
  std::size_t da = a.dim, db = b.dim, n = da + db;
  auto embed_left = [&](const Vec& v) {
    Vec r = zeros(n);
    for (std::size_t i = 0; i < da; ++i) r[i] = v[i];
    return r;
  };
  auto embed_right = [&](const Vec& v) {
    Vec r = zeros(n);
    for (std::size_t j = 0; j < db; ++j) r[da + j] = v[j];
    return r;
  };
  Vec off = embed_left(a.states.offset());
  Mat dirs;
  for (const auto& d : a.states.directions()) dirs.push_back(embed_left(d));
  for (const auto& d : b.states.directions()) dirs.push_back(embed_right(d));
  Vec cross = embed_right(b.states.offset());
  for (std::size_t i = 0; i < da; ++i) cross[i] -= off[i];
  dirs.push_back(std::move(cross));
  CausalObject r;
  r.dim = n;
  r.states = AffineSubspace::make(std::move(off), std::move(dirs));
  r.mu = a.mu * b.mu / (a.mu + b.mu);
  r.theta = a.theta;
  return r;
}

CausalObject times(const CausalObject& a, const CausalObject& b) {
  if (a.mu != b.mu)
    throw NotCompatibleError("product needs matching uniform-state scalars");
  std::size_t da = a.dim, db = b.dim, n = da + db;
  Vec off = zeros(n);
  for (std::size_t i = 0; i < da; ++i) off[i] = a.states.offset()[i];
  for (std::size_t j = 0; j < db; ++j) off[da + j] = b.states.offset()[j];
  Mat dirs;
  for (const auto& d : a.states.directions()) {
    Vec r = zeros(n);
    for (std::size_t i = 0; i < da; ++i) r[i] = d[i];
    dirs.push_back(std::move(r));
  }
  for (const auto& d : b.states.directions()) {
    Vec r = zeros(n);
    for (std::size_t j = 0; j < db; ++j) r[da + j] = d[j];
    dirs.push_back(std::move(r));
  }
  CausalObject r;
  r.dim = n;
  r.states = AffineSubspace::make(std::move(off), std::move(dirs));
  r.mu = a.mu;
  r.theta = a.theta * b.theta / (a.theta + b.theta);
  return r;
}

namespace {

void require_set_compatible(const CausalObject& a, const CausalObject& b, const char* what) {
  if (a.dim != b.dim || a.mu != b.mu || a.theta != b.theta)
    throw NotCompatibleError(std::string(what) + " needs matching carriers and normalisation scalars");
}

}  // namespace

CausalObject union_object(const CausalObject& a, const CausalObject& b) {
  require_set_compatible(a, b, "union");
  CausalObject r = a;
  r.states = a.states.hull_with(b.states);
  return r;
}

CausalObject intersection_object(const CausalObject& a, const CausalObject& b) {
  require_set_compatible(a, b, "intersection");
  CausalObject r = a;
  r.states = a.states.intersect(b.states);
  if (r.states.is_empty()) throw ValidationError("intersection produced an empty state set");
  return r;
}

CausalObject bit_object() { return first_order(2); }

CausalObject bit_channel() {
  static const CausalObject cached = [] {
    CausalObject c = parr(dual(first_order(2)), first_order(2));
    if (c.classify() != LocalKind::Generic)
      throw ValidationError("bit channel failed its degeneracy check");
    return c;
  }();
  return cached;
}

AffineSubspace reindex_blocks(const AffineSubspace& s,
                              const std::vector<std::size_t>& dims,
                              const std::vector<int>& order) {
  std::size_t n = dims.size();
  if (order.size() != n) throw ValidationError("block order has the wrong length");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (s.ambient() != total) throw ValidationError("subspace does not fit the block layout");
  if (s.is_empty()) return AffineSubspace::empty_space(total);

  // Stride of input position k (blocks appear in `order` order).
  std::vector<std::size_t> istride(n, 1);
  for (std::size_t k = n; k-- > 1;)
    istride[k - 1] = istride[k] * dims[static_cast<std::size_t>(order[k])];
  // Input stride of each block index.
  std::vector<std::size_t> block_istride(n, 0);
  for (std::size_t k = 0; k < n; ++k)
    block_istride[static_cast<std::size_t>(order[k])] = istride[k];

  std::vector<std::size_t> src(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t s_idx = 0;
    for (std::size_t k = 0; k < n; ++k) s_idx += digit[k] * block_istride[k];
    src[t] = s_idx;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }

  auto remap = [&](const Vec& v) {
    Vec out(total);
    for (std::size_t t = 0; t < total; ++t) out[t] = v[src[t]];
    return out;
  };
  Mat dirs;
  for (const auto& d : s.directions()) dirs.push_back(remap(d));
  return AffineSubspace::make(remap(s.offset()), std::move(dirs));
}

Interpretation default_interpretation(const Formula& f) {
  Interpretation phi;
  for (const auto& leaf : leaf_order(f)) {
    if (leaf.unit) continue;
    auto it = phi.atoms.find(leaf.name);
    CausalObject obj = leaf.fo ? bit_object() : bit_channel();
    if (it == phi.atoms.end()) {
      phi.atoms.emplace(leaf.name, std::move(obj));
    } else if (!(it->second == obj)) {
      throw ValidationError("atom " + leaf.name + " is used both as first-order and regular");
    }
  }
  return phi;
}

std::size_t carrier_dim(const Formula& f, const Interpretation& phi) {
  switch (f.op) {
    case Op::Unit:
      return 1;
    case Op::Atom: {
      auto it = phi.atoms.find(f.name);
      if (it == phi.atoms.end())
        throw ValidationError("no interpretation for atom " + f.name);
      return it->second.dim;
    }
    default:
      return checked_product(carrier_dim(f.children[0], phi),
                             carrier_dim(f.children[1], phi), phi.max_dim);
  }
}

CausalObject interpret(const Formula& f, const Interpretation& phi) {
  carrier_dim(f, phi);  // guards the total carrier up front
  std::function<CausalObject(const Formula&)> go = [&](const Formula& g) -> CausalObject {
    switch (g.op) {
      case Op::Unit:
        return unit_object();
      case Op::Atom: {
        const CausalObject& o = phi.atoms.at(g.name);
        if (g.fo) {
          if (!o.is_first_order())
            throw NotCompatibleError("first-order atom " + g.name +
                                     " must be interpreted by a first-order object");
        } else if (o.is_first_order() || o.is_first_order_dual()) {
          throw NotCompatibleError("regular atom " + g.name +
                                   " must be interpreted by an object that is neither "
                                   "first-order nor first-order dual");
        }
        return g.neg ? dual(o) : o;
      }
      case Op::Tensor:
        return tensor(go(g.children[0]), go(g.children[1]));
      case Op::Seq:
        return seq(go(g.children[0]), go(g.children[1]));
      case Op::Par:
        return parr(go(g.children[0]), go(g.children[1]));
    }
    throw ValidationError("malformed formula");
  };
  return go(f);
}

Vec contraction_effect(const Formula& f, const Interpretation& phi) {
  if (!is_balanced(f)) throw ValidationError("contraction needs a balanced formula");
  std::vector<Leaf> leaves = leaf_order(f);
  std::size_t nl = leaves.size();
  std::vector<std::size_t> dims(nl, 1);
  for (std::size_t i = 0; i < nl; ++i) {
    if (leaves[i].unit) continue;
    auto it = phi.atoms.find(leaves[i].name);
    if (it == phi.atoms.end())
      throw ValidationError("no interpretation for atom " + leaves[i].name);
    dims[i] = it->second.dim;
  }
  std::size_t total = 1;
  for (auto d : dims) total = checked_product(total, d, phi.max_dim);

  std::vector<std::size_t> stride(nl, 1);
  for (std::size_t i = nl; i-- > 1;) stride[i - 1] = stride[i] * dims[i];

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [name, pq] : atom_pairs(f))
    pairs.emplace_back(static_cast<std::size_t>(pq.first), static_cast<std::size_t>(pq.second));

  Vec eps(total, Rat(0));
  for (std::size_t t = 0; t < total; ++t) {
    bool hit = true;
    for (const auto& [p, q] : pairs) {
      if ((t / stride[p]) % dims[p] != (t / stride[q]) % dims[q]) {
        hit = false;
        break;
      }
    }
    if (hit) eps[t] = 1;
  }
  return eps;
}

namespace {

void flatten_par(const Formula& f, std::vector<const Formula*>& out) {
  if (f.op == Op::Par) {
    flatten_par(f.children[0], out);
    flatten_par(f.children[1], out);
  } else {
    out.push_back(&f);
  }
}

Formula par_fold(const std::vector<const Formula*>& blocks, std::size_t from) {
  Formula g = *blocks.back();
  for (std::size_t k = blocks.size() - 1; k-- > from;) g = Formula::par(*blocks[k], g);
  return g;
}

// Membership of one affine vector and a family of direction vectors in the
// state set of the interpreted par chain blocks[from..]. Oversized carriers
// are handled by peeling the leading block: applying each effect of its dual
// sends the affine vector to an affine requirement on the rest (for the dual's
// offset) and to direction requirements (for the dual's state directions).
bool check_membership(const std::vector<const Formula*>& blocks, std::size_t from,
                      const Vec& affine, const Mat& lin, const Interpretation& phi,
                      const ConsistencyOptions& opts) {
  std::size_t total = 1;
  for (std::size_t k = from; k < blocks.size(); ++k)
    total = checked_product(total, carrier_dim(*blocks[k], phi), phi.max_dim);

  if (total <= opts.dense_limit || from + 1 == blocks.size()) {
    if (total > opts.dense_limit)
      throw GuardError("par block too large for dense interpretation; raise the dense limit");
    CausalObject obj = interpret(par_fold(blocks, from), phi);
    if (!obj.states.contains(affine)) return false;
    for (const auto& l : lin)
      if (!obj.states.direction_in_span(l)) return false;
    return true;
  }

  const Formula& head = *blocks[from];
  std::size_t d0 = carrier_dim(head, phi);
  if (d0 > opts.dense_limit)
    throw GuardError("par block too large for dense interpretation; raise the dense limit");
  CausalObject headDual = interpret(negate(head), phi);
  std::size_t rest = total / d0;

  auto apply = [&](const Vec& pi, const Vec& v) {
    Vec out = zeros(rest);
    for (std::size_t i = 0; i < d0; ++i) {
      if (pi[i] == 0) continue;
      const Rat& c = pi[i];
      std::size_t base = i * rest;
      for (std::size_t j = 0; j < rest; ++j) out[j] += c * v[base + j];
    }
    return out;
  };

  Vec affine2 = apply(headDual.states.offset(), affine);
  Mat basis;
  std::vector<int> pivots;
  for (const auto& delta : headDual.states.directions())
    rref_insert(basis, pivots, apply(delta, affine));
  for (const auto& l : lin) {
    rref_insert(basis, pivots, apply(headDual.states.offset(), l));
    for (const auto& delta : headDual.states.directions())
      rref_insert(basis, pivots, apply(delta, l));
  }
  return check_membership(blocks, from + 1, affine2, basis, phi, opts);
}

}  // namespace

bool consistent(const Formula& f, const Interpretation& phi, const ConsistencyOptions& opts) {
  Vec eps = contraction_effect(f, phi);
  std::vector<const Formula*> blocks;
  flatten_par(f, blocks);
  return check_membership(blocks, 0, eps, Mat{}, phi, opts);
}

std::vector<CausalObject> default_gamma(const Dag& g) {
  std::vector<CausalObject> gamma;
  gamma.reserve(g.names.size());
  for (LocalKind k : g.kinds) {
    switch (k) {
      case LocalKind::Generic: gamma.push_back(bit_channel()); break;
      case LocalKind::FirstOrder: gamma.push_back(bit_object()); break;
      case LocalKind::FirstOrderDual: gamma.push_back(dual(bit_object())); break;
      case LocalKind::UnitObj: gamma.push_back(unit_object()); break;
    }
  }
  return gamma;
}

namespace {

CausalObject parr_fold_objects(const std::vector<CausalObject>& gamma, const std::vector<int>& idx) {
  if (idx.empty()) return unit_object();
  CausalObject r = gamma[static_cast<std::size_t>(idx[0])];
  for (std::size_t k = 1; k < idx.size(); ++k)
    r = parr(r, gamma[static_cast<std::size_t>(idx[k])]);
  return r;
}

// Contraction of one generator choice per vertex over the bit-wired graph:
// sum over edge bit assignments of the tensor of per-vertex slices.
Vec contract_graph_state(const Dag& g, const std::vector<std::size_t>& dims,
                         const std::vector<std::vector<std::size_t>>& in_edges,
                         const std::vector<std::vector<std::size_t>>& out_edges,
                         const std::vector<const Vec*>& choice) {
  std::size_t n = g.names.size();
  std::size_t m = g.edges.size();
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  Vec out = zeros(total);
  std::vector<Vec> slice(n);
  for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
    bool zero = false;
    for (std::size_t v = 0; v < n && !zero; ++v) {
      std::size_t ports = in_edges[v].size() + out_edges[v].size();
      std::size_t fixed = 0;
      for (auto e : in_edges[v]) fixed = fixed * 2 + ((bits >> e) & 1);
      for (auto e : out_edges[v]) fixed = fixed * 2 + ((bits >> e) & 1);
      Vec s(dims[v]);
      bool all0 = true;
      for (std::size_t gma = 0; gma < dims[v]; ++gma) {
        s[gma] = (*choice[v])[(gma << ports) + fixed];
        if (s[gma] != 0) all0 = false;
      }
      if (all0) zero = true;
      slice[v] = std::move(s);
    }
    if (zero) continue;
    Vec term = slice[0];
    for (std::size_t v = 1; v < n; ++v) term = kron(term, slice[v]);
    for (std::size_t t = 0; t < total; ++t) out[t] += term[t];
  }
  return out;
}

}  // namespace

CausalObject graph_type(const Dag& g, const std::vector<CausalObject>& gamma,
                        GraphTypeMethod m, std::size_t max_dim) {
  g.validate();
  if (gamma.size() != g.names.size())
    throw ValidationError("vertex object list does not match the graph");
  std::size_t n = g.names.size();
  for (std::size_t v = 0; v < n; ++v)
    if (gamma[v].classify() != g.kinds[v])
      throw NotCompatibleError("object at vertex " + g.names[v] + " does not match its kind");
  if (n == 0) return unit_object();

  std::vector<std::size_t> dims(n);
  std::size_t total = 1;
  Rat mu(1), theta(1);
  for (std::size_t v = 0; v < n; ++v) {
    dims[v] = gamma[v].dim;
    total = checked_product(total, dims[v], max_dim);
    mu *= gamma[v].mu;
    theta *= gamma[v].theta;
  }

  CausalObject result;
  result.dim = total;
  result.mu = mu;
  result.theta = theta;

  switch (m) {
    case GraphTypeMethod::Signalling: {
      bool first = true;
      AffineSubspace acc;
      for (const auto& U : down_closed_subsets(g)) {
        std::vector<char> inU(n, 0);
        for (int v : U) inU[static_cast<std::size_t>(v)] = 1;
        std::vector<int> comp;
        for (std::size_t v = 0; v < n; ++v)
          if (!inU[v]) comp.push_back(static_cast<int>(v));
        CausalObject term;
        std::vector<int> order;
        if (U.empty()) {
          term = parr_fold_objects(gamma, comp);
          order = comp;
        } else {
          term = seq(parr_fold_objects(gamma, U), parr_fold_objects(gamma, comp));
          order = U;
          order.insert(order.end(), comp.begin(), comp.end());
        }
        AffineSubspace st = reindex_blocks(term.states, dims, order);
        acc = first ? st : acc.intersect(st);
        first = false;
      }
      result.states = acc;
      break;
    }
    case GraphTypeMethod::Ordered: {
      bool first = true;
      AffineSubspace acc;
      for (const auto& sort : topological_sorts(g)) {
        CausalObject term = gamma[static_cast<std::size_t>(sort[0])];
        for (std::size_t k = 1; k < sort.size(); ++k)
          term = seq(term, gamma[static_cast<std::size_t>(sort[k])]);
        AffineSubspace st = reindex_blocks(term.states, dims, sort);
        acc = first ? st : acc.intersect(st);
        first = false;
      }
      result.states = acc;
      break;
    }
    case GraphTypeMethod::Local2: {
      std::size_t me = g.edges.size();
      if (me >= 24) throw GuardError("too many edges for the bit-wired construction");
      std::vector<std::vector<std::size_t>> in_edges(n), out_edges(n);
      for (std::size_t e = 0; e < me; ++e) {
        out_edges[static_cast<std::size_t>(g.edges[e].first)].push_back(e);
        in_edges[static_cast<std::size_t>(g.edges[e].second)].push_back(e);
      }
      CausalObject bit = bit_object();
      CausalObject bitdual = dual(bit);
      // Generators of each vertex component: the offset first, then the
      // state directions.
      std::vector<Mat> gens(n);
      for (std::size_t v = 0; v < n; ++v) {
        CausalObject comp = gamma[v];
        for (std::size_t k = 0; k < in_edges[v].size(); ++k) comp = parr(comp, bitdual);
        for (std::size_t k = 0; k < out_edges[v].size(); ++k) comp = parr(comp, bit);
        gens[v].push_back(comp.states.offset());
        for (const auto& d : comp.states.directions()) gens[v].push_back(d);
      }
      Vec hull_offset;
      Mat basis;
      std::vector<int> pivots;
      std::vector<std::size_t> choice_idx(n, 0);
      std::vector<const Vec*> choice(n);
      for (;;) {
        bool all_offsets = true;
        for (std::size_t v = 0; v < n; ++v) {
          choice[v] = &gens[v][choice_idx[v]];
          if (choice_idx[v] != 0) all_offsets = false;
        }
        Vec img = contract_graph_state(g, dims, in_edges, out_edges, choice);
        if (all_offsets)
          hull_offset = std::move(img);
        else
          rref_insert(basis, pivots, std::move(img));
        std::size_t k = n;
        bool done = false;
        for (;;) {
          if (k == 0) {
            done = true;
            break;
          }
          --k;
          if (++choice_idx[k] < gens[k].size()) break;
          choice_idx[k] = 0;
        }
        if (done) break;
      }
      result.states = AffineSubspace::make(std::move(hull_offset), std::move(basis));
      break;
    }
  }

  result.verify_flat();
  return result;
}

Json subspace_to_json(const AffineSubspace& s) {
  Json j;
  j["ambient"] = s.ambient();
  j["empty"] = s.is_empty();
  if (!s.is_empty()) {
    Json off = Json::array();
    for (const auto& x : s.offset()) off.push_back(rat_to_string(x));
    j["offset"] = std::move(off);
    Json dirs = Json::array();
    for (const auto& d : s.directions()) {
      Json row = Json::array();
      for (const auto& x : d) row.push_back(rat_to_string(x));
      dirs.push_back(std::move(row));
    }
    j["directions"] = std::move(dirs);
  }
  return j;
}

AffineSubspace subspace_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("ambient"))
    throw ValidationError("subspace json needs an ambient dimension");
  std::size_t ambient = j.at("ambient").get<std::size_t>();
  if (j.value("empty", false)) return AffineSubspace::empty_space(ambient);
  auto read_vec = [&](const Json& a) {
    Vec v;
    for (const auto& x : a) v.push_back(rat_from_string(x.get<std::string>()));
    if (v.size() != ambient) throw ValidationError("subspace vector has the wrong length");
    return v;
  };
  Vec off = read_vec(j.at("offset"));
  Mat dirs;
  if (j.contains("directions"))
    for (const auto& d : j.at("directions")) dirs.push_back(read_vec(d));
  return AffineSubspace::make(std::move(off), std::move(dirs));
}

Json object_to_json(const CausalObject& o) {
  Json j;
  j["dim"] = o.dim;
  j["mu"] = rat_to_string(o.mu);
  j["theta"] = rat_to_string(o.theta);
  j["kind"] = local_kind_name(o.classify());
  j["states"] = subspace_to_json(o.states);
  return j;
}

CausalObject object_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("mu") ||
      !j.contains("theta") || !j.contains("states"))
    throw ValidationError("object json needs dim, mu, theta and states");
  CausalObject o;
  o.dim = j.at("dim").get<std::size_t>();
  o.mu = rat_from_string(j.at("mu").get<std::string>());
  o.theta = rat_from_string(j.at("theta").get<std::string>());
  o.states = subspace_from_json(j.at("states"));
  o.verify_flat();
  return o;
}

}  // namespace causalnet
