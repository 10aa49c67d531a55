#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace causalnet {

// Exact rational scalar. All verdict-relevant arithmetic in this project is
// exact; no floating point anywhere.
using Rat = mpq_class;
using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;  // dense, row major

std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s);  // throws std::invalid_argument

Vec zeros(std::size_t n);
Vec ones(std::size_t n);
bool is_zero_vec(const Vec& v);
Rat dot(const Vec& a, const Vec& b);
Vec kron(const Vec& a, const Vec& b);   // row-major Kronecker product
void axpy(Vec& y, const Rat& c, const Vec& x);  // y += c * x
Vec scaled(const Vec& v, const Rat& c);

// In-place reduced row echelon form over Q: pivots are the leftmost nonzero
// entry of each row, normalized to 1, with the pivot column cleared above and
// below; rows sorted by pivot column; zero rows dropped. Returns the pivot
// column of each remaining row (strictly increasing).
std::vector<int> rref(Mat& m);

// Reduces v in place against an RREF basis. Returns true iff v reduced to the
// zero vector (v was in the row span).
bool reduce_against(Vec& v, const Mat& basis, const std::vector<int>& pivots);

// RREF basis of the solution space of rows . x = 0 in Q^nvars.
Mat nullspace(Mat rows, std::size_t nvars);

// An affine subspace of Q^n in canonical form: the distinguished empty space,
// or offset + span(directions) with directions in RREF and the offset cleared
// at every pivot column. The canonical form is unique, so operator== decides
// extensional equality of subspaces.
class AffineSubspace {
 public:
  AffineSubspace() = default;

  static AffineSubspace empty_space(std::size_t ambient);
  static AffineSubspace full_space(std::size_t ambient);
  static AffineSubspace point(Vec offset);
  static AffineSubspace make(Vec offset, Mat directions);
  // Solution set of lhs . x = rhs (possibly empty).
  static AffineSubspace solve(const Mat& lhs, const Vec& rhs, std::size_t nvars);

  std::size_t ambient() const { return ambient_; }
  bool is_empty() const { return empty_; }
  // affine dimension; -1 for the empty space
  long affine_dim() const { return empty_ ? -1 : static_cast<long>(dirs_.size()); }
  const Vec& offset() const { return offset_; }
  const Mat& directions() const { return dirs_; }
  const std::vector<int>& pivots() const { return pivots_; }

  bool contains(const Vec& v) const;
  bool direction_in_span(Vec v) const;
  bool subset_of(const AffineSubspace& other) const;
  AffineSubspace intersect(const AffineSubspace& other) const;
  // Affine hull of the union.
  AffineSubspace hull_with(const AffineSubspace& other) const;
  // { pi : pi . x = 1 for every x in the subspace }. Full space when empty.
  AffineSubspace annihilator_one() const;
  // Rows c (with rhs c . offset) such that x in S  <=>  C x = rhs. The rows
  // span the orthogonal complement of the direction span.
  Mat constraint_rows(Vec* rhs_out = nullptr) const;

  bool operator==(const AffineSubspace& other) const;

 private:
  std::size_t ambient_ = 0;
  bool empty_ = true;
  Vec offset_;
  Mat dirs_;
  std::vector<int> pivots_;

  void canonicalize();
};

// A point of `a` outside `b`, or nullopt when a is a subset of b.
std::optional<Vec> witness_in_difference(const AffineSubspace& a,
                                         const AffineSubspace& b);

}  // namespace causalnet
