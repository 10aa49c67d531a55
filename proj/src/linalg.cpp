#include "causalnet/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace causalnet {

std::string rat_to_string(const Rat& r) {
  // two-argument construction does not canonicalize, so normalize a copy
  Rat c = r;
  c.canonicalize();
  return c.get_str();
}

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

Vec zeros(std::size_t n) { return Vec(n, Rat(0)); }

Vec ones(std::size_t n) { return Vec(n, Rat(1)); }

bool is_zero_vec(const Vec& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

Rat dot(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Rat acc(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
  return acc;
}

Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size(), Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) out[i * b.size() + j] = a[i] * b[j];
  }
  return out;
}

void axpy(Vec& y, const Rat& c, const Vec& x) {
  assert(y.size() == x.size());
  if (c == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y[i] += c * x[i];
}

Vec scaled(const Vec& v, const Rat& c) {
  Vec out(v.size(), Rat(0));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out[i] = c * v[i];
  return out;
}

std::vector<int> rref(Mat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const std::size_t ncols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    if (m[row][col] != 1) {
      Rat inv = Rat(1) / m[row][col];
      for (std::size_t j = col; j < ncols; ++j)
        if (m[row][j] != 0) m[row][j] *= inv;
    }
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (std::size_t j = col; j < ncols; ++j)
        if (m[row][j] != 0) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  m.resize(row);
  return pivots;
}

bool reduce_against(Vec& v, const Mat& basis, const std::vector<int>& pivots) {
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Rat& c = v[static_cast<std::size_t>(pivots[r])];
    if (c != 0) {
      Rat f = c;  // pivot entries are 1
      axpy(v, -f, basis[r]);
    }
  }
  return is_zero_vec(v);
}

Mat nullspace(Mat rows, std::size_t nvars) {
  std::vector<int> pivots = rref(rows);
  std::vector<bool> is_pivot(nvars, false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  Mat basis;
  for (std::size_t f = 0; f < nvars; ++f) {
    if (is_pivot[f]) continue;
    Vec v = zeros(nvars);
    v[f] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = -rows[r][f];
    basis.push_back(std::move(v));
  }
  rref(basis);
  return basis;
}

AffineSubspace AffineSubspace::empty_space(std::size_t ambient) {
  AffineSubspace s;
  s.ambient_ = ambient;
  s.empty_ = true;
  return s;
}

AffineSubspace AffineSubspace::full_space(std::size_t ambient) {
  Mat id(ambient, zeros(ambient));
  for (std::size_t i = 0; i < ambient; ++i) id[i][i] = 1;
  return make(zeros(ambient), std::move(id));
}

AffineSubspace AffineSubspace::point(Vec offset) {
  return make(std::move(offset), Mat{});
}

AffineSubspace AffineSubspace::make(Vec offset, Mat directions) {
  AffineSubspace s;
  s.ambient_ = offset.size();
  s.empty_ = false;
  s.offset_ = std::move(offset);
  s.dirs_ = std::move(directions);
  s.canonicalize();
  return s;
}

void AffineSubspace::canonicalize() {
  pivots_ = rref(dirs_);
  for (std::size_t r = 0; r < dirs_.size(); ++r) {
    const Rat& c = offset_[static_cast<std::size_t>(pivots_[r])];
    if (c != 0) {
      Rat f = c;
      axpy(offset_, -f, dirs_[r]);
    }
  }
}

AffineSubspace AffineSubspace::solve(const Mat& lhs, const Vec& rhs,
                                     std::size_t nvars) {
  assert(lhs.size() == rhs.size());
  Mat aug;
  aug.reserve(lhs.size());
  for (std::size_t r = 0; r < lhs.size(); ++r) {
    Vec row = lhs[r];
    assert(row.size() == nvars);
    row.push_back(rhs[r]);
    aug.push_back(std::move(row));
  }
  std::vector<int> pivots = rref(aug);
  for (std::size_t r = 0; r < aug.size(); ++r)
    if (pivots[r] == static_cast<int>(nvars))
      return empty_space(nvars);  // row 0 = 1: inconsistent
  Vec particular = zeros(nvars);
  for (std::size_t r = 0; r < aug.size(); ++r)
    particular[static_cast<std::size_t>(pivots[r])] = aug[r][nvars];
  Mat hom;
  hom.reserve(aug.size());
  for (Vec& row : aug) {
    row.pop_back();
    hom.push_back(std::move(row));
  }
  return make(std::move(particular), nullspace(std::move(hom), nvars));
}

bool AffineSubspace::contains(const Vec& v) const {
  assert(v.size() == ambient_);
  if (empty_) return false;
  Vec d = v;
  for (std::size_t i = 0; i < ambient_; ++i) d[i] -= offset_[i];
  return reduce_against(d, dirs_, pivots_);
}

bool AffineSubspace::direction_in_span(Vec v) const {
  assert(v.size() == ambient_);
  if (empty_) return false;
  return reduce_against(v, dirs_, pivots_);
}

bool AffineSubspace::subset_of(const AffineSubspace& other) const {
  assert(ambient_ == other.ambient_);
  if (empty_) return true;
  if (other.empty_) return false;
  if (!other.contains(offset_)) return false;
  for (const Vec& d : dirs_)
    if (!other.direction_in_span(d)) return false;
  return true;
}

Mat AffineSubspace::constraint_rows(Vec* rhs_out) const {
  assert(!empty_);
  Mat rows = nullspace(dirs_, ambient_);
  if (rhs_out) {
    rhs_out->clear();
    rhs_out->reserve(rows.size());
    for (const Vec& c : rows) rhs_out->push_back(dot(c, offset_));
  }
  return rows;
}

AffineSubspace AffineSubspace::intersect(const AffineSubspace& other) const {
  assert(ambient_ == other.ambient_);
  if (empty_ || other.empty_) return empty_space(ambient_);
  Vec rhs;
  Mat cons = other.constraint_rows(&rhs);
  // x = offset + D^T s; constraints become (C D^T) s = rhs - C offset.
  Mat lhs;
  Vec b;
  lhs.reserve(cons.size());
  b.reserve(cons.size());
  for (std::size_t r = 0; r < cons.size(); ++r) {
    Vec row(dirs_.size(), Rat(0));
    for (std::size_t i = 0; i < dirs_.size(); ++i) row[i] = dot(cons[r], dirs_[i]);
    lhs.push_back(std::move(row));
    b.push_back(rhs[r] - dot(cons[r], offset_));
  }
  AffineSubspace sol = solve(lhs, b, dirs_.size());
  if (sol.is_empty()) return empty_space(ambient_);
  Vec off = offset_;
  for (std::size_t i = 0; i < dirs_.size(); ++i) axpy(off, sol.offset()[i], dirs_[i]);
  Mat newdirs;
  newdirs.reserve(sol.directions().size());
  for (const Vec& t : sol.directions()) {
    Vec d = zeros(ambient_);
    for (std::size_t i = 0; i < dirs_.size(); ++i) axpy(d, t[i], dirs_[i]);
    newdirs.push_back(std::move(d));
  }
  return make(std::move(off), std::move(newdirs));
}

AffineSubspace AffineSubspace::hull_with(const AffineSubspace& other) const {
  assert(ambient_ == other.ambient_);
  if (empty_) return other;
  if (other.empty_) return *this;
  Mat dirs = dirs_;
  dirs.insert(dirs.end(), other.dirs_.begin(), other.dirs_.end());
  Vec diff = other.offset_;
  for (std::size_t i = 0; i < ambient_; ++i) diff[i] -= offset_[i];
  dirs.push_back(std::move(diff));
  return make(offset_, std::move(dirs));
}

AffineSubspace AffineSubspace::annihilator_one() const {
  if (empty_) return full_space(ambient_);
  Mat lhs = dirs_;
  Vec rhs = zeros(dirs_.size());
  lhs.push_back(offset_);
  rhs.push_back(Rat(1));
  return solve(lhs, rhs, ambient_);
}

bool AffineSubspace::operator==(const AffineSubspace& other) const {
  if (ambient_ != other.ambient_ || empty_ != other.empty_) return false;
  if (empty_) return true;
  return offset_ == other.offset_ && dirs_ == other.dirs_;
}

std::optional<Vec> witness_in_difference(const AffineSubspace& a,
                                         const AffineSubspace& b) {
  assert(a.ambient() == b.ambient());
  if (a.is_empty()) return std::nullopt;
  if (b.is_empty()) return a.offset();
  if (!b.contains(a.offset())) return a.offset();
  for (const Vec& d : a.directions()) {
    Vec p = a.offset();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += d[i];
    if (!b.contains(p)) return p;
  }
  return std::nullopt;
}

}  // namespace causalnet
