#include <random>

#include "causalnet/linalg.hpp"
#include "doctest.h"

using namespace causalnet;

namespace {

Vec vec(std::initializer_list<long> xs) {
  Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Vec vec(std::initializer_list<Rat> xs) { return Vec(xs); }

Mat mat(std::initializer_list<std::initializer_list<long>> rows) {
  Mat m;
  for (const auto& r : rows) m.push_back(vec(r));
  return m;
}

}  // namespace

TEST_CASE("rational string round trip") {
  CHECK(rat_to_string(Rat(3, 7)) == "3/7");
  CHECK(rat_to_string(Rat(-3, 7)) == "-3/7");
  CHECK(rat_to_string(Rat(4, 2)) == "2");
  CHECK(rat_to_string(Rat(0)) == "0");
  CHECK(rat_from_string("3/7") == Rat(3, 7));
  CHECK(rat_from_string("-12/8") == Rat(-3, 2));
  CHECK(rat_from_string("5") == Rat(5));
  CHECK_THROWS_AS(rat_from_string("three"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string(""), std::invalid_argument);
}

TEST_CASE("vector helpers") {
  CHECK(zeros(3) == vec({0, 0, 0}));
  CHECK(ones(2) == vec({1, 1}));
  CHECK(is_zero_vec(zeros(4)));
  CHECK_FALSE(is_zero_vec(vec({0, 1})));
  CHECK(dot(vec({1, 2, 3}), vec({4, 5, 6})) == Rat(32));

  // Kronecker product is row major: the left factor indexes the outer blocks.
  CHECK(kron(vec({1, 2}), vec({3, 4})) == vec({3, 4, 6, 8}));
  CHECK(kron(vec({2}), vec({5, 7})) == vec({10, 14}));

  Vec y = vec({1, 1});
  axpy(y, Rat(2), vec({3, 4}));
  CHECK(y == vec({7, 9}));
  CHECK(scaled(vec({1, -2}), Rat(1, 2)) == vec({Rat(1, 2), Rat(-1)}));
}

TEST_CASE("rref canonical form") {
  Mat m = mat({{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
  auto piv = rref(m);
  CHECK(piv == std::vector<int>{0, 2});
  CHECK(m == mat({{1, 2, 0}, {0, 0, 1}}));

  // idempotent
  Mat m2 = m;
  auto piv2 = rref(m2);
  CHECK(m2 == m);
  CHECK(piv2 == piv);

  Mat z = mat({{0, 0}, {0, 0}});
  CHECK(rref(z).empty());
  CHECK(z.empty());

  // pivot normalisation and clearing above
  Mat n = mat({{0, 2, 4}, {3, 3, 3}});
  auto pn = rref(n);
  CHECK(pn == std::vector<int>{0, 1});
  CHECK(n == mat({{1, 0, -1}, {0, 1, 2}}));
}

TEST_CASE("reduce_against detects span membership") {
  Mat basis = mat({{1, 0, 1}, {0, 1, 2}});
  auto piv = rref(basis);
  Vec in = vec({2, 3, 8});  // 2*(1,0,1) + 3*(0,1,2)
  CHECK(reduce_against(in, basis, piv));
  CHECK(is_zero_vec(in));
  Vec out = vec({0, 0, 1});
  CHECK_FALSE(reduce_against(out, basis, piv));
}

TEST_CASE("nullspace") {
  // x + y + z = 0 has a 2-dimensional solution space.
  Mat rows = mat({{1, 1, 1}});
  Mat ns = nullspace(rows, 3);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(dot(vec({1, 1, 1}), v) == Rat(0));

  // independent constraints cut the dimension down once each
  CHECK(nullspace(mat({{1, 0, 0}, {0, 1, 0}}), 3).size() == 1);
  CHECK(nullspace(mat({{1, 0}, {0, 1}}), 2).empty());
  CHECK(nullspace(Mat{}, 2).size() == 2);
}

TEST_CASE("affine subspace basics") {
  auto full = AffineSubspace::full_space(3);
  auto empty = AffineSubspace::empty_space(3);
  auto pt = AffineSubspace::point(vec({1, 2, 3}));
  CHECK(full.affine_dim() == 3);
  CHECK(empty.affine_dim() == -1);
  CHECK(empty.is_empty());
  CHECK(pt.affine_dim() == 0);
  CHECK(pt.contains(vec({1, 2, 3})));
  CHECK_FALSE(pt.contains(vec({1, 2, 4})));
  CHECK(full.contains(vec({9, -4, 0})));
  CHECK_FALSE(empty.contains(zeros(3)));
}

TEST_CASE("make canonicalises: equality is extensional") {
  // same line through (1,0) and (0,1), presented two different ways
  auto a = AffineSubspace::make(vec({1, 0}), mat({{1, -1}}));
  auto b = AffineSubspace::make(vec({0, 1}), mat({{-2, 2}, {3, -3}}));
  CHECK(a == b);
  CHECK(a.affine_dim() == 1);
  // canonical offset is cleared at pivot columns
  for (std::size_t i = 0; i < a.directions().size(); ++i)
    CHECK(a.offset()[static_cast<std::size_t>(a.pivots()[i])] == Rat(0));
}

TEST_CASE("solve") {
  // x + y = 2, x - y = 0 -> unique point (1,1)
  auto s = AffineSubspace::solve(mat({{1, 1}, {1, -1}}), vec({2, 0}), 2);
  CHECK(s == AffineSubspace::point(vec({1, 1})));

  // inconsistent system -> empty
  auto e = AffineSubspace::solve(mat({{1, 1}, {1, 1}}), vec({0, 1}), 2);
  CHECK(e.is_empty());

  // underdetermined: x + y + z = 1 -> plane of dimension 2
  auto p = AffineSubspace::solve(mat({{1, 1, 1}}), vec({1}), 3);
  CHECK(p.affine_dim() == 2);
  CHECK(p.contains(vec({1, 0, 0})));
  CHECK(p.contains(AffineSubspace::point(vec({Rat(1, 3), Rat(1, 3), Rat(1, 3)})).offset()));
}

TEST_CASE("subset, intersect, hull") {
  auto plane = AffineSubspace::solve(mat({{1, 1, 1}}), vec({1}), 3);
  auto line = AffineSubspace::make(vec({1, 0, 0}), mat({{1, -1, 0}}));
  auto pt = AffineSubspace::point(vec({0, 1, 0}));

  CHECK(line.subset_of(plane));
  CHECK(pt.subset_of(line));
  CHECK(pt.subset_of(plane));
  CHECK_FALSE(plane.subset_of(line));
  CHECK(plane.subset_of(plane));
  CHECK(AffineSubspace::empty_space(3).subset_of(pt));
  CHECK_FALSE(pt.subset_of(AffineSubspace::empty_space(3)));

  // two planes intersect in a line
  auto plane2 = AffineSubspace::solve(mat({{1, 0, 0}}), vec({1}), 3);
  auto meet = plane.intersect(plane2);
  CHECK(meet.affine_dim() == 1);
  CHECK(meet.subset_of(plane));
  CHECK(meet.subset_of(plane2));
  CHECK(meet.contains(vec({1, 0, 0})));

  // parallel disjoint lines meet nowhere
  auto l1 = AffineSubspace::make(vec({0, 0}), mat({{1, 0}}));
  auto l2 = AffineSubspace::make(vec({0, 1}), mat({{1, 0}}));
  CHECK(l1.intersect(l2).is_empty());

  // hull of two points is the line through them
  auto h = AffineSubspace::point(vec({1, 0})).hull_with(AffineSubspace::point(vec({0, 1})));
  CHECK(h.affine_dim() == 1);
  CHECK(h.contains(vec({Rat(1, 2), Rat(1, 2)})));
  CHECK(h == AffineSubspace::make(vec({1, 0}), mat({{1, -1}})));

  // hull with the empty space changes nothing
  CHECK(l1.hull_with(AffineSubspace::empty_space(2)) == l1);
  CHECK(AffineSubspace::empty_space(2).hull_with(l1) == l1);
}

TEST_CASE("direction_in_span") {
  auto plane = AffineSubspace::solve(mat({{1, 1, 1}}), vec({1}), 3);
  CHECK(plane.direction_in_span(vec({1, -1, 0})));
  CHECK(plane.direction_in_span(zeros(3)));
  CHECK_FALSE(plane.direction_in_span(vec({1, 1, 1})));
}

TEST_CASE("annihilator_one") {
  // effects evaluating to 1 on the normalisation hyperplane: only the total
  auto hyper = AffineSubspace::solve(mat({{1, 1, 1}}), vec({1}), 3);
  CHECK(hyper.annihilator_one() == AffineSubspace::point(vec({1, 1, 1})));

  // a single point admits a full hyperplane of effects
  auto pt = AffineSubspace::point(vec({1, 0}));
  auto ann = pt.annihilator_one();
  CHECK(ann.affine_dim() == 1);
  CHECK(ann.contains(vec({1, 0})));
  CHECK(ann.contains(vec({1, 5})));

  // nothing pairs to 1 with a subspace through the origin
  auto through0 = AffineSubspace::make(zeros(2), mat({{1, 0}}));
  CHECK(through0.annihilator_one().is_empty());

  // every covector pairs to 1 with every point of the empty space
  CHECK(AffineSubspace::empty_space(2).annihilator_one().affine_dim() == 2);
}

TEST_CASE("constraint_rows recovers the subspace") {
  auto s = AffineSubspace::make(vec({1, 0, 0}), mat({{1, -1, 0}, {0, 1, -1}}));
  Vec rhs;
  Mat rows = s.constraint_rows(&rhs);
  CHECK(rows.size() == rhs.size());
  auto back = AffineSubspace::solve(rows, rhs, 3);
  CHECK(back == s);
  for (const auto& r : rows)
    for (const auto& d : s.directions()) CHECK(dot(r, d) == Rat(0));
}

TEST_CASE("witness_in_difference") {
  auto plane = AffineSubspace::solve(mat({{1, 1, 1}}), vec({1}), 3);
  auto line = AffineSubspace::make(vec({1, 0, 0}), mat({{1, -1, 0}}));
  CHECK_FALSE(witness_in_difference(line, plane).has_value());
  auto w = witness_in_difference(plane, line);
  REQUIRE(w.has_value());
  CHECK(plane.contains(*w));
  CHECK_FALSE(line.contains(*w));
}

TEST_CASE("double annihilator on random flat-style subspaces") {
  // subspaces of the affine hyperplane sum(x) = 1 never contain the origin,
  // so taking the annihilator twice returns them exactly
  std::mt19937_64 rng(7);
  auto small = [&]() { return Rat(static_cast<long>(rng() % 7) - 3); };
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = 2 + rng() % 7;
    Vec off(d);
    Rat sum(0);
    for (auto& x : off) {
      x = small();
      sum += x;
    }
    if (sum == 0) continue;
    for (auto& x : off) x /= sum;
    Mat dirs;
    std::size_t k = rng() % d;
    for (std::size_t i = 0; i < k; ++i) {
      Vec v(d);
      Rat vs(0);
      for (auto& x : v) {
        x = small();
        vs += x;
      }
      for (auto& x : v) x -= vs / static_cast<long>(d);
      dirs.push_back(v);
    }
    auto s = AffineSubspace::make(off, dirs);
    CHECK(s.annihilator_one().annihilator_one() == s);

    // contravariance: more states means fewer effects
    auto bigger = s.hull_with(AffineSubspace::point(off));  // == s
    CHECK(bigger == s);
    auto sub = AffineSubspace::point(s.offset());
    CHECK(sub.subset_of(s));
    CHECK(s.annihilator_one().subset_of(sub.annihilator_one()));
  }
}
