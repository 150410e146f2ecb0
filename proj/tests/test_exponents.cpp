#include "ggp/exponents.hpp"

#include <doctest.h>

#include <random>

using namespace ggp;

namespace {

// Pair points rebuilt from their defining relations rather than the closed
// forms: P1 has x = 1/(k1+1) and is critical for the k1 power
// (n x + 2y = 2/(k1-1)); P2' = ((k1-1)/(k2-1)) P1; P2 is P2' shifted by the
// Sobolev gap s2/n; every barred point adds (k1-1) P1.
struct OraclePairs {
  PairPoint p1, p1bar, p2, p2bar, p2p, p2pbar;
};

OraclePairs oracle_pairs(int n, const Rational& p) {
  const Rational k1 = p - 1, k2 = 2 * p - 1, nn(n);
  OraclePairs o;
  o.p1.x = 1 / (k1 + 1);
  o.p1.y = (2 / (k1 - 1) - nn * o.p1.x) / 2;
  const Rational s2 = nn / 2 - 2 / (k2 - 1);
  o.p2p = ((k1 - 1) / (k2 - 1)) * o.p1;
  o.p2 = {o.p2p.x + s2 / nn, o.p2p.y};
  o.p1bar = o.p1 + (k1 - 1) * o.p1;
  o.p2bar = o.p2 + (k1 - 1) * o.p1;
  o.p2pbar = o.p2p + (k1 - 1) * o.p1;
  return o;
}

Rational random_in_range(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den(1, 997);
  const double lo = lower_range_bound(n).value(), hi = to_double(upper_range_bound(n));
  std::uniform_real_distribution<double> u(lo, hi);
  for (;;) {
    const int d = den(rng);
    const Rational p(static_cast<long long>(std::floor(u(rng) * d)), d);
    if (make_params(n, p).in_range) return p;
  }
}

}  // namespace

TEST_CASE("parse_rational accepts fractions, integers and decimals exactly") {
  bool decimal = true;
  CHECK(parse_rational("7/2", &decimal) == Rational(7, 2));
  CHECK_FALSE(decimal);
  CHECK(parse_rational(" 5 ") == Rational(5));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("3.25", &decimal) == Rational(13, 4));
  CHECK(decimal);
  CHECK(parse_rational("1e-2") == Rational(1, 100));
  CHECK(parse_rational("4.6") == Rational(23, 5));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("n=1, p=5 exponents") {
  const ExponentSet e = derive_exponents(make_params(1, Rational(5)));
  CHECK(e.k1 == 4);
  CHECK(e.k2 == 9);
  CHECK(e.km == 5);
  CHECK(e.s1 == Rational(3, 10));
  CHECK(e.s2 == Rational(1, 4));
  CHECK(e.s0 == Rational(3, 10));
  CHECK(e.alpha == Rational(1, 6));
  CHECK(e.q13 == Rational(3, 2));
  CHECK(e.kst.str() == "(3+√17)/2");
  CHECK(e.in_range);
}

TEST_CASE("s0 equals s1 in one dimension and s2 in two") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const ExponentSet e1 = derive_exponents(make_params(1, random_in_range(1, rng)));
    CHECK(e1.s0 == e1.s1);
    const ExponentSet e2 = derive_exponents(make_params(2, random_in_range(2, rng)));
    CHECK(e2.s0 == e2.s2);
    CHECK(e1.k1 < e1.k2);
    CHECK(compare(e1.kst, e1.k1) < 0);
    CHECK(e1.k1 < e1.km);
  }
}

TEST_CASE("k_St is the positive root of n k^2 - (n+2) k - 2") {
  for (int n : {1, 2}) {
    const QuadraticSurd k = derive_exponents(make_params(n, upper_range_bound(n) - Rational(1, 100))).kst;
    const Rational nn(n);
    // (a + b√r)² = a² + b² r + 2ab√r
    const Rational rational_part = nn * (k.rational * k.rational + k.coefficient * k.coefficient * k.radicand) -
                                   (nn + 2) * k.rational - 2;
    const Rational surd_part = nn * 2 * k.rational * k.coefficient - (nn + 2) * k.coefficient;
    CHECK(rational_part == 0);
    CHECK(surd_part == 0);
    CHECK(k.value() > 0);
  }
  CHECK(lower_range_bound(2).str() == "2+√2");
  CHECK(range_description(2) == "(2+√2, 4)");
  CHECK(range_description(1) == "((5+√17)/2, 6)");
}

TEST_CASE("range gate is decided exactly at the irrational endpoint") {
  // 2 + √2 = 3.41421356237...
  CHECK_FALSE(make_params(2, parse_rational("341421356237/100000000000")).in_range);
  CHECK(make_params(2, parse_rational("341421356238/100000000000")).in_range);
  CHECK_FALSE(make_params(2, Rational(4)).in_range);
  CHECK(make_params(2, Rational(399, 100)).in_range);
  CHECK_FALSE(make_params(1, Rational(6)).in_range);
  CHECK_FALSE(make_params(2, Rational(5)).in_range);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(make_params(3, Rational(5)), std::invalid_argument);
  CHECK_THROWS_AS(make_params(0, Rational(5)), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1, Rational(2)), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1, Rational(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1, Rational(5), 0), std::invalid_argument);
}

TEST_CASE("pair points match the relation-based oracle exactly") {
  std::mt19937_64 rng(3);
  for (int n : {1, 2}) {
    for (int i = 0; i < 100; ++i) {
      const Rational p = random_in_range(n, rng);
      const PairSet s = derive_pairs(make_params(n, p));
      const OraclePairs o = oracle_pairs(n, p);
      CHECK(s.p1 == o.p1);
      CHECK(s.p1bar == o.p1bar);
      CHECK(s.p2 == o.p2);
      CHECK(s.p2bar == o.p2bar);
      CHECK(s.p2p == o.p2p);
      CHECK(s.p2pbar == o.p2pbar);
    }
  }
}

TEST_CASE("n=1, p=5 pair points") {
  const PairSet s = derive_pairs(make_params(1, Rational(5)));
  CHECK(s.p1 == PairPoint{Rational(1, 5), Rational(7, 30)});
  CHECK(s.p1bar == PairPoint{Rational(4, 5), Rational(14, 15)});
  CHECK(s.p2 == PairPoint{Rational(13, 40), Rational(7, 80)});
  CHECK(s.p2p == PairPoint{Rational(3, 40), Rational(7, 80)});
  CHECK(scaling_index(s.p2, 1) == Rational(1, 2));
}

TEST_CASE("hard identities hold with zero residual for random in-range p") {
  std::mt19937_64 rng(5);
  for (int n : {1, 2}) {
    for (int i = 0; i < 100; ++i) {
      const ProblemParams params = make_params(n, random_in_range(n, rng));
      const IdentityReport r = verify_pair_identities(derive_pairs(params), derive_exponents(params), n);
      CHECK(r.all_hard_pass());
      for (const IdentityCheck& c : r.checks)
        if (c.hard) CHECK_MESSAGE(c.residual == 0, c.name);
    }
  }
}

TEST_CASE("literal line claims are reported as diagnostics, not failures") {
  const ProblemParams params = make_params(1, Rational(5));
  const IdentityReport r = verify_pair_identities(derive_pairs(params), derive_exponents(params), 1);
  const IdentityCheck& c = r.find("literal:P2'bar on x+2y/n=1/(n(p-1))");
  CHECK_FALSE(c.hard);
  CHECK_FALSE(c.passed());
  CHECK(r.all_hard_pass());
  CHECK_THROWS(r.find("no such check"));
}

TEST_CASE("triangle membership follows the open/closed conventions") {
  for (int n : {1, 2}) {
    const TriangleVertices v = triangle_vertices(n);
    CHECK(triangle_membership(v.b, n, Triangle::T));
    CHECK_FALSE(triangle_membership(v.e, n, Triangle::T));
    CHECK_FALSE(triangle_membership(v.f, n, Triangle::T));
    CHECK(triangle_membership(v.bp, n, Triangle::TPrime));
    CHECK_FALSE(triangle_membership(v.ep, n, Triangle::TPrime));
    CHECK_FALSE(triangle_membership(v.b, n, Triangle::THat));
    CHECK_FALSE(triangle_membership(v.c, n, Triangle::THat));
    CHECK_FALSE(triangle_membership(v.d, n, Triangle::THat));
    const PairPoint mid_cd = Rational(1, 2) * (v.c + v.d);
    CHECK(triangle_membership(mid_cd, n, Triangle::THat) == (n != 2));
    const PairPoint centroid = Rational(1, 3) * (v.b + v.c + v.d);
    CHECK(triangle_membership(centroid, n, Triangle::THat));
    CHECK(triangle_membership(centroid, n, Triangle::T));
  }
  const PairSet s = derive_pairs(make_params(1, Rational(5)));
  CHECK(triangle_membership(s.p1, 1, Triangle::THat));
  CHECK(triangle_membership(s.p1, 1, Triangle::T));
  CHECK(triangle_membership(s.p1bar, 1, Triangle::TPrime));
  CHECK_FALSE(triangle_membership(s.p1bar, 1, Triangle::T));
}

TEST_CASE("n=1 vertices use the special cases") {
  const TriangleVertices v = triangle_vertices(1);
  CHECK(v.c == PairPoint{Rational(0), Rational(1, 4)});
  CHECK(v.d == PairPoint{Rational(0), Rational(1, 2)});
  CHECK(v.e == PairPoint{Rational(0), Rational(1, 2)});
  CHECK(v.cp == PairPoint{Rational(1), Rational(3, 4)});
  CHECK(v.fp == PairPoint{Rational(1), Rational(1)});
  CHECK(parse_triangle("T'") == Triangle::TPrime);
  CHECK_THROWS(parse_triangle("Q"));
}
