#pragma once

// Exact exponent calculus for the generalized Gross-Pitaevskii equation
//
//   i u_t + Δu = μ ||u|²-1|^{p-2} (|u|²-1) u,   |u| -> 1 at infinity,
//
// in dimension n = 1, 2. Everything that is rational in p is kept as an
// exact rational; the Strichartz threshold k_St is a quadratic surd.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace ggp {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "5", "7/2", "-3/4" exactly. Decimal input ("3.5", "1e-2") is
/// rationalized exactly; `was_decimal` reports that so callers can warn.
Rational parse_rational(std::string_view text, bool* was_decimal = nullptr);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// a + b·√r with rational a, b and a square-free positive integer r.
struct QuadraticSurd {
  Rational rational;
  Rational coefficient;
  Rational radicand;

  double value() const;
  /// Canonical text such as "2+√2" or "(5+√17)/2".
  std::string str() const;
};

/// Pulls square factors out of the radicand: √32/4 becomes √2.
QuadraticSurd simplify(QuadraticSurd s);

/// Exact sign of (value - q).
int compare(const QuadraticSurd& s, const Rational& q);

struct ProblemParams {
  int n = 1;
  Rational p{5};
  int mu = 1;
  /// 1 + k_St < p < 1 + k_m, decided exactly.
  bool in_range = false;

  double p_value() const { return to_double(p); }
};

/// Validates n ∈ {1,2}, p > 2, μ = ±1 and evaluates the range flag.
/// Throws std::invalid_argument otherwise.
ProblemParams make_params(int n, const Rational& p, int mu = 1);

struct ExponentSet {
  Rational k1;  // p - 1
  Rational k2;  // 2p - 1
  Rational km;  // mass-critical power 1 + 4/n
  QuadraticSurd kst;
  Rational s1;
  Rational s2;
  Rational s0;
  Rational alpha;  // weight exponent 2/(p-2) - n/2
  Rational q13;    // Lebesgue exponent n(p-2)/2
  bool in_range = false;
};

ExponentSet derive_exponents(const ProblemParams& params);

/// Admissible range (1 + k_St, 1 + k_m) for dimension n.
QuadraticSurd lower_range_bound(int n);
Rational upper_range_bound(int n);
std::string range_description(int n);

/// Reciprocal exponents (1/q, 1/r): x is spatial, y is temporal.
struct PairPoint {
  Rational x;
  Rational y;

  double x_value() const { return to_double(x); }
  double y_value() const { return to_double(y); }
  friend bool operator==(const PairPoint&, const PairPoint&) = default;
};

PairPoint operator+(const PairPoint& a, const PairPoint& b);
PairPoint operator-(const PairPoint& a, const PairPoint& b);
PairPoint operator*(const Rational& c, const PairPoint& a);

/// Scaling functional x + 2y/n.
Rational scaling_index(const PairPoint& point, int n);

struct PairSet {
  PairPoint p1;
  PairPoint p1bar;
  PairPoint p2;
  PairPoint p2bar;
  PairPoint p2p;
  PairPoint p2pbar;
};

/// Throws std::invalid_argument when p = 2 (or anything not > 2).
PairSet derive_pairs(const ProblemParams& params);

struct IdentityCheck {
  std::string name;
  /// Hard checks gate success; diagnostic checks only report residuals.
  bool hard = true;
  Rational residual;

  bool passed() const { return residual == 0; }
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  bool all_hard_pass() const;
  const IdentityCheck& find(std::string_view name) const;
};

IdentityReport verify_pair_identities(const PairSet& pairs, const ExponentSet& exps, int n);

enum class Triangle { T, TPrime, THat };

Triangle parse_triangle(std::string_view name);
std::string_view name_of(Triangle tri);

/// Vertices B, C, D, E, F, B', C', E', F' of the non-admissible Strichartz
/// region for dimension n.
struct TriangleVertices {
  PairPoint b, c, d, e, f;
  PairPoint bp, cp, ep, fp;
};

TriangleVertices triangle_vertices(int n);

/// T and T' are open except for the vertices B and B' respectively. T̂ is
/// open and additionally contains the open side ]CD[ when n ≠ 2. Queries
/// landing on a boundary are logged.
bool triangle_membership(const PairPoint& point, int n, Triangle tri);

}  // namespace ggp
