#include "ggp/exponents.hpp"

#include <spdlog/spdlog.h>

#include <cctype>
#include <stdexcept>

namespace ggp {

namespace {

using boost::multiprecision::cpp_int;

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Rational pow10(int e) {
  cpp_int v = 1;
  for (int i = 0; i < (e < 0 ? -e : e); ++i) v *= 10;
  return e < 0 ? Rational(cpp_int(1), v) : Rational(v);
}

// Decimal or scientific notation, converted without going through double.
Rational parse_decimal(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';
  cpp_int digits = 0;
  int scale = 0;
  bool any = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) --scale;
      any = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E')
      throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    const std::string exponent(text.substr(pos + 1));
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(exponent, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    }
    if (used != exponent.size()) throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    scale += e;
  }
  Rational value = Rational(digits) * pow10(scale);
  return negative ? Rational(-value) : value;
}

cpp_int parse_integer(std::string_view text) {
  std::size_t pos = 0;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) pos = 1;
  if (pos == text.size()) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  for (std::size_t i = pos; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  return cpp_int(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text, bool* was_decimal) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (was_decimal) *was_decimal = false;
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(text.substr(0, slash));
    const cpp_int den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (text.find_first_of(".eE") != std::string_view::npos) {
    if (was_decimal) *was_decimal = true;
    return parse_decimal(text);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& r) { return r.str(); }

double to_double(const Rational& r) { return r.convert_to<double>(); }

double QuadraticSurd::value() const {
  return to_double(rational) + to_double(coefficient) * std::sqrt(to_double(radicand));
}

QuadraticSurd simplify(QuadraticSurd s) {
  if (s.radicand < 0) throw std::invalid_argument("negative radicand");
  if (denominator(s.radicand) != 1) {
    // √(a/b) = √(ab)/b
    const cpp_int b = denominator(s.radicand);
    s.coefficient /= Rational(b);
    s.radicand = Rational(numerator(s.radicand) * b);
  }
  cpp_int r = numerator(s.radicand);
  cpp_int outside = 1;
  for (cpp_int f = 2; f * f <= r; ++f) {
    while (r % (f * f) == 0) {
      r /= f * f;
      outside *= f;
    }
  }
  s.coefficient *= Rational(outside);
  s.radicand = Rational(r);
  if (r == 1) {
    s.rational += s.coefficient;
    s.coefficient = 0;
  }
  return s;
}

std::string QuadraticSurd::str() const {
  if (coefficient == 0 || radicand == 0) return to_string(rational);
  const cpp_int den = boost::multiprecision::lcm(denominator(rational), denominator(coefficient));
  const Rational a = rational * Rational(den);
  const Rational b = coefficient * Rational(den);
  std::string out;
  if (a != 0) out += to_string(a);
  if (b < 0) {
    out += "-";
  } else if (a != 0) {
    out += "+";
  }
  if (abs_r(b) != 1) out += to_string(abs_r(b));
  out += "√" + to_string(radicand);
  if (den != 1) out = "(" + out + ")/" + den.str();
  return out;
}

int compare(const QuadraticSurd& s, const Rational& q) {
  // sign(a + b√r - q): isolate the radical, then square where signs agree.
  const Rational lhs = q - s.rational;
  const Rational b = s.coefficient;
  const int sign_lhs = lhs > 0 ? 1 : (lhs < 0 ? -1 : 0);
  const int sign_rad = (b == 0 || s.radicand == 0) ? 0 : (b > 0 ? 1 : -1);
  // value - q = b√r - lhs
  if (sign_rad == 0) return -sign_lhs;
  if (sign_lhs == 0) return sign_rad;
  if (sign_rad != sign_lhs) return sign_rad;
  const Rational rad_sq = b * b * s.radicand;
  const Rational lhs_sq = lhs * lhs;
  if (rad_sq == lhs_sq) return 0;
  return (rad_sq > lhs_sq) == (sign_rad > 0) ? 1 : -1;
}

QuadraticSurd lower_range_bound(int n) {
  // 1 + k_St = 1 + (n + 2 + √(n² + 12n + 4)) / (2n)
  const Rational two_n(2 * n);
  return simplify({Rational(1) + Rational(n + 2) / two_n, Rational(1) / two_n, Rational(n * n + 12 * n + 4)});
}

Rational upper_range_bound(int n) { return Rational(2) + Rational(4, n); }

std::string range_description(int n) {
  return "(" + lower_range_bound(n).str() + ", " + to_string(upper_range_bound(n)) + ")";
}

ProblemParams make_params(int n, const Rational& p, int mu) {
  if (n != 1 && n != 2) throw std::invalid_argument("dimension n must be 1 or 2, got " + std::to_string(n));
  if (p <= 2) throw std::invalid_argument("power p must exceed 2, got " + to_string(p));
  if (mu != 1 && mu != -1) throw std::invalid_argument("mu must be +1 or -1, got " + std::to_string(mu));

  ProblemParams params;
  params.n = n;
  params.p = p;
  params.mu = mu;
  // p > 1 + k_St  <=>  2np - 3n - 2 > 0  and  (2np - 3n - 2)² > n² + 12n + 4
  const Rational isolated = Rational(2 * n) * p - Rational(3 * n + 2);
  const bool above = isolated > 0 && isolated * isolated > Rational(n * n + 12 * n + 4);
  params.in_range = above && p < upper_range_bound(n);
  return params;
}

ExponentSet derive_exponents(const ProblemParams& params) {
  if (params.n != 1 && params.n != 2) throw std::invalid_argument("dimension n must be 1 or 2");
  if (params.p <= 2) throw std::invalid_argument("power p must exceed 2");

  const Rational n(params.n);
  const Rational& p = params.p;
  ExponentSet e;
  e.k1 = p - 1;
  e.k2 = 2 * p - 1;
  e.km = 1 + Rational(4) / n;
  e.kst = simplify({(n + 2) / (2 * n), Rational(1) / (2 * n), n * n + 12 * n + 4});
  e.s1 = n / 2 - n / (e.k1 + 1);
  e.s2 = n / 2 - Rational(2) / (e.k2 - 1);
  e.s0 = e.s1 > e.s2 ? e.s1 : e.s2;
  e.alpha = Rational(2) / (p - 2) - n / 2;
  e.q13 = n * (p - 2) / 2;
  e.in_range = params.in_range;
  return e;
}

PairPoint operator+(const PairPoint& a, const PairPoint& b) { return {a.x + b.x, a.y + b.y}; }
PairPoint operator-(const PairPoint& a, const PairPoint& b) { return {a.x - b.x, a.y - b.y}; }
PairPoint operator*(const Rational& c, const PairPoint& a) { return {c * a.x, c * a.y}; }

Rational scaling_index(const PairPoint& point, int n) { return point.x + Rational(2) * point.y / Rational(n); }

PairSet derive_pairs(const ProblemParams& params) {
  if (params.p <= 2) throw std::invalid_argument("pair points need p > 2 (division by p - 2)");
  const Rational n(params.n);
  const Rational& p = params.p;
  const Rational ray = (2 - n) * p + 2 * n;  // common factor (2-n)p + 2n
  const Rational pp1 = p * (p - 1);

  PairSet s;
  s.p1 = {1 / p, ray / (2 * p * (p - 2))};
  s.p1bar = {(p - 1) / p, (p - 1) * ray / (2 * p * (p - 2))};
  s.p2 = {(n * p * p - 2 * p - 2 * n) / (2 * n * pp1), ray / (4 * pp1)};
  s.p2bar = {(3 * n * p * p - 2 * (3 * n + 1) * p + 2 * n) / (2 * n * pp1), (2 * p - 1) * ray / (4 * pp1)};
  s.p2p = {(p - 2) / (2 * pp1), ray / (4 * pp1)};
  s.p2pbar = {(p - 2) * (2 * p - 1) / (2 * pp1), (2 * p - 1) * ray / (4 * pp1)};
  return s;
}

bool IdentityReport::all_hard_pass() const {
  for (const auto& c : checks)
    if (c.hard && !c.passed()) return false;
  return true;
}

const IdentityCheck& IdentityReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no identity check named " + std::string(name));
}

IdentityReport verify_pair_identities(const PairSet& s, const ExponentSet& e, int n) {
  IdentityReport report;
  auto add = [&](std::string name, Rational residual, bool hard = true) {
    report.checks.push_back({std::move(name), hard, abs_r(residual)});
  };
  auto add_vec = [&](std::string name, const PairPoint& lhs, const PairPoint& rhs) {
    const PairPoint d = lhs - rhs;
    add(std::move(name), abs_r(d.x) > abs_r(d.y) ? d.x : d.y);
  };
  auto pi = [n](const PairPoint& pt) { return scaling_index(pt, n); };
  const Rational nn(n);

  const PairPoint shift = (e.k1 - 1) * s.p1;
  add_vec("P1bar-P1=(k1-1)P1", s.p1bar - s.p1, shift);
  add_vec("P2bar-P2=(k1-1)P1", s.p2bar - s.p2, shift);
  add_vec("P2'bar-P2'=(k1-1)P1", s.p2pbar - s.p2p, shift);
  add_vec("(k2-1)P2'=(k1-1)P1", (e.k2 - 1) * s.p2p, shift);

  add("pi(P1bar)-pi(P1)=2/n", pi(s.p1bar) - pi(s.p1) - 2 / nn);
  add("pi(P2bar)-pi(P2)=2/n", pi(s.p2bar) - pi(s.p2) - 2 / nn);
  add("pi(P2'bar)-pi(P2')=2/n", pi(s.p2pbar) - pi(s.p2p) - 2 / nn);

  const Rational p = e.k1 + 1;
  const Rational slope = ((2 - nn) * p + 2 * nn) / (2 * (p - 2));
  add("ray:P1", s.p1.y - slope * s.p1.x);
  add("ray:P1bar", s.p1bar.y - slope * s.p1bar.x);
  add("ray:P2'", s.p2p.y - slope * s.p2p.x);
  add("ray:P2'bar", s.p2pbar.y - slope * s.p2pbar.x);

  add("pi(P1)=2/(n(p-2))", pi(s.p1) - 2 / (nn * (p - 2)));
  add("pi(P1bar)=2/n+2/(n(p-2))", pi(s.p1bar) - 2 / nn - 2 / (nn * (p - 2)));
  add("pi(P2)=1/2", pi(s.p2) - Rational(1, 2));
  add("pi(P2bar)=1/2+2/n", pi(s.p2bar) - Rational(1, 2) - 2 / nn);
  add("pi(P2')=1/(n(p-1))", pi(s.p2p) - 1 / (nn * (p - 1)));
  add("pi(P2'bar)=2/n+1/(n(p-1))", pi(s.p2pbar) - 2 / nn - 1 / (nn * (p - 1)));

  // The line memberships as they are literally printed in the source text.
  // They disagree with the exact values for n = 1 and are kept as residuals.
  add("literal:P2' on x+y=1/(2p-2)", s.p2p.x + s.p2p.y - 1 / (2 * p - 2), false);
  add("literal:P2'bar on x+2y/n=1/(n(p-1))", pi(s.p2pbar) - 1 / (nn * (p - 1)), false);
  add("literal:P2bar on x+y=1/2+2/n", s.p2bar.x + s.p2bar.y - Rational(1, 2) - 2 / nn, false);

  // Distance outside the unit square, zero when all points are valid reciprocals.
  Rational outside = 0;
  for (const PairPoint* pt : {&s.p1, &s.p1bar, &s.p2, &s.p2bar, &s.p2p, &s.p2pbar}) {
    for (const Rational* c : {&pt->x, &pt->y}) {
      if (*c < 0 && -*c > outside) outside = -*c;
      if (*c > 1 && *c - 1 > outside) outside = *c - 1;
    }
  }
  add("unit-square", outside, false);
  return report;
}

Triangle parse_triangle(std::string_view name) {
  if (name == "T") return Triangle::T;
  if (name == "T'" || name == "Tprime") return Triangle::TPrime;
  if (name == "That" || name == "T^") return Triangle::THat;
  throw std::invalid_argument("unknown triangle id '" + std::string(name) + "'");
}

std::string_view name_of(Triangle tri) {
  switch (tri) {
    case Triangle::T: return "T";
    case Triangle::TPrime: return "T'";
    case Triangle::THat: return "That";
  }
  return "?";
}

TriangleVertices triangle_vertices(int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("dimension n must be 1 or 2");
  const Rational half(1, 2);
  TriangleVertices v;
  v.b = {half, 0};
  v.bp = {half, 1};
  if (n == 1) {
    v.c = {0, Rational(1, 4)};
    v.d = {0, half};
    v.e = {0, half};
    v.f = {0, 0};
    v.cp = {1, Rational(3, 4)};
    v.ep = {1, half};
    v.fp = {1, 1};
  } else {
    const Rational nn(n);
    v.c = {half - 1 / nn, half};
    v.d = {(nn - 2) / (2 * (nn - 1)), nn / (2 * (nn - 1))};
    v.e = {half - 1 / nn, 1};
    v.f = {half - 1 / nn, 0};
    v.cp = {half + 1 / nn, half};
    v.ep = {half + 1 / nn, 0};
    v.fp = {half + 1 / nn, 1};
  }
  return v;
}

namespace {

Rational side(const PairPoint& a, const PairPoint& b, const PairPoint& p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

}  // namespace

bool triangle_membership(const PairPoint& point, int n, Triangle tri) {
  const TriangleVertices v = triangle_vertices(n);
  PairPoint a, b, c;
  switch (tri) {
    case Triangle::T: a = v.b, b = v.e, c = v.f; break;
    case Triangle::TPrime: a = v.bp, b = v.ep, c = v.fp; break;
    case Triangle::THat: a = v.b, b = v.c, c = v.d; break;
  }
  const int orient = sign(side(a, b, c));
  const int s_ab = sign(side(a, b, point)) * orient;
  const int s_bc = sign(side(b, c, point)) * orient;
  const int s_ca = sign(side(c, a, point)) * orient;

  if (s_ab < 0 || s_bc < 0 || s_ca < 0) return false;
  if (s_ab > 0 && s_bc > 0 && s_ca > 0) return true;

  spdlog::warn("boundary query ({}, {}) on triangle {} for n = {}", to_string(point.x), to_string(point.y),
               name_of(tri), n);
  // The included vertex of T and T' is their first vertex (B or B').
  if (tri != Triangle::THat) return point == a;
  // ]CD[ for T̂: on the line through C and D, strictly between them.
  const bool on_open_cd = s_bc == 0 && s_ab > 0 && s_ca > 0;
  return on_open_cd && n != 2;
}

}  // namespace ggp
