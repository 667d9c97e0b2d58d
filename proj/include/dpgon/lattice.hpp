#pragma once

// Exact integer model of the Picard lattice of the projective plane blown up
// in n <= 8 general points.
//
// The lattice is Z^{1+n} with basis l, e_1, ..., e_n and intersection form
// diag(+1, -1, ..., -1).  A class is stored as a pair (a; b_1..b_n) and
// denotes a*l - sum_i b_i*e_i, so the anticanonical class -K = 3l - sum e_i
// is (3; 1,...,1) and the exceptional curve e_i has b_i = -1.
//
// All arithmetic is exact signed 64-bit; overflow raises an exception rather
// than wrapping.  Classes are plain values and every operation here is a
// pure function.

#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dpgon {

using Int = std::int64_t;

inline constexpr int max_points = 8;

inline Int checked_add(Int x, Int y) {
  Int r;
  if (__builtin_add_overflow(x, y, &r))
    throw std::overflow_error("lattice arithmetic overflow (add)");
  return r;
}

inline Int checked_sub(Int x, Int y) {
  Int r;
  if (__builtin_sub_overflow(x, y, &r))
    throw std::overflow_error("lattice arithmetic overflow (sub)");
  return r;
}

inline Int checked_mul(Int x, Int y) {
  Int r;
  if (__builtin_mul_overflow(x, y, &r))
    throw std::overflow_error("lattice arithmetic overflow (mul)");
  return r;
}

// Which surface S_n we are on; fixes the rank 1+n of the lattice.  The
// degree of S_n is K^2 = 9 - n, between 1 and 9.
struct SurfaceId {
  int n = 0;

  SurfaceId() = default;
  explicit SurfaceId(int points) : n(points) {
    if (n < 0 || n > max_points)
      throw std::invalid_argument("surface index n must satisfy 0 <= n <= 8");
  }

  Int degree() const { return 9 - n; }  // = K^2

  friend bool operator==(SurfaceId, SurfaceId) = default;
};

// A divisor class (a; b_1..b_n) = a*l - sum b_i e_i on S_n.  Unused slots of
// b stay zero so that default comparison is lexicographic on (a, b_1..b_n)
// within a fixed surface.
struct DivisorClass {
  int n = 0;
  Int a = 0;
  std::array<Int, max_points> b{};

  SurfaceId surface() const { return SurfaceId(n); }

  friend bool operator==(const DivisorClass&, const DivisorClass&) = default;
  friend auto operator<=>(const DivisorClass&, const DivisorClass&) = default;
};

inline DivisorClass divisor_class(SurfaceId s, Int a, std::span<const Int> b) {
  if (static_cast<int>(b.size()) != s.n)
    throw std::invalid_argument("divisor class needs exactly n e-coefficients");
  DivisorClass d;
  d.n = s.n;
  d.a = a;
  for (int i = 0; i < s.n; ++i) d.b[i] = b[i];
  return d;
}

inline DivisorClass divisor_class(SurfaceId s, Int a, std::initializer_list<Int> b) {
  return divisor_class(s, a, std::span<const Int>(b.begin(), b.size()));
}

inline DivisorClass zero_class(SurfaceId s) {
  DivisorClass d;
  d.n = s.n;
  return d;
}

inline bool is_zero(const DivisorClass& d) {
  if (d.a != 0) return false;
  for (int i = 0; i < d.n; ++i)
    if (d.b[i] != 0) return false;
  return true;
}

// The pullback of a line; always an irreducible curve class.
inline DivisorClass line_class(SurfaceId s) {
  DivisorClass d = zero_class(s);
  d.a = 1;
  return d;
}

// The exceptional curve e_i (0-based index); stored with b_i = -1.
inline DivisorClass exceptional_class(SurfaceId s, int i) {
  if (i < 0 || i >= s.n)
    throw std::invalid_argument("exceptional curve index out of range");
  DivisorClass d = zero_class(s);
  d.b[i] = -1;
  return d;
}

inline DivisorClass canonical_class(SurfaceId s) {
  DivisorClass d = zero_class(s);
  d.a = -3;
  for (int i = 0; i < s.n; ++i) d.b[i] = -1;
  return d;
}

inline DivisorClass anticanonical_class(SurfaceId s) {
  DivisorClass d = zero_class(s);
  d.a = 3;
  for (int i = 0; i < s.n; ++i) d.b[i] = 1;
  return d;
}

inline void require_same_surface(const DivisorClass& x, const DivisorClass& y) {
  if (x.n != y.n)
    throw std::invalid_argument("divisor classes live on different surfaces");
}

inline DivisorClass operator+(const DivisorClass& x, const DivisorClass& y) {
  require_same_surface(x, y);
  DivisorClass r = x;
  r.a = checked_add(r.a, y.a);
  for (int i = 0; i < r.n; ++i) r.b[i] = checked_add(r.b[i], y.b[i]);
  return r;
}

inline DivisorClass operator-(const DivisorClass& x, const DivisorClass& y) {
  require_same_surface(x, y);
  DivisorClass r = x;
  r.a = checked_sub(r.a, y.a);
  for (int i = 0; i < r.n; ++i) r.b[i] = checked_sub(r.b[i], y.b[i]);
  return r;
}

inline DivisorClass operator-(const DivisorClass& x) {
  return zero_class(x.surface()) - x;
}

inline DivisorClass operator*(Int c, const DivisorClass& x) {
  DivisorClass r = x;
  r.a = checked_mul(c, r.a);
  for (int i = 0; i < r.n; ++i) r.b[i] = checked_mul(c, r.b[i]);
  return r;
}

// Intersection form: (a;b).(a';b') = a a' - sum b_i b'_i.  Symmetric and
// bilinear, of signature (1, n).
inline Int intersect(const DivisorClass& x, const DivisorClass& y) {
  require_same_surface(x, y);
  Int r = checked_mul(x.a, y.a);
  for (int i = 0; i < x.n; ++i)
    r = checked_sub(r, checked_mul(x.b[i], y.b[i]));
  return r;
}

inline Int self_intersection(const DivisorClass& d) { return intersect(d, d); }

// -K.D = 3a - sum b_i, the anticanonical degree.
inline Int anticanonical_degree(const DivisorClass& d) {
  Int r = checked_mul(3, d.a);
  for (int i = 0; i < d.n; ++i) r = checked_sub(r, d.b[i]);
  return r;
}

// Sectional genus g(L) = L.(L+K)/2 + 1; the arithmetic genus of the members
// of |L|.  L.(L+K) is even for every lattice class (adjunction parity).
inline Int sectional_genus(const DivisorClass& l) {
  Int t = checked_sub(self_intersection(l), anticanonical_degree(l));
  if (t % 2 != 0)
    throw std::logic_error("adjunction parity violated; corrupt divisor class");
  return t / 2 + 1;
}

// Euler characteristic chi(D) = D.(D-K)/2 + 1 (Riemann-Roch with chi(O)=1).
inline Int euler_characteristic(const DivisorClass& d) {
  Int t = checked_add(self_intersection(d), anticanonical_degree(d));
  if (t % 2 != 0)
    throw std::logic_error("adjunction parity violated; corrupt divisor class");
  return t / 2 + 1;
}

// Permutes the e-coefficients: perm[i] = index the i-th slot is taken from.
inline DivisorClass apply_permutation(const DivisorClass& d, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != d.n)
    throw std::invalid_argument("permutation size does not match surface");
  DivisorClass r = d;
  for (int i = 0; i < d.n; ++i) r.b[i] = d.b[perm[i]];
  return r;
}

// The quadratic (Cremona) transform based at three of the blown-up points:
// reflection in the root l - e_i - e_j - e_k.  A lattice isometry fixing K,
// hence preserving every numerical invariant defined here.
inline DivisorClass cremona_transform(const DivisorClass& d, int i = 0, int j = 1, int k = 2) {
  if (d.n < 3) throw std::invalid_argument("Cremona transform needs n >= 3");
  if (i == j || i == k || j == k || i < 0 || j < 0 || k < 0 || i >= d.n || j >= d.n || k >= d.n)
    throw std::invalid_argument("Cremona transform needs three distinct indices");
  Int t = d.a - d.b[i] - d.b[j] - d.b[k];  // = D.(l - e_i - e_j - e_k)
  DivisorClass r = d;
  r.a = checked_add(d.a, t);
  r.b[i] = checked_add(d.b[i], t);
  r.b[j] = checked_add(d.b[j], t);
  r.b[k] = checked_add(d.b[k], t);
  return r;
}

// ---------------------------------------------------------------------------
// Text format: "n:a;b1,b2,...,bn", for n = 0 simply "n:a;".  Parsing and
// printing round-trip bit-exactly.

struct ClassParseError : std::invalid_argument {
  std::string token;
  ClassParseError(const std::string& msg, std::string tok)
      : std::invalid_argument(msg + ": '" + tok + "'"), token(std::move(tok)) {}
};

inline std::string format_class(const DivisorClass& d) {
  std::string s = std::to_string(d.n);
  s += ':';
  s += std::to_string(d.a);
  s += ';';
  for (int i = 0; i < d.n; ++i) {
    if (i) s += ',';
    s += std::to_string(d.b[i]);
  }
  return s;
}

namespace detail {

inline Int parse_int_token(std::string_view tok) {
  Int value = 0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || tok.empty())
    throw ClassParseError("malformed class string, bad integer", std::string(tok));
  return value;
}

}  // namespace detail

inline DivisorClass parse_class(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ClassParseError("malformed class string, missing ':'", std::string(text));
  auto semi = text.find(';', colon + 1);
  if (semi == std::string_view::npos)
    throw ClassParseError("malformed class string, missing ';'", std::string(text));

  Int n_val = detail::parse_int_token(text.substr(0, colon));
  if (n_val < 0 || n_val > max_points)
    throw ClassParseError("surface index out of range 0..8", std::string(text.substr(0, colon)));
  SurfaceId surface(static_cast<int>(n_val));

  Int a = detail::parse_int_token(text.substr(colon + 1, semi - colon - 1));

  std::vector<Int> b;
  std::string_view rest = text.substr(semi + 1);
  if (!rest.empty()) {
    std::size_t pos = 0;
    while (true) {
      auto comma = rest.find(',', pos);
      std::string_view tok = rest.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
      b.push_back(detail::parse_int_token(tok));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
  }
  if (static_cast<int>(b.size()) != surface.n)
    throw ClassParseError("expected " + std::to_string(surface.n) + " e-coefficients",
                          std::string(rest));
  return divisor_class(surface, a, b);
}

inline std::ostream& operator<<(std::ostream& os, const DivisorClass& d) {
  return os << format_class(d);
}

}  // namespace dpgon
