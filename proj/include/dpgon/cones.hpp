#pragma once

// Curve-class enumeration and positivity predicates on S_n.
//
// The only curves of negative self-intersection on these surfaces are the
// (-1)-curves (D^2 = -1, -K.D = 1), and there are finitely many of them.
// Every special class family used downstream is produced by one bounded
// lattice search: all classes with prescribed self-intersection s and
// anticanonical degree d.  Writing the unknown class as (a; b_1..b_n), the
// constraints are sum b_i = 3a - d and sum b_i^2 = a^2 - s, and
// Cauchy-Schwarz (sum b_i)^2 <= n sum b_i^2 confines a to the roots of
// (9-n) a^2 - 6d a + (d^2 + n s) <= 0, a finite interval.
//
// Effectivity is decided by fixed-component removal: while a (-1)-curve
// meets D negatively, it is a fixed component and may be subtracted without
// changing h^0.  The anticanonical degree drops by 1 at each step, so the
// loop terminates; the verdict is read off the terminal class.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "dpgon/lattice.hpp"

namespace dpgon {

struct CurveClassTable {
  SurfaceId surface;
  std::vector<DivisorClass> neg_curves;      // D^2 = -1, -K.D = 1
  std::vector<DivisorClass> conic_classes;   // nef, D^2 = 0, -K.D = 2
  std::vector<DivisorClass> line_pullbacks;  // nef, D^2 = 1, -K.D = 3
};

struct EffectiveReduction {
  DivisorClass input;
  std::vector<std::pair<DivisorClass, Int>> subtracted;  // (-1)-curve, multiplicity
  std::optional<DivisorClass> nef_part;
  bool effective = false;
};

inline Int isqrt_floor(Int q) {
  if (q < 0) return -1;
  Int r = static_cast<Int>(std::sqrt(static_cast<long double>(q)));
  while (r > 0 && r * r > q) --r;
  while ((r + 1) * (r + 1) <= q) ++r;
  return r;
}

bool is_nef(const DivisorClass& d);

namespace detail {

// Recursive coefficient search with the Cauchy-Schwarz prune on the
// remaining coordinates.  With require_nef only the cheap necessary
// conditions are used for pruning (b_i >= 0 and b_i + b_j <= a); the
// survivors still go through the full nef test.
inline void enumerate_b(int n, Int a, int idx, Int rem_sum, Int rem_sq, Int bmax,
                        bool require_nef, DivisorClass& cur,
                        std::vector<DivisorClass>& out) {
  int rem = n - idx;
  if (rem == 0) {
    if (rem_sum == 0 && rem_sq == 0) {
      if (!require_nef || is_nef(cur)) out.push_back(cur);
    }
    return;
  }
  if (rem_sum * rem_sum > static_cast<Int>(rem) * rem_sq) return;
  Int hi = isqrt_floor(rem_sq);
  Int lo = -hi;
  if (require_nef) {
    lo = 0;
    Int cap = (n == 1 || idx == 0) ? a : a - bmax;
    if (cap < hi) hi = cap;
  }
  for (Int b = lo; b <= hi; ++b) {
    cur.b[idx] = b;
    enumerate_b(n, a, idx + 1, rem_sum - b, rem_sq - b * b,
                b > bmax ? b : bmax, require_nef, cur, out);
  }
  cur.b[idx] = 0;
}

}  // namespace detail

// All classes D on S_n with D^2 = self_int and -K.D = kdeg, optionally
// restricted to nef ones.  Output is lexicographic on (a, b_1..b_n).
inline std::vector<DivisorClass> enumerate_classes(SurfaceId s, Int self_int, Int kdeg,
                                                   bool require_nef) {
  if (kdeg < 1) throw std::invalid_argument("enumerate_classes needs kdeg >= 1");
  std::vector<DivisorClass> out;
  const int n = s.n;
  if (n == 0) {
    if (kdeg % 3 == 0) {
      Int a = kdeg / 3;
      if (a * a == self_int) {
        DivisorClass d = zero_class(s);
        d.a = a;
        if (!require_nef || a >= 0) out.push_back(d);
      }
    }
    return out;
  }
  // (9-n) a^2 - 6 kdeg a + (kdeg^2 + n self_int) <= 0
  Int disc = static_cast<Int>(n) * (kdeg * kdeg - (9 - n) * self_int);
  if (disc < 0) return out;
  long double sq = std::sqrt(static_cast<long double>(disc));
  Int lo = static_cast<Int>(std::floor((3.0L * kdeg - sq) / (9 - n))) - 1;
  Int hi = static_cast<Int>(std::ceil((3.0L * kdeg + sq) / (9 - n))) + 1;
  for (Int a = lo; a <= hi; ++a) {
    if ((9 - n) * a * a - 6 * kdeg * a + (kdeg * kdeg + n * self_int) > 0) continue;
    if (require_nef && a < 0) continue;
    Int q = a * a - self_int;
    if (q < 0) continue;
    DivisorClass cur = zero_class(s);
    cur.a = a;
    detail::enumerate_b(n, a, 0, 3 * a - kdeg, q, 0, require_nef, cur, out);
  }
  return out;
}

// The (-1)-curve classes of S_n, in lexicographic order.  Counts for
// n = 0..8 are 0, 1, 3, 6, 10, 16, 27, 56, 240.
inline const std::vector<DivisorClass>& neg_curve_list(SurfaceId s) {
  static const std::array<std::vector<DivisorClass>, max_points + 1> tables = [] {
    std::array<std::vector<DivisorClass>, max_points + 1> t;
    for (int n = 0; n <= max_points; ++n)
      t[n] = enumerate_classes(SurfaceId(n), -1, 1, false);
    return t;
  }();
  return tables[s.n];
}

// Generators of the cone of curves.  For n >= 2 these are the (-1)-curves.
// For n = 1 the ruling class l - e_1 (square zero) must be added, and for
// n = 0 the line class generates; a nef test against (-1)-curves alone would
// accept non-nef classes there (e.g. -e_1 on S_1).
inline const std::vector<DivisorClass>& mori_generators(SurfaceId s) {
  static const std::array<std::vector<DivisorClass>, max_points + 1> tables = [] {
    std::array<std::vector<DivisorClass>, max_points + 1> t;
    t[0] = {line_class(SurfaceId(0))};
    SurfaceId s1(1);
    t[1] = {exceptional_class(s1, 0), line_class(s1) - exceptional_class(s1, 0)};
    for (int n = 2; n <= max_points; ++n) t[n] = neg_curve_list(SurfaceId(n));
    return t;
  }();
  return tables[s.n];
}

inline bool is_nef(const DivisorClass& d) {
  for (const DivisorClass& g : mori_generators(d.surface()))
    if (intersect(d, g) < 0) return false;
  return true;
}

// Nakai-Moishezon on these surfaces: positive square and strictly positive
// against every curve-cone generator.
inline bool is_ample(const DivisorClass& d) {
  if (self_intersection(d) <= 0) return false;
  for (const DivisorClass& g : mori_generators(d.surface()))
    if (intersect(d, g) <= 0) return false;
  return true;
}

// A nef class is base point free except for the anticanonical class of S_8,
// whose system has a single base point.  The zero class counts as free.
inline bool is_base_point_free(const DivisorClass& d) {
  if (!is_nef(d)) throw std::invalid_argument("base point freeness queried on a non-nef class");
  return !(d.n == 8 && d == anticanonical_class(d.surface()));
}

// Fixed-component removal.  While some (-1)-curve meets the class
// negatively and the anticanonical degree is still positive, subtract the
// lexicographically least violator.  The terminal class decides
// effectivity: nef or zero means effective, anything else means not.
inline EffectiveReduction reduce_to_nef(const DivisorClass& d) {
  EffectiveReduction red;
  red.input = d;
  DivisorClass cur = d;
  const auto& negs = neg_curve_list(d.surface());
  while (anticanonical_degree(cur) > 0) {
    const DivisorClass* violator = nullptr;
    for (const DivisorClass& g : negs) {
      if (intersect(cur, g) < 0) {
        violator = &g;
        break;  // list is lex-sorted
      }
    }
    if (!violator) break;
    cur = cur - *violator;
    if (!red.subtracted.empty() && red.subtracted.back().first == *violator)
      red.subtracted.back().second += 1;
    else
      red.subtracted.emplace_back(*violator, 1);
  }
  if (is_zero(cur) || is_nef(cur)) {
    red.effective = true;
    red.nef_part = cur;
  }
  return red;
}

inline bool is_effective(const DivisorClass& d) { return reduce_to_nef(d).effective; }

// h^0 of a divisor class.  Subtracting a fixed component preserves h^0, and
// every nef class N here has h^1(N) = h^2(N) = 0, so h^0(N) = chi(N).
inline Int h0(const DivisorClass& d) {
  EffectiveReduction red = reduce_to_nef(d);
  if (!red.effective) return 0;
  return euler_characteristic(*red.nef_part);
}

// R(L) and R_1(L): the (-1)-curves meeting a nef class L in 0 resp. 1, and
// m(L) = |R(L)|.  The members of R(L) are pairwise disjoint (Hodge index).
struct RSets {
  std::vector<DivisorClass> r0;
  std::vector<DivisorClass> r1;
  Int m = 0;
};

inline RSets r_sets(const DivisorClass& l) {
  if (!is_nef(l)) throw std::invalid_argument("r_sets needs a nef class");
  RSets rs;
  for (const DivisorClass& g : neg_curve_list(l.surface())) {
    Int t = intersect(g, l);
    if (t == 0) rs.r0.push_back(g);
    else if (t == 1) rs.r1.push_back(g);
  }
  rs.m = static_cast<Int>(rs.r0.size());
  for (std::size_t i = 0; i < rs.r0.size(); ++i)
    for (std::size_t j = i + 1; j < rs.r0.size(); ++j)
      if (intersect(rs.r0[i], rs.r0[j]) != 0)
        throw std::logic_error("members of R(L) must be pairwise disjoint");
  return rs;
}

namespace detail {

inline bool signature_matches(const DivisorClass& d, Int self_int, Int kdeg) {
  return self_intersection(d) == self_int && anticanonical_degree(d) == kdeg;
}

// Optional on-disk cache for curve tables, enabled by the DPGON_CACHE
// environment variable.  Invalid or unreadable files are recomputed.
inline std::optional<CurveClassTable> load_curve_table(const std::filesystem::path& file,
                                                       SurfaceId s) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  std::string magic;
  int version = 0, n = -1;
  if (!(in >> magic >> version >> n) || magic != "dpgon-curves" || version != 1 || n != s.n)
    return std::nullopt;
  CurveClassTable tab{s, {}, {}, {}};
  std::string kind, cls;
  while (in >> kind >> cls) {
    try {
      DivisorClass d = parse_class(cls);
      if (d.n != s.n) return std::nullopt;
      if (kind == "neg" && signature_matches(d, -1, 1)) tab.neg_curves.push_back(d);
      else if (kind == "conic" && signature_matches(d, 0, 2)) tab.conic_classes.push_back(d);
      else if (kind == "sq1" && signature_matches(d, 1, 3)) tab.line_pullbacks.push_back(d);
      else return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (tab.neg_curves.empty() && s.n > 0) return std::nullopt;
  return tab;
}

inline void store_curve_table(const std::filesystem::path& file, const CurveClassTable& tab) {
  std::ofstream out(file);
  if (!out) return;  // cache is best-effort
  out << "dpgon-curves 1 " << tab.surface.n << '\n';
  for (const auto& d : tab.neg_curves) out << "neg " << format_class(d) << '\n';
  for (const auto& d : tab.conic_classes) out << "conic " << format_class(d) << '\n';
  for (const auto& d : tab.line_pullbacks) out << "sq1 " << format_class(d) << '\n';
}

inline CurveClassTable build_curve_table(SurfaceId s) {
  const char* cache_dir = std::getenv("DPGON_CACHE");
  std::filesystem::path file;
  if (cache_dir && *cache_dir) {
    file = std::filesystem::path(cache_dir) / ("curves_" + std::to_string(s.n) + ".txt");
    if (auto tab = load_curve_table(file, s)) return *tab;
  }
  CurveClassTable tab{s, neg_curve_list(s), enumerate_classes(s, 0, 2, true),
                      enumerate_classes(s, 1, 3, true)};
  if (!file.empty()) store_curve_table(file, tab);
  return tab;
}

}  // namespace detail

// The three special curve-class lists of S_n, memoized per surface.
// Population is idempotent; concurrent readers are safe.
inline const CurveClassTable& curve_table(SurfaceId s) {
  static const std::array<CurveClassTable, max_points + 1> tables = [] {
    std::array<CurveClassTable, max_points + 1> t;
    for (int n = 0; n <= max_points; ++n) t[n] = detail::build_curve_table(SurfaceId(n));
    return t;
  }();
  return tables[s.n];
}

// Nef classes of a fixed anticanonical degree d, memoized.  The self
// intersection of such a class is confined to 0 <= D^2 <= d^2 / K^2 by the
// Hodge index theorem.
inline const std::vector<DivisorClass>& nef_classes_of_degree(SurfaceId s, Int d) {
  static std::mutex mu;
  static std::map<std::pair<int, Int>, std::unique_ptr<const std::vector<DivisorClass>>> cache;
  if (d < 1) throw std::invalid_argument("nef_classes_of_degree needs kdeg >= 1");
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(s.n, d);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<DivisorClass> all;
    Int smax = (d * d) / s.degree();
    for (Int self_int = 0; self_int <= smax; ++self_int) {
      auto part = enumerate_classes(s, self_int, d, true);
      all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end());
    it = cache.emplace(key, std::make_unique<const std::vector<DivisorClass>>(std::move(all))).first;
  }
  return *it->second;
}

}  // namespace dpgon
