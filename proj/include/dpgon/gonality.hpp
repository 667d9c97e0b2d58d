#pragma once

// Gonality, Clifford index and birational k-very ampleness of the smooth
// curves in a complete linear system |L| on S_n, decided from lattice data.
//
// Everything revolves around one divisor condition.  For an integer k >= 1,
// a class D is a certificate against birational k-very ampleness of L+K when
//
//      h^0(D) >= 2,  h^0(L-D) >= 2,  D.(L-D) <= k+1,
//      L+K-D is effective,  and  L-2D is effective whenever L^2 >= 4k+3.
//
// The least k admitting a certificate is k0; the minimal gonality of a
// smooth curve in |L| is then k0+1, and the certificates of minimal value
// D.(L-D) = k0+1 decide whether the gonality is the same for every smooth
// curve in |L| or drops by one on a codimension-1 subfamily.
//
// Two independent searches are implemented.  The structured one scans the
// three families that can carry a minimal certificate: conic classes
// (D^2 = 0, -K.D = 2), line pullbacks (D^2 = 1, -K.D = 3), and the
// genus-one classes in normal form -K + sum_{R(L)} G + sum_B G' with
// B a set of pairwise disjoint members of R_1(L).  The brute-force one
// scans every nef class in a finite box and is the oracle the structured
// search is audited against.

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dpgon/cones.hpp"
#include "dpgon/lattice.hpp"

namespace dpgon {

enum class CertKind { conic, square_one, elliptic, other };

enum class CaseTag { constant, case_I, case_II, case_III };

enum class Subfamily { general, special };

struct DaggerCertificate {
  DivisorClass D;
  Int value = 0;  // D.(L-D)
  CertKind kind = CertKind::other;
};

struct DaggerSearchOptions {
  // The "L - 2D effective when L^2 >= 4k+3" clause.  Only the audit's fault
  // injection ever disables it; without it the search wrongly accepts
  // -K + G certificates on classes of square 7.
  bool enforce_double_bound = true;
};

struct DaggerSearchResult {
  Int k0 = 0;
  std::vector<DaggerCertificate> minimal_set;
};

struct GonalityReport {
  DivisorClass L;
  Int genus = 0;
  Int k0 = 0;
  std::vector<DaggerCertificate> minimal_set;
  CaseTag case_tag = CaseTag::constant;
  Int gonality_general = 0;
  std::optional<Int> gonality_special;
  std::string special_family;  // empty unless the gonality jumps
};

struct CliffordReport {
  bool defined = false;  // genus >= 4
  std::optional<Int> clifford_general;
  std::optional<Int> clifford_special;
  bool exceptional = false;
  std::optional<Int> clifford_dimension;
  std::optional<DivisorClass> exceptional_witness;
};

struct PencilDescriptor {
  std::string clause;  // a.i..a.vi, b.hyper, b.trig, c.i..c.v
  std::optional<DivisorClass> D;
  std::string correction;     // e.g. "minus 1 point", "minus Z2"
  std::string applicability;  // e.g. "curve passes through x"
};

struct AnalysisReport {
  GonalityReport gonality;
  CliffordReport clifford;
  std::vector<PencilDescriptor> pencils;
  Subfamily subfamily = Subfamily::general;
};

inline const char* to_string(CertKind k) {
  switch (k) {
    case CertKind::conic: return "conic";
    case CertKind::square_one: return "square_one";
    case CertKind::elliptic: return "elliptic";
    default: return "other";
  }
}

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::case_I: return "case_I";
    case CaseTag::case_II: return "case_II";
    case CaseTag::case_III: return "case_III";
    default: return "constant";
  }
}

inline const char* to_string(Subfamily s) {
  return s == Subfamily::general ? "general" : "special";
}

namespace detail {

inline void require_analysis_input(const DivisorClass& l) {
  if (!is_nef(l)) throw std::invalid_argument("class is not nef");
  if (sectional_genus(l) < 2)
    throw std::invalid_argument("sectional genus is < 2");
}

inline CertKind classify_certificate(const DivisorClass& d) {
  Int s = self_intersection(d);
  Int kd = anticanonical_degree(d);
  if (s == 0 && kd == 2) return CertKind::conic;
  if (s == 1 && kd == 3) return CertKind::square_one;
  if (s == kd) return CertKind::elliptic;  // g(D) = 1
  return CertKind::other;
}

}  // namespace detail

// The shared certificate predicate; k is the order being certified.
inline bool dagger_satisfied(const DivisorClass& l, const DivisorClass& d, Int k,
                             DaggerSearchOptions opts = {}) {
  if (k < 0) return false;
  DivisorClass m = l - d;
  if (intersect(d, m) > k + 1) return false;
  if (h0(d) < 2 || h0(m) < 2) return false;
  if (!is_effective(l + canonical_class(l.surface()) - d)) return false;
  if (opts.enforce_double_bound && self_intersection(l) >= 4 * k + 3 &&
      !is_effective(l - 2 * d))
    return false;
  return true;
}

namespace detail {

inline DaggerSearchResult select_minimal(std::vector<DaggerCertificate> passed) {
  if (passed.empty())
    throw std::logic_error("no gonality certificate found for a genus >= 2 class");
  Int best = std::numeric_limits<Int>::max();
  for (const auto& c : passed) best = std::min(best, c.value);
  DaggerSearchResult res;
  res.k0 = best - 1;
  for (auto& c : passed)
    if (c.value == best) res.minimal_set.push_back(c);
  std::sort(res.minimal_set.begin(), res.minimal_set.end(),
            [](const DaggerCertificate& x, const DaggerCertificate& y) { return x.D < y.D; });
  return res;
}

}  // namespace detail

// Structured search over the three candidate families.
inline DaggerSearchResult dagger_value_structured(const DivisorClass& l,
                                                  DaggerSearchOptions opts = {}) {
  detail::require_analysis_input(l);
  const SurfaceId s = l.surface();
  const CurveClassTable& tab = curve_table(s);

  std::vector<DaggerCertificate> passed;
  auto consider = [&](const DivisorClass& d, CertKind kind) {
    Int value = intersect(d, l - d);
    if (value < 1) return;
    if (dagger_satisfied(l, d, value - 1, opts))
      passed.push_back({d, value, kind});
  };

  for (const DivisorClass& d : tab.conic_classes) consider(d, CertKind::conic);
  for (const DivisorClass& d : tab.line_pullbacks) consider(d, CertKind::square_one);

  // Genus-one candidates in normal form.  Their square is
  // K^2 + m(L) + |B|, and only squares <= 4 can be minimal.
  RSets rs = r_sets(l);
  Int base_square = s.degree() + rs.m;
  if (base_square <= 4) {
    DivisorClass base = anticanonical_class(s);
    for (const DivisorClass& g : rs.r0) base = base + g;
    std::vector<const DivisorClass*> chosen;
    auto disjoint_from_chosen = [&](const DivisorClass& g) {
      for (const DivisorClass& g0 : rs.r0)
        if (intersect(g, g0) != 0) return false;
      for (const DivisorClass* c : chosen)
        if (intersect(g, *c) != 0) return false;
      return true;
    };
    Int max_extra = 4 - base_square;
    auto emit = [&] {
      DivisorClass d = base;
      for (const DivisorClass* c : chosen) d = d + *c;
      consider(d, CertKind::elliptic);
    };
    // depth-first over subsets B of R_1(L) with pairwise disjoint members
    auto rec = [&](auto&& self, std::size_t from) -> void {
      emit();
      if (static_cast<Int>(chosen.size()) >= max_extra) return;
      for (std::size_t i = from; i < rs.r1.size(); ++i) {
        if (!disjoint_from_chosen(rs.r1[i])) continue;
        chosen.push_back(&rs.r1[i]);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    rec(rec, 0);
  }

  DaggerSearchResult res = detail::select_minimal(std::move(passed));
  for (const auto& c : res.minimal_set)
    if (c.kind == CertKind::elliptic &&
        self_intersection(c.D) > std::min<Int>(res.k0 + 1, 4))
      throw std::logic_error("minimal genus-one certificate exceeds its square bound");
  return res;
}

// Independent brute-force search: every nef class D in the finite box
// 0 <= D^2 <= D.L <= L^2.  The anticanonical degree of a certificate is at
// most -K.L - K^2 because L+K-D must be effective, which makes the box
// enumerable degree by degree.
inline DaggerSearchResult dagger_value_bruteforce(const DivisorClass& l) {
  detail::require_analysis_input(l);
  const SurfaceId s = l.surface();
  const Int l2 = self_intersection(l);
  const Int dmax = anticanonical_degree(l) - s.degree();

  std::vector<DaggerCertificate> box;
  for (Int deg = 1; deg <= dmax; ++deg) {
    for (const DivisorClass& d : nef_classes_of_degree(s, deg)) {
      Int dl = intersect(d, l);
      Int d2 = self_intersection(d);
      if (dl > l2 || d2 > dl) continue;
      Int value = dl - d2;
      if (value < 1) continue;
      box.push_back({d, value, detail::classify_certificate(d)});
    }
  }
  std::sort(box.begin(), box.end(), [](const DaggerCertificate& x, const DaggerCertificate& y) {
    return x.value < y.value || (x.value == y.value && x.D < y.D);
  });

  std::vector<DaggerCertificate> passed;
  Int best = std::numeric_limits<Int>::max();
  for (const auto& c : box) {
    if (c.value > best) break;
    if (dagger_satisfied(l, c.D, c.value - 1))
      passed.push_back(c), best = c.value;
  }
  return detail::select_minimal(std::move(passed));
}

// Largest k >= 1 such that L+K is birationally k-very ample, 0 if none.
// Closed form of the numerical criterion: each conic class D allows
// k <= L.D - 2, each line pullback k <= L.D - 3, and with s = K^2 + m(L)
// the genus-one families allow every k when s >= 5 and otherwise
// k <= max(s-2, -K.L - s - 2).
inline Int k_max(const DivisorClass& l) {
  detail::require_analysis_input(l);
  const CurveClassTable& tab = curve_table(l.surface());
  const Int inf = std::numeric_limits<Int>::max() / 4;
  Int kc = inf, ks = inf;
  for (const DivisorClass& d : tab.conic_classes)
    kc = std::min(kc, intersect(l, d) - 2);
  for (const DivisorClass& d : tab.line_pullbacks)
    ks = std::min(ks, intersect(l, d) - 3);
  Int sdeg = l.surface().degree() + r_sets(l).m;
  Int ke = sdeg >= 5 ? inf : std::max(sdeg - 2, anticanonical_degree(l) - sdeg - 2);
  Int k = std::min(kc, std::min(ks, ke));
  return std::max<Int>(k, 0);
}

// Is L+K birationally k-very ample?  Numerical test: L.D >= k+2 for every
// conic class, L.D >= k+3 for every line pullback, and, with
// s = K^2 + m(L), either s >= 5 or s > k+1 or -K.L >= k+2+s.
inline bool is_birationally_kva(const DivisorClass& l, Int k) {
  detail::require_analysis_input(l);
  if (k < 1) throw std::invalid_argument("birational k-very ampleness needs k >= 1");
  const CurveClassTable& tab = curve_table(l.surface());
  for (const DivisorClass& d : tab.conic_classes)
    if (intersect(l, d) < k + 2) return false;
  for (const DivisorClass& d : tab.line_pullbacks)
    if (intersect(l, d) < k + 3) return false;
  Int sdeg = l.surface().degree() + r_sets(l).m;
  if (sdeg >= 5 || sdeg > k + 1) return true;
  return anticanonical_degree(l) >= k + 2 + sdeg;
}

namespace detail {

// The three configurations in which the minimal certificates force a
// gonality jump on a codimension-1 subfamily.  k0 = 0 only happens for
// -2K on S_8, where every smooth member has genus 2 and the gonality is
// constant, so the detection is gated on k0 >= 1.
inline CaseTag detect_case(const DivisorClass& l, const DaggerSearchResult& sr) {
  if (sr.k0 < 1 || sr.minimal_set.size() != 1) return CaseTag::constant;
  const SurfaceId s = l.surface();
  const DivisorClass& d = sr.minimal_set.front().D;
  const DivisorClass antik = anticanonical_class(s);
  if (s.n == 7 && d == antik && l == 2 * antik) return CaseTag::case_I;
  if (s.n == 8 && d == antik) return CaseTag::case_III;
  if (s.n == 8 && l == 2 * d) {
    DivisorClass g = d + canonical_class(s);  // candidate (-1)-curve
    if (self_intersection(g) == -1 && anticanonical_degree(g) == 1 &&
        std::binary_search(neg_curve_list(s).begin(), neg_curve_list(s).end(), g))
      return CaseTag::case_II;
  }
  return CaseTag::constant;
}

}  // namespace detail

// Builds the report from an already computed certificate search; the audit
// harness uses this to report on a deliberately faulted search.
inline GonalityReport gonality_analysis(const DivisorClass& l, const DaggerSearchResult& sr) {
  GonalityReport rep;
  rep.L = l;
  rep.genus = sectional_genus(l);
  rep.k0 = sr.k0;
  rep.minimal_set = sr.minimal_set;
  rep.case_tag = detail::detect_case(l, sr);
  switch (rep.case_tag) {
    case CaseTag::constant:
      rep.gonality_general = std::max<Int>(sr.k0 + 1, 2);
      break;
    case CaseTag::case_I:
    case CaseTag::case_II:
      rep.gonality_special = sr.k0 + 1;  // = 2
      rep.gonality_general = sr.k0 + 2;  // = 3
      rep.special_family = "curves through a non-very-ample length-2 scheme of |D|";
      break;
    case CaseTag::case_III:
      rep.gonality_special = sr.k0 + 1;
      rep.gonality_general = sr.k0 + 2;
      rep.special_family = "curves through the base point of |-K|";
      break;
  }
  return rep;
}

inline GonalityReport gonality_analysis(const DivisorClass& l) {
  return gonality_analysis(l, dagger_value_structured(l));
}

struct ExceptionalClassification {
  bool exceptional = false;
  Int clifford = 0;
  Int dimension = 1;
  std::optional<DivisorClass> witness;
};

// Exceptional curves (gonality = Clifford index + 3) come in exactly two
// shapes: plane models and a single genus-10 family.
//
//  (i)  Some line pullback D maps |L| onto plane curves of degree L.D: it
//       qualifies when every (-1)-curve orthogonal to D meets L at most
//       once.  Then Clifford dimension 2 and index (min L.D) - 4.
//  (ii) n in {6,7,8} and L = -3K + sum a_i G_i over exactly n-6 pairwise
//       disjoint (-1)-curves with a_i in {2,3}.  Equivalently L + 3K equals
//       3*(sum of R(L)) + 2*(sum of R_1(L)) with |R| + |R_1| = n - 6, all
//       disjoint.  Then genus 10, Clifford dimension 3 and index 3, with
//       witness -K + sum G_i.
inline ExceptionalClassification exceptional_classify(const DivisorClass& l) {
  if (!is_nef(l)) throw std::invalid_argument("class is not nef");
  if (sectional_genus(l) < 4)
    throw std::invalid_argument("exceptionality is only defined for genus >= 4");
  const SurfaceId s = l.surface();
  const CurveClassTable& tab = curve_table(s);

  std::optional<Int> best;
  std::optional<DivisorClass> best_witness;
  for (const DivisorClass& d : tab.line_pullbacks) {
    bool ok = true;
    for (const DivisorClass& g : tab.neg_curves) {
      if (intersect(g, d) == 0 && intersect(g, l) > 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Int ld = intersect(l, d);
    if (!best || ld < *best) {
      best = ld;
      best_witness = d;
    }
  }
  if (best) return {true, *best - 4, 2, best_witness};

  if (s.n >= 6) {
    RSets rs = r_sets(l);
    if (static_cast<int>(rs.r0.size() + rs.r1.size()) == s.n - 6) {
      bool disjoint = true;
      for (std::size_t i = 0; i < rs.r1.size() && disjoint; ++i) {
        for (std::size_t j = i + 1; j < rs.r1.size(); ++j)
          if (intersect(rs.r1[i], rs.r1[j]) != 0) { disjoint = false; break; }
        for (const DivisorClass& g0 : rs.r0)
          if (intersect(rs.r1[i], g0) != 0) { disjoint = false; break; }
      }
      if (disjoint) {
        DivisorClass expected = 3 * anticanonical_class(s);  // -3K
        DivisorClass witness = anticanonical_class(s);
        for (const DivisorClass& g : rs.r0) {
          expected = expected + 3 * g;
          witness = witness + g;
        }
        for (const DivisorClass& g : rs.r1) {
          expected = expected + 2 * g;
          witness = witness + g;
        }
        if (l == expected) {
          if (sectional_genus(l) != 10)
            throw std::logic_error("genus-10 exceptional pattern with wrong genus");
          return {true, 3, 3, witness};
        }
      }
    }
  }
  return {};
}

inline CliffordReport clifford_analysis(const DivisorClass& l, const GonalityReport& gon) {
  CliffordReport rep;
  if (gon.genus < 4) return rep;  // Clifford index undefined below genus 4
  rep.defined = true;
  if (gon.case_tag == CaseTag::case_III) {
    rep.clifford_special = gon.k0 - 1;
    rep.clifford_general = gon.k0;
    rep.clifford_dimension = 1;
    return rep;
  }
  if (gon.case_tag != CaseTag::constant)
    throw std::logic_error("gonality cases I/II always have genus 3");
  Int gamma = gon.gonality_general;
  ExceptionalClassification exc = exceptional_classify(l);
  if (exc.exceptional) {
    if (exc.clifford != gamma - 3)
      throw std::logic_error("exceptional witness disagrees with the gonality search");
    rep.clifford_general = exc.clifford;
    rep.exceptional = true;
    rep.clifford_dimension = exc.dimension;
    rep.exceptional_witness = exc.witness;
  } else {
    rep.clifford_general = gamma - 2;
    rep.clifford_dimension = 1;
  }
  return rep;
}

inline CliffordReport clifford_analysis(const DivisorClass& l) {
  return clifford_analysis(l, gonality_analysis(l));
}

namespace detail {

// Nef genus-one classes with D^2 = -K.D = square, memoized.  None exist
// when K^2 > square (Hodge index).
inline const std::vector<DivisorClass>& elliptic_classes(SurfaceId s, Int square) {
  static std::mutex mu;
  static std::map<std::pair<int, Int>, std::unique_ptr<const std::vector<DivisorClass>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(s.n, square);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<DivisorClass> all;
    if (s.degree() <= square)
      for (const DivisorClass& d : nef_classes_of_degree(s, square))
        if (self_intersection(d) == square) all.push_back(d);
    it = cache.emplace(key, std::make_unique<const std::vector<DivisorClass>>(std::move(all))).first;
  }
  return *it->second;
}

inline const char* z_applicability(Int len) {
  switch (len) {
    case 2: return "curve passes through a length-2 scheme where D fails to be very ample";
    case 3: return "curve passes through a length-3 scheme where D fails to be 2-very ample";
    default: return "curve passes through a length-4 scheme where D fails to be 3-very ample";
  }
}

}  // namespace detail

// Every pencil class computing the gonality of the chosen subfamily.  The
// emitted degree always satisfies L.D - (correction length) = gonality.
inline std::vector<PencilDescriptor> pencils(const DivisorClass& l, const GonalityReport& gon,
                                             Subfamily subfamily) {
  const SurfaceId s = l.surface();
  const CurveClassTable& tab = curve_table(s);
  std::vector<PencilDescriptor> out;
  auto add = [&](std::string clause, std::optional<DivisorClass> d, std::string corr,
                 std::string appl) {
    out.push_back({std::move(clause), std::move(d), std::move(corr), std::move(appl)});
  };

  if (gon.case_tag == CaseTag::constant) {
    if (subfamily == Subfamily::special)
      throw std::invalid_argument("subfamily=special only applies to the non-constant cases");
    const Int gamma = gon.gonality_general;
    const Int genus = gon.genus;
    for (const DivisorClass& d : tab.conic_classes)
      if (intersect(l, d) == gamma)
        add("a.i", d, "none", "any smooth curve in |L|");
    for (const DivisorClass& d : tab.line_pullbacks)
      if (intersect(l, d) == gamma + 1)
        add("a.ii", d, "minus 1 point", "any smooth curve in |L|");
    if (s.n == 8 && anticanonical_degree(l) == gamma + 1)
      add("a.iii", anticanonical_class(s), "minus base point x", "curve passes through x");
    for (const DivisorClass& d : detail::elliptic_classes(s, 2))
      if (intersect(l, d) == gamma + 2)
        add("a.iv", d, "minus Z2", detail::z_applicability(2));
    bool v_allowed = (gamma == 3 && genus == 4) || (gamma == 4 && genus == 5) ||
                     (gamma == 6 && genus == 10);
    if (v_allowed)
      for (const DivisorClass& d : detail::elliptic_classes(s, 3))
        if (intersect(l, d) == gamma + 3)
          add("a.v", d, "minus Z3", detail::z_applicability(3));
    if (gamma == 4 && genus == 5)
      for (const DivisorClass& d : detail::elliptic_classes(s, 4))
        if (intersect(l, d) == gamma + 4)
          add("a.vi", d, "minus Z4", detail::z_applicability(4));
    return out;
  }

  if (gon.case_tag == CaseTag::case_I || gon.case_tag == CaseTag::case_II) {
    const DivisorClass& d = gon.minimal_set.front().D;  // -K (I) or -K+G (II)
    if (subfamily == Subfamily::special)
      add("b.hyper", d, "minus Z2", detail::z_applicability(2));
    else
      add("b.trig", d, "minus 1 point", "any smooth curve in |L|");
    return out;
  }

  // case III; d here is the general gonality
  const Int d_gon = gon.k0 + 2;
  const DivisorClass antik = anticanonical_class(s);
  if (subfamily == Subfamily::special) {
    add("c.i", antik, "minus base point x", "curve passes through x");
    return out;
  }
  add("c.i", antik, "none", "curve does not pass through x");
  if (d_gon == 4)
    add("c.ii", 2 * antik, "minus Z4 = D1 cap D2 for D1,D2 in |-2K|",
        "curve does not pass through x");
  for (const DivisorClass& d : tab.conic_classes)
    if (intersect(l, d) == d_gon)
      add("c.iii", d, "none", "curve does not pass through x");
  if (d_gon == 3)
    for (const DivisorClass& d : tab.line_pullbacks)
      if (intersect(l, d) == d_gon + 1)
        add("c.iv", d, "minus 1 point", "curve does not pass through x");
  for (const DivisorClass& d : detail::elliptic_classes(s, 2))
    if (intersect(l, d) == d_gon + 2)
      add("c.v", d, "minus Z2", detail::z_applicability(2));
  return out;
}

inline std::vector<PencilDescriptor> pencils(const DivisorClass& l, Subfamily subfamily) {
  return pencils(l, gonality_analysis(l), subfamily);
}

// Is the morphism defined by a base point free class L birational onto its
// image (an isomorphism away from contracted (-1)-curves)?  Numerically:
// L^2 > 0, (L^2, -K.L) != (2,2), L != -2K on S_8 and L != -K on S_7.
inline bool morphism_birationality(const DivisorClass& l) {
  if (!is_base_point_free(l))
    throw std::invalid_argument("morphism test needs a base point free class");
  const SurfaceId s = l.surface();
  if (self_intersection(l) <= 0) return false;
  if (self_intersection(l) == 2 && anticanonical_degree(l) == 2) return false;
  if (s.n == 8 && l == 2 * anticanonical_class(s)) return false;
  if (s.n == 7 && l == anticanonical_class(s)) return false;
  return true;
}

inline AnalysisReport analyze(const DivisorClass& l, Subfamily subfamily = Subfamily::general) {
  AnalysisReport rep;
  rep.gonality = gonality_analysis(l);
  rep.clifford = clifford_analysis(l, rep.gonality);
  rep.pencils = pencils(l, rep.gonality, subfamily);
  rep.subfamily = subfamily;
  return rep;
}

}  // namespace dpgon
