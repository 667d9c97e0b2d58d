#pragma once

// Batch sweeps over bounded families of nef classes, flat-file persistence,
// and the structured-vs-brute-force audit harness.
//
// The family {nef L : 1 <= -K.L <= B} is finite because -K is ample, and is
// enumerated degree by degree with the Hodge bound L^2 <= (-K.L)^2 / K^2.
// Rows are computed independently (optionally in parallel) and merged in
// canonical order, so output files are byte-identical across runs and
// worker counts.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dpgon/gonality.hpp"
#include "dpgon/json_io.hpp"

namespace dpgon {

struct SweepSpec {
  SurfaceId surface;
  Int max_kdeg = 2;
  Int require_genus_min = 2;
  std::string output_path;
  enum class Format { csv, json } format = Format::csv;
  int jobs = 0;  // 0 = available parallelism
};

struct Discrepancy {
  DivisorClass L;
  std::string check;
  std::string detail;
};

struct AuditOptions {
  DaggerSearchOptions structured_options{};
  int jobs = 0;
};

inline constexpr const char* sweep_csv_header =
    "surface,class,genus,k0,case,gon_special,gon_general,"
    "cliff_defined,cliff_special,cliff_general,exceptional,cliff_dim,pencil_clauses";

// All nef classes with 1 <= -K.L <= max_kdeg, lexicographically ordered.
inline std::vector<DivisorClass> enumerate_nef(SurfaceId s, Int max_kdeg) {
  if (max_kdeg < 1) throw std::invalid_argument("enumerate_nef needs max_kdeg >= 1");
  std::vector<DivisorClass> out;
  for (Int d = 1; d <= max_kdeg; ++d) {
    const auto& part = nef_classes_of_degree(s, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  if (jobs == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::size_t chunk = (count + jobs - 1) / jobs;
  for (int w = 0; w < jobs; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

inline std::string opt_to_string(const std::optional<Int>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

inline std::string pencil_clause_labels(const DivisorClass& l, const AnalysisReport& rep) {
  std::vector<std::string> labels;
  auto collect = [&](const std::vector<PencilDescriptor>& ps) {
    for (const auto& p : ps)
      if (std::find(labels.begin(), labels.end(), p.clause) == labels.end())
        labels.push_back(p.clause);
  };
  collect(rep.pencils);
  if (rep.gonality.case_tag != CaseTag::constant)
    collect(pencils(l, rep.gonality, Subfamily::special));
  std::sort(labels.begin(), labels.end());
  std::string joined;
  for (const auto& s : labels) {
    if (!joined.empty()) joined += '|';
    joined += s;
  }
  return joined;
}

inline std::string sweep_csv_row(const DivisorClass& l, const AnalysisReport& rep) {
  std::ostringstream os;
  os << l.n << ",\"" << format_class(l) << "\"," << rep.gonality.genus << ','
     << rep.gonality.k0 << ',' << to_string(rep.gonality.case_tag) << ','
     << opt_to_string(rep.gonality.gonality_special) << ',' << rep.gonality.gonality_general
     << ',' << (rep.clifford.defined ? "true" : "false") << ','
     << opt_to_string(rep.clifford.clifford_special) << ','
     << opt_to_string(rep.clifford.clifford_general) << ','
     << (rep.clifford.exceptional ? "true" : "false") << ','
     << opt_to_string(rep.clifford.clifford_dimension) << ',' << pencil_clause_labels(l, rep);
  return os.str();
}

}  // namespace detail

// Writes one row per enumerated class of genus >= require_genus_min and
// returns the number of rows.  A failed write removes the partial file.
inline std::size_t sweep(const SweepSpec& spec) {
  std::vector<DivisorClass> family = enumerate_nef(spec.surface, spec.max_kdeg);
  std::vector<DivisorClass> rows_l;
  for (const DivisorClass& l : family)
    if (sectional_genus(l) >= spec.require_genus_min) rows_l.push_back(l);

  std::vector<std::string> rows(rows_l.size());
  detail::parallel_for(rows_l.size(), spec.jobs, [&](std::size_t i) {
    AnalysisReport rep = analyze(rows_l[i]);
    if (spec.format == SweepSpec::Format::csv) {
      rows[i] = detail::sweep_csv_row(rows_l[i], rep);
    } else {
      json j = to_json(rep);
      j["pencil_clauses"] = detail::pencil_clause_labels(rows_l[i], rep);
      rows[i] = j.dump();
    }
  });

  try {
    std::ofstream out(spec.output_path);
    if (!out) throw std::runtime_error("cannot open output file: " + spec.output_path);
    if (spec.format == SweepSpec::Format::csv) {
      out << sweep_csv_header << '\n';
      for (const auto& r : rows) out << r << '\n';
    } else {
      out << "[\n";
      for (std::size_t i = 0; i < rows.size(); ++i)
        out << rows[i] << (i + 1 < rows.size() ? ",\n" : "\n");
      out << "]\n";
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + spec.output_path);
  } catch (...) {
    std::remove(spec.output_path.c_str());
    throw;
  }
  return rows.size();
}

namespace detail {

// Numerical side of the case (III) characterization: on S_8 with k0 >= 1,
// the unique minimal certificate is -K exactly when -K.L = k0+2, L is
// ample, every conic class meets L in >= k0+2, every line pullback meets L
// in >= k0+3 when (k0, L^2) = (2, 8), and every (-1)-curve meets L in >= 2
// when L^2 >= 8.
inline bool case3_numeric(const DivisorClass& l, Int k0) {
  const SurfaceId s = l.surface();
  if (s.n != 8 || k0 < 1) return false;
  if (anticanonical_degree(l) != k0 + 2) return false;
  if (!is_ample(l)) return false;
  const CurveClassTable& tab = curve_table(s);
  for (const DivisorClass& d : tab.conic_classes)
    if (intersect(l, d) < k0 + 2) return false;
  Int l2 = self_intersection(l);
  if (k0 == 2 && l2 == 8)
    for (const DivisorClass& d : tab.line_pullbacks)
      if (intersect(l, d) < k0 + 3) return false;
  if (l2 >= 8)
    for (const DivisorClass& g : tab.neg_curves)
      if (intersect(l, g) < 2) return false;
  return true;
}

inline bool same_class_set(const std::vector<DaggerCertificate>& xs,
                           const std::vector<DaggerCertificate>& ys) {
  if (xs.size() != ys.size()) return false;
  std::vector<DivisorClass> a, b;
  for (const auto& c : xs) a.push_back(c.D);
  for (const auto& c : ys) b.push_back(c.D);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

inline std::string class_set_string(const std::vector<DaggerCertificate>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ' ';
    s += format_class(xs[i].D);
  }
  return s + "}";
}

inline void audit_one(const DivisorClass& l, const AuditOptions& opts,
                      std::vector<Discrepancy>& out) {
  DaggerSearchResult structured = dagger_value_structured(l, opts.structured_options);
  DaggerSearchResult brute = dagger_value_bruteforce(l);

  if (structured.k0 != brute.k0)
    out.push_back({l, "k0",
                   "structured " + std::to_string(structured.k0) + " vs brute " +
                       std::to_string(brute.k0)});
  else if (!same_class_set(structured.minimal_set, brute.minimal_set))
    out.push_back({l, "minimal_set",
                   "structured " + class_set_string(structured.minimal_set) + " vs brute " +
                       class_set_string(brute.minimal_set)});

  Int km = k_max(l);
  Int expected_km = std::max<Int>(brute.k0 - 1, 0);
  if (km != expected_km)
    out.push_back({l, "k_max",
                   "k_max " + std::to_string(km) + " but brute k0 " + std::to_string(brute.k0)});

  // monotonicity and the genus / self-intersection consequences
  bool prev = true;
  for (Int k = 1; k <= km + 2; ++k) {
    bool cur = is_birationally_kva(l, k);
    if (cur && !prev)
      out.push_back({l, "kva_monotonicity", "holds at k=" + std::to_string(k) + " but not below"});
    if (cur && (sectional_genus(l) < 2 * k + 1 || self_intersection(l) < 4 * k + 3))
      out.push_back({l, "kva_consequence",
                     "k=" + std::to_string(k) + " but genus " +
                         std::to_string(sectional_genus(l)) + ", L^2 " +
                         std::to_string(self_intersection(l))});
    prev = cur;
  }
  if (km >= 1 && !is_birationally_kva(l, km))
    out.push_back({l, "k_max", "not birationally k-very ample at its own k_max"});
  if (is_birationally_kva(l, km + 1))
    out.push_back({l, "k_max", "still birationally k-very ample above k_max"});

  GonalityReport gon = gonality_analysis(l, structured);
  bool is_case3 = gon.case_tag == CaseTag::case_III;
  if (is_case3 != case3_numeric(l, structured.k0))
    out.push_back({l, "case_III_biconditional",
                   std::string("tag ") + to_string(gon.case_tag) + " vs numeric " +
                       (case3_numeric(l, structured.k0) ? "case_III" : "not case_III")});

  if (gon.genus >= 4) {
    CliffordReport cliff = clifford_analysis(l, gon);
    Int diff = gon.gonality_general - *cliff.clifford_general;
    if (diff != 2 && diff != 3)
      out.push_back({l, "gonality_clifford_gap", "gap " + std::to_string(diff)});
    if ((diff == 3) != cliff.exceptional)
      out.push_back({l, "gonality_clifford_gap", "gap-3 and exceptionality disagree"});
    if (gon.gonality_special &&
        *gon.gonality_special - *cliff.clifford_special != 2)
      out.push_back({l, "gonality_clifford_gap", "special-subfamily gap is not 2"});
  }
}

}  // namespace detail

// Runs the full cross-check battery over {nef L : genus >= 2, -K.L <= B}.
// Returns the (machine-readable) discrepancies; an empty list is success.
inline std::vector<Discrepancy> audit(SurfaceId s, Int max_kdeg, AuditOptions opts = {}) {
  std::vector<DivisorClass> family;
  for (const DivisorClass& l : enumerate_nef(s, max_kdeg))
    if (sectional_genus(l) >= 2) family.push_back(l);

  curve_table(s);  // populate shared tables before workers start
  std::vector<std::vector<Discrepancy>> per(family.size());
  detail::parallel_for(family.size(), opts.jobs, [&](std::size_t i) {
    try {
      detail::audit_one(family[i], opts, per[i]);
    } catch (const std::exception& e) {
      per[i].push_back({family[i], "exception", e.what()});
    }
  });

  std::vector<Discrepancy> out;
  for (auto& v : per) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace dpgon
