// Command-line frontend: analysis of a single class, curve-class tables,
// batch sweeps and the audit harness.
//
// Exit codes: 0 success, 1 validation failure or audit discrepancy,
// 2 usage error (including malformed class strings).

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "dpgon/json_io.hpp"
#include "dpgon/tabulate.hpp"

namespace {

using namespace dpgon;

std::string opt_str(const std::optional<Int>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

void print_human(const AnalysisReport& rep) {
  const GonalityReport& g = rep.gonality;
  std::cout << "class: " << format_class(g.L) << "\n";
  std::cout << "surface: S_" << g.L.n << " (degree " << g.L.surface().degree() << ")\n";
  std::cout << "genus: " << g.genus << "\n";
  std::cout << "k0: " << g.k0 << "\n";
  std::cout << "minimal_set:";
  for (const auto& c : g.minimal_set)
    std::cout << ' ' << format_class(c.D) << "(value=" << c.value << ",kind=" << to_string(c.kind)
              << ')';
  std::cout << "\n";
  std::cout << "case: " << to_string(g.case_tag) << "\n";
  std::cout << "gonality_general: " << g.gonality_general << "\n";
  std::cout << "gonality_special: " << opt_str(g.gonality_special) << "\n";
  std::cout << "special_family: " << (g.special_family.empty() ? "none" : g.special_family)
            << "\n";
  const CliffordReport& c = rep.clifford;
  std::cout << "clifford_defined: " << (c.defined ? "true" : "false") << "\n";
  std::cout << "clifford_general: " << opt_str(c.clifford_general) << "\n";
  std::cout << "clifford_special: " << opt_str(c.clifford_special) << "\n";
  std::cout << "exceptional: " << (c.exceptional ? "true" : "false") << "\n";
  std::cout << "clifford_dimension: " << opt_str(c.clifford_dimension) << "\n";
  std::cout << "exceptional_witness: "
            << (c.exceptional_witness ? format_class(*c.exceptional_witness) : "none") << "\n";
  std::cout << "pencils (" << to_string(rep.subfamily) << "):\n";
  for (const auto& p : rep.pencils)
    std::cout << "  " << p.clause << "  D=" << (p.D ? format_class(*p.D) : "none")
              << "  correction=" << p.correction << "  applicability=" << p.applicability << "\n";
}

int run_analyze(const std::string& class_str, bool as_json, const std::string& subfamily_str) {
  DivisorClass l = parse_class(class_str);
  if (!is_nef(l)) {
    std::cerr << "error: class is not nef\n";
    return 1;
  }
  if (sectional_genus(l) < 2) {
    std::cerr << "error: sectional genus " << sectional_genus(l) << " is < 2\n";
    return 1;
  }
  AnalysisReport rep = analyze(l, subfamily_from_string(subfamily_str));
  if (as_json)
    std::cout << to_json(rep).dump(2) << "\n";
  else
    print_human(rep);
  return 0;
}

int run_curves(int n, const std::string& type, bool as_json) {
  const CurveClassTable& tab = curve_table(SurfaceId(n));
  const std::vector<DivisorClass>* list = nullptr;
  if (type == "neg1") list = &tab.neg_curves;
  else if (type == "conic") list = &tab.conic_classes;
  else if (type == "sq1") list = &tab.line_pullbacks;
  else {
    std::cerr << "error: unknown curve type '" << type << "'\n";
    return 2;
  }
  if (as_json) {
    json arr = json::array();
    for (const auto& d : *list) arr.push_back(format_class(d));
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  std::cout << "a";
  for (int i = 1; i <= n; ++i) std::cout << ",b_" << i;
  std::cout << ",self_int,kdeg\n";
  for (const auto& d : *list) {
    std::cout << d.a;
    for (int i = 0; i < n; ++i) std::cout << ',' << d.b[i];
    std::cout << ',' << self_intersection(d) << ',' << anticanonical_degree(d) << "\n";
  }
  return 0;
}

int run_sweep(int n, Int max_kdeg, const std::string& out, const std::string& format, Int min_genus,
              int jobs) {
  SweepSpec spec;
  spec.surface = SurfaceId(n);
  spec.max_kdeg = max_kdeg;
  spec.require_genus_min = min_genus;
  spec.output_path = out;
  spec.format = format == "json" ? SweepSpec::Format::json : SweepSpec::Format::csv;
  spec.jobs = jobs;
  std::size_t rows = sweep(spec);
  std::cout << "wrote " << rows << " rows to " << out << "\n";
  return 0;
}

int run_audit(int n, Int max_kdeg, int jobs) {
  AuditOptions opts;
  opts.jobs = jobs;
  auto discrepancies = audit(SurfaceId(n), max_kdeg, opts);
  for (const auto& d : discrepancies)
    std::cout << "DISCREPANCY " << format_class(d.L) << " [" << d.check << "] " << d.detail
              << "\n";
  std::cout << "audit: surface S_" << n << ", max_kdeg " << max_kdeg << ", "
            << discrepancies.size() << " discrepancies\n";
  return discrepancies.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gonality / Clifford index analysis of curve classes on blown-up planes"};
  app.require_subcommand(1);

  std::string class_str, subfamily = "general", type, out, format = "csv";
  bool as_json = false;
  int n = 0, jobs = 0;
  dpgon::Int max_kdeg = 2, min_genus = 2;

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze one nef class");
  analyze_cmd->add_option("--class", class_str, "class in n:a;b1,...,bn form")->required();
  analyze_cmd->add_flag("--json", as_json, "machine-readable output");
  analyze_cmd->add_option("--subfamily", subfamily, "general|special")
      ->check(CLI::IsMember({"general", "special"}));

  CLI::App* curves_cmd = app.add_subcommand("curves", "list special curve classes");
  curves_cmd->add_option("--surface", n, "surface index 0..8")->required()
      ->check(CLI::Range(0, 8));
  curves_cmd->add_option("--type", type, "neg1|conic|sq1")->required()
      ->check(CLI::IsMember({"neg1", "conic", "sq1"}));
  curves_cmd->add_flag("--json", as_json, "JSON array of class strings");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "analyze a bounded nef family into a file");
  sweep_cmd->add_option("--surface", n)->required()->check(CLI::Range(0, 8));
  sweep_cmd->add_option("--max-kdeg", max_kdeg, "bound on -K.L")->required();
  sweep_cmd->add_option("--out", out, "output path")->required();
  sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--min-genus", min_genus, "minimal sectional genus (default 2)");
  sweep_cmd->add_option("--jobs", jobs, "worker count (default: available parallelism)");

  CLI::App* audit_cmd = app.add_subcommand("audit", "cross-check searches over a bounded family");
  audit_cmd->add_option("--surface", n)->required()->check(CLI::Range(0, 8));
  audit_cmd->add_option("--max-kdeg", max_kdeg, "bound on -K.L")->required();
  audit_cmd->add_option("--jobs", jobs, "worker count (default: available parallelism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(analyze_cmd)) return run_analyze(class_str, as_json, subfamily);
    if (app.got_subcommand(curves_cmd)) return run_curves(n, type, as_json);
    if (app.got_subcommand(sweep_cmd))
      return run_sweep(n, max_kdeg, out, format, min_genus, jobs);
    if (app.got_subcommand(audit_cmd)) return run_audit(n, max_kdeg, jobs);
  } catch (const dpgon::ClassParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
