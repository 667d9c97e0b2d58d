#pragma once

// JSON serialization of the analysis reports.  Field names are part of the
// machine interface and must stay stable; divisor classes travel as the
// text format "n:a;b1,...,bn".

#include <json.hpp>  // vendored nlohmann/json

#include "dpgon/gonality.hpp"

namespace dpgon {

using json = nlohmann::ordered_json;

inline json to_json(const DaggerCertificate& c) {
  return json{{"D", format_class(c.D)}, {"value", c.value}, {"kind", to_string(c.kind)}};
}

inline json to_json(const GonalityReport& r) {
  json mset = json::array();
  for (const auto& c : r.minimal_set) mset.push_back(to_json(c));
  json j;
  j["L"] = format_class(r.L);
  j["genus"] = r.genus;
  j["k0"] = r.k0;
  j["minimal_set"] = std::move(mset);
  j["case_tag"] = to_string(r.case_tag);
  j["gonality_general"] = r.gonality_general;
  j["gonality_special"] = r.gonality_special ? json(*r.gonality_special) : json(nullptr);
  j["special_family"] = r.special_family.empty() ? json(nullptr) : json(r.special_family);
  return j;
}

inline json to_json(const CliffordReport& r) {
  json j;
  j["defined"] = r.defined;
  j["clifford_general"] = r.clifford_general ? json(*r.clifford_general) : json(nullptr);
  j["clifford_special"] = r.clifford_special ? json(*r.clifford_special) : json(nullptr);
  j["exceptional"] = r.exceptional;
  j["clifford_dimension"] = r.clifford_dimension ? json(*r.clifford_dimension) : json(nullptr);
  j["exceptional_witness"] =
      r.exceptional_witness ? json(format_class(*r.exceptional_witness)) : json(nullptr);
  return j;
}

inline json to_json(const PencilDescriptor& p) {
  json j;
  j["clause"] = p.clause;
  j["D"] = p.D ? json(format_class(*p.D)) : json(nullptr);
  j["correction"] = p.correction;
  j["applicability"] = p.applicability;
  return j;
}

inline json to_json(const AnalysisReport& r) {
  json pens = json::array();
  for (const auto& p : r.pencils) pens.push_back(to_json(p));
  json j;
  j["gonality"] = to_json(r.gonality);
  j["clifford"] = to_json(r.clifford);
  j["pencils"] = std::move(pens);
  j["subfamily"] = to_string(r.subfamily);
  return j;
}

// --- parsing (used by the machine-output round-trip contract) -------------

inline CertKind cert_kind_from_string(const std::string& s) {
  if (s == "conic") return CertKind::conic;
  if (s == "square_one") return CertKind::square_one;
  if (s == "elliptic") return CertKind::elliptic;
  if (s == "other") return CertKind::other;
  throw std::invalid_argument("unknown certificate kind: " + s);
}

inline CaseTag case_tag_from_string(const std::string& s) {
  if (s == "constant") return CaseTag::constant;
  if (s == "case_I") return CaseTag::case_I;
  if (s == "case_II") return CaseTag::case_II;
  if (s == "case_III") return CaseTag::case_III;
  throw std::invalid_argument("unknown case tag: " + s);
}

inline Subfamily subfamily_from_string(const std::string& s) {
  if (s == "general") return Subfamily::general;
  if (s == "special") return Subfamily::special;
  throw std::invalid_argument("unknown subfamily: " + s);
}

inline GonalityReport gonality_report_from_json(const json& j) {
  GonalityReport r;
  r.L = parse_class(j.at("L").get<std::string>());
  r.genus = j.at("genus").get<Int>();
  r.k0 = j.at("k0").get<Int>();
  for (const auto& c : j.at("minimal_set")) {
    DaggerCertificate cert;
    cert.D = parse_class(c.at("D").get<std::string>());
    cert.value = c.at("value").get<Int>();
    cert.kind = cert_kind_from_string(c.at("kind").get<std::string>());
    r.minimal_set.push_back(cert);
  }
  r.case_tag = case_tag_from_string(j.at("case_tag").get<std::string>());
  r.gonality_general = j.at("gonality_general").get<Int>();
  if (!j.at("gonality_special").is_null()) r.gonality_special = j.at("gonality_special").get<Int>();
  if (!j.at("special_family").is_null()) r.special_family = j.at("special_family").get<std::string>();
  return r;
}

inline CliffordReport clifford_report_from_json(const json& j) {
  CliffordReport r;
  r.defined = j.at("defined").get<bool>();
  if (!j.at("clifford_general").is_null()) r.clifford_general = j.at("clifford_general").get<Int>();
  if (!j.at("clifford_special").is_null()) r.clifford_special = j.at("clifford_special").get<Int>();
  r.exceptional = j.at("exceptional").get<bool>();
  if (!j.at("clifford_dimension").is_null())
    r.clifford_dimension = j.at("clifford_dimension").get<Int>();
  if (!j.at("exceptional_witness").is_null())
    r.exceptional_witness = parse_class(j.at("exceptional_witness").get<std::string>());
  return r;
}

inline AnalysisReport analysis_report_from_json(const json& j) {
  AnalysisReport r;
  r.gonality = gonality_report_from_json(j.at("gonality"));
  r.clifford = clifford_report_from_json(j.at("clifford"));
  for (const auto& p : j.at("pencils")) {
    PencilDescriptor d;
    d.clause = p.at("clause").get<std::string>();
    if (!p.at("D").is_null()) d.D = parse_class(p.at("D").get<std::string>());
    d.correction = p.at("correction").get<std::string>();
    d.applicability = p.at("applicability").get<std::string>();
    r.pencils.push_back(d);
  }
  r.subfamily = subfamily_from_string(j.at("subfamily").get<std::string>());
  return r;
}

}  // namespace dpgon
