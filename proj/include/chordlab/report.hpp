#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chordlab/estimate.hpp"
#include "chordlab/verify.hpp"

namespace chordlab {

inline constexpr const char* kSchemaVersion = "v1";
inline constexpr const char* kCsvHeader = "alpha,lhs,lhs_se,rhs,rhs_se,margin,z,verdict";

enum class Format { JSON, CSV };

inline Format parseFormat(const std::string& s) {
  if (s == "json") return Format::JSON;
  if (s == "csv") return Format::CSV;
  throw std::invalid_argument("unknown format '" + s + "' (json|csv)");
}

/// Shortest round-trip decimal; empty for non-finite values.
inline std::string formatDouble(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline Json finiteOrNull(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
inline double numberOrInf(const Json& j) { return j.is_null() ? kInf : j.get<double>(); }

inline Json estimateJson(const Estimate& e) {
  return Json{{"value", finiteOrNull(e.value)},
              {"std_error", finiteOrNull(e.stdError)},
              {"n_samples", e.nSamples},
              {"tail_index", finiteOrNull(e.tailIndex)}};
}

inline Estimate estimateFromJson(const Json& j) {
  Estimate e;
  e.value = numberOrInf(j.at("value"));
  e.stdError = numberOrInf(j.at("std_error"));
  e.nSamples = j.at("n_samples").get<std::uint64_t>();
  e.tailIndex = numberOrInf(j.at("tail_index"));
  return e;
}

inline Json reportJson(const VerificationReport& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["check_id"] = r.checkId;
  j["kind"] = r.kind == CheckKind::INEQUALITY ? "inequality" : "identity";
  j["lhs"] = estimateJson(r.lhs);
  j["rhs"] = estimateJson(r.rhs);
  j["margin"] = finiteOrNull(r.margin);
  j["margin_std_error"] = finiteOrNull(r.marginSe);
  j["tolerance"] = r.tolerance;
  j["z"] = r.zScore && std::isfinite(*r.zScore) ? Json(*r.zScore) : Json(nullptr);
  j["verdict"] = verdictName(r.verdict);
  j["tail_status"] = tailStatus(r.tailIndex());
  j["note"] = r.note;
  j["metadata"] = r.metadata;
  return j;
}

inline VerificationReport reportFromJson(const Json& j) {
  if (j.at("schema").get<std::string>() != kSchemaVersion) throw std::invalid_argument("unsupported report schema");
  VerificationReport r;
  r.checkId = j.at("check_id").get<std::string>();
  r.kind = j.at("kind").get<std::string>() == "inequality" ? CheckKind::INEQUALITY : CheckKind::IDENTITY;
  r.lhs = estimateFromJson(j.at("lhs"));
  r.rhs = estimateFromJson(j.at("rhs"));
  r.margin = numberOrInf(j.at("margin"));
  r.marginSe = numberOrInf(j.at("margin_std_error"));
  r.tolerance = j.at("tolerance").get<double>();
  if (!j.at("z").is_null()) r.zScore = j.at("z").get<double>();
  r.verdict = parseVerdict(j.at("verdict").get<std::string>());
  r.note = j.at("note").get<std::string>();
  r.metadata = j.at("metadata");
  return r;
}

inline std::string csvRow(const VerificationReport& r) {
  std::string alpha;
  if (r.metadata.contains("alpha") && r.metadata["alpha"].is_number()) alpha = formatDouble(r.metadata["alpha"].get<double>());
  std::string z = r.zScore ? formatDouble(*r.zScore) : "";
  return alpha + "," + formatDouble(r.lhs.value) + "," + formatDouble(r.lhs.stdError) + "," + formatDouble(r.rhs.value) +
         "," + formatDouble(r.rhs.stdError) + "," + formatDouble(r.margin) + "," + z + "," + verdictName(r.verdict);
}

/// Deterministic serialization of a nonempty report list.
inline std::string emitReport(const std::vector<VerificationReport>& reports, Format format) {
  if (reports.empty()) throw std::invalid_argument("emitReport: no reports to emit");
  if (format == Format::CSV) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& r : reports) out += csvRow(r) + "\n";
    return out;
  }
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(reportJson(r));
  Json doc{{"schema", kSchemaVersion}, {"reports", arr}};
  return doc.dump(2) + "\n";
}

inline std::vector<VerificationReport> parseReports(const std::string& text) {
  Json doc = Json::parse(text);
  if (doc.at("schema").get<std::string>() != kSchemaVersion) throw std::invalid_argument("unsupported report schema");
  std::vector<VerificationReport> out;
  for (const auto& j : doc.at("reports")) out.push_back(reportFromJson(j));
  return out;
}

inline void writeOutput(const std::string& path, const std::string& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write output file '" + path + "'");
  os << bytes;
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace chordlab
