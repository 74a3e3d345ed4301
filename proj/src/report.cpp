#include "cvforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace cvforge {

bool StructureReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.pass; });
}

double StructureReport::max_residual() const {
  double m = 0.0;
  for (auto& e : entries)
    if (!e.lower_bound) m = std::max(m, e.residual);
  return m;
}

const ReportEntry* StructureReport::find(const std::string& tag) const {
  for (auto& e : entries)
    if (e.tag == tag) return &e;
  return nullptr;
}

std::vector<std::string> StructureReport::failing() const {
  std::vector<std::string> out;
  for (auto& e : entries)
    if (!e.pass) out.push_back(e.tag);
  return out;
}

ReportEntry& StructureReport::add(const std::string& tag, double residual, double threshold) {
  ReportEntry e;
  e.tag = tag;
  e.residual = residual;
  e.threshold = threshold;
  e.pass = residual < threshold;
  entries.push_back(e);
  return entries.back();
}

ReportEntry& StructureReport::add_lower(const std::string& tag, double value, double threshold) {
  ReportEntry e;
  e.tag = tag;
  e.residual = value;
  e.threshold = threshold;
  e.lower_bound = true;
  e.pass = value >= threshold;
  entries.push_back(e);
  return entries.back();
}

ReportEntry& StructureReport::add_flag(const std::string& tag, bool ok, const std::string& note) {
  ReportEntry e;
  e.tag = tag;
  e.residual = ok ? 0.0 : 1.0;
  e.threshold = 0.5;
  e.pass = ok;
  e.note = note;
  entries.push_back(e);
  return entries.back();
}

void StructureReport::merge(const StructureReport& other, const std::string& prefix) {
  for (auto e : other.entries) {
    e.tag = prefix + e.tag;
    entries.push_back(e);
  }
}

std::string StructureReport::to_text() const {
  std::ostringstream os;
  os << name << ": " << (pass() ? "PASS" : "FAIL") << "\n";
  for (auto& e : entries) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-4s %-36s %s %.3e (threshold %.3e)", e.pass ? "ok" : "FAIL",
                  e.tag.c_str(), e.lower_bound ? "value" : "residual", e.residual, e.threshold);
    os << buf;
    if (!e.note.empty()) os << "  " << e.note;
    os << "\n";
  }
  return os.str();
}

double residual_norm(const MatrixJet& m) { return m.max_abs(); }

double residual_norm(const std::vector<MatrixJet>& ms) {
  double r = 0.0;
  for (auto& m : ms) r = std::max(r, m.max_abs());
  return r;
}

}  // namespace cvforge
