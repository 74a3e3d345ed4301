#pragma once

#include <string>
#include <vector>

#include "cvforge/jets.hpp"

namespace cvforge {

struct ReportEntry {
  std::string tag;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
  // When set, the entry passes if residual >= threshold (used for
  // nondegeneracy margins such as a smallest singular value).
  bool lower_bound = false;
  std::string note;
};

struct StructureReport {
  std::string name;
  std::vector<ReportEntry> entries;

  bool pass() const;
  double max_residual() const;  // over upper-bound entries only
  const ReportEntry* find(const std::string& tag) const;
  std::vector<std::string> failing() const;

  ReportEntry& add(const std::string& tag, double residual, double threshold);
  ReportEntry& add_lower(const std::string& tag, double value, double threshold);
  ReportEntry& add_flag(const std::string& tag, bool ok, const std::string& note = "");
  void merge(const StructureReport& other, const std::string& prefix = "");
  std::string to_text() const;
};

// Threshold rule shared by every checker.
inline double pass_threshold(double tol, double input_magnitude) { return tol * (1.0 + input_magnitude); }

class AxiomFailure : public Error {
 public:
  AxiomFailure(const std::string& what, StructureReport rep)
      : Error(ErrorKind::AxiomFailure, what), report_(std::move(rep)) {}
  const StructureReport& report() const { return report_; }

 private:
  StructureReport report_;
};

double residual_norm(const MatrixJet& m);
double residual_norm(const std::vector<MatrixJet>& ms);

}  // namespace cvforge
