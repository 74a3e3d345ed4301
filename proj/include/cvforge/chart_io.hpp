#pragma once
// Chart files: one JSON document, schema "cvforge/1".
//
//   {schema, m, n, d, zorder, w, tangent?, tensors: {name: [entry...]}}
//   entry = {row, col, precision?, terms: [{t: [...], tbar: [...], re, im}]}
//
// Tensor names: C0..C{m-1}, U, V, Q, g, h, kappa, gamma10_i, gamma01_i, and
// for an attached F-manifold mult0..mult{m-1}, e, E. Zero entries are
// omitted; absent tensors stay absent. precision is written only for
// truncated jets.

#include <optional>
#include <string>

#include "cvforge/unfolding.hpp"

namespace cvforge {

inline constexpr const char* kChartSchema = "cvforge/1";

struct ChartFile {
  ChartBundle bundle;
  std::optional<FStructure> f;
};

std::string export_chart(const ChartBundle& b, const FStructure* f = nullptr);
// SchemaError for malformed documents (with the offending field), then
// InvariantViolation naming the first failed invariant.
ChartFile import_chart(const std::string& text);
ChartFile parse_chart(const std::string& path);
void write_chart(const std::string& path, const ChartBundle& b, const FStructure* f = nullptr);

// Load-time invariants: holomorphic g, C, U, V; g symmetric; h hermitian;
// kappa involutive; H = G k. Throws InvariantViolation.
void validate_chart(const ChartBundle& b, double tol = 1e-10);

}  // namespace cvforge
