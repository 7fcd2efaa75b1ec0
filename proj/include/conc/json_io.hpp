#pragma once

#include <string>

#include "conc/report.hpp"
#include "conc/space.hpp"

namespace conc {

// Space files: {"labels":[...], "distance":[[row-major floats]], "weights":[...]}.
// Loading runs the full construction-time validation.
FiniteMetricProbabilitySpace load_space_json(const std::string& path);
void save_space_json(const FiniteMetricProbabilitySpace& space, const std::string& path);

// Masks: {"members":[indices]} over a space of explicit size.
SubsetMask load_mask_json(const std::string& path, std::size_t space_size);
void save_mask_json(const SubsetMask& mask, const std::string& path);

// Fields: {"values":[...]}.
ScalarField load_field_json(const std::string& path);

// Scenario reports.  JSON numbers are serialized with 17 significant digits
// (lossless double round-trip); files end with a newline.  CSV flattens the
// checks one per row: name,lhs,rhs,constant,tolerance,passed.
enum class ReportFormat { Json, Csv };
std::string report_to_json(const ScenarioReport& report);
std::string report_to_csv(const ScenarioReport& report);
void emit_report(const ScenarioReport& report, ReportFormat format, const std::string& path);
ScenarioReport load_report_json(const std::string& path);

std::string bound_estimate_to_json(const BoundEstimate& estimate);

}  // namespace conc
