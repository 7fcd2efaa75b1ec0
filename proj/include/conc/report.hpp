#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conc/numerics.hpp"

namespace conc {

// Certified interval for a constant (sigma^2, s^2, ...) with the witness
// achieving the lower bound.
struct BoundEstimate {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> witness;     // field values or a probability vector
    std::string witness_kind;        // "field" | "measure" | "none"
    std::string method;              // how the lower bound was found
    std::map<std::string, double> diagnostics;
};

// Pass/fail record for a single inequality.  `passed` always means
// lhs <= rhs * (1 + tolerance); vacuous checks (unmet hypothesis,
// disconnected form) are excluded from scenario conjunctions.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool vacuous = false;
    std::string witness;
};

CheckReport make_check(std::string name, double lhs, double rhs, double constant_used,
                       double tolerance, std::string witness);

struct Quantity {
    std::string name;
    double value = 0.0;
    std::string provenance;           // e.g. "quadrature", "rational", "monte-carlo"
    std::optional<Rational> exact;    // set when the value is an exact rational
};

struct ScenarioReport {
    std::string scenario;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;
    std::vector<Quantity> quantities;
    std::vector<CheckReport> checks;
    std::int64_t runtime_ms = 0;
    bool hypothesis_unmet = false;

    bool all_passed() const;
    const Quantity* find_quantity(const std::string& name) const;
};

}  // namespace conc
