#include "conc/report.hpp"

namespace conc {

CheckReport make_check(std::string name, double lhs, double rhs, double constant_used,
                       double tolerance, std::string witness) {
    CheckReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant_used = constant_used;
    r.tolerance = tolerance;
    r.passed = lhs <= rhs * (1.0 + tolerance);
    r.witness = std::move(witness);
    return r;
}

bool ScenarioReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.vacuous && !c.passed) return false;
    return true;
}

const Quantity* ScenarioReport::find_quantity(const std::string& name) const {
    for (const auto& q : quantities)
        if (q.name == name) return &q;
    return nullptr;
}

}  // namespace conc
