#pragma once

#include <map>
#include <string>
#include <vector>

#include "heatlab/conditions.hpp"
#include "heatlab/nonlinearity.hpp"

namespace heatlab {

enum class WellPosedness {
    WellPosedL1,
    WellPosedL1PlusOnly,
    NotWellPosedL1Plus,
    Indeterminate,
};

std::string to_string(WellPosedness c);

/// Outcome of the well-posedness classifier: condition verdicts, structure
/// flags, the headline classification and the rules that fired.
struct WellPosednessClass {
    bool satisfies_i1 = false;
    bool satisfies_i2 = false;
    bool satisfies_i3 = false;
    bool odd = false;
    bool convex_on_positives = false;
    WellPosedness classification = WellPosedness::Indeterminate;
    /// Set when both the uniqueness-grade and the origin integral
    /// conditions hold, i.e. small data continue globally.
    bool global_for_small_data = false;
    std::vector<std::string> citations;
    std::vector<std::string> diagnostics;
    std::map<std::string, ConditionVerdict> verdicts;  // keyed by condition name
};

/// Runs the structure probes and all condition checks for nl in dimension
/// dim and combines them into a classification. Inconsistent verdicts
/// (e.g. a convergent Lipschitz-envelope condition with a divergent slope
/// condition) downgrade to Indeterminate with a diagnostic.
WellPosednessClass classify(const Nonlinearity& nl, int dim);

}  // namespace heatlab
