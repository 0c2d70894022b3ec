#include "heatlab/classify.hpp"

#include <cmath>
#include <stdexcept>

namespace heatlab {

namespace {
constexpr double kEnvelopeRange = 2.2e12;  // past the 2^40 quadrature cap
}

std::string to_string(WellPosedness c) {
    switch (c) {
        case WellPosedness::WellPosedL1: return "well_posed_L1";
        case WellPosedness::WellPosedL1PlusOnly: return "well_posed_L1_plus_only";
        case WellPosedness::NotWellPosedL1Plus: return "not_well_posed_L1_plus";
        case WellPosedness::Indeterminate: return "indeterminate";
    }
    return "?";
}

WellPosednessClass classify(const Nonlinearity& nl, int dim) {
    WellPosednessClass out;

    const auto hm = check_hypothesis_m(nl, 48, 1e6);
    if (!hm.pass) {
        out.diagnostics.push_back("hypothesis (M) probe failed: " + hm.witness);
        return out;
    }

    const auto structure = check_structure(nl, 1e3);
    out.odd = !nl.positive_only && structure.odd;
    out.convex_on_positives = structure.convex_on_positives;

    const auto env = compute_envelopes(nl, kEnvelopeRange);
    const ConditionKind kinds[] = {ConditionKind::I1,     ConditionKind::I2,
                                   ConditionKind::I3,     ConditionKind::I1Plus,
                                   ConditionKind::I2Plus, ConditionKind::I3Plus};
    for (auto kind : kinds) out.verdicts[to_string(kind)] = check_condition(kind, env, dim);

    auto verdict = [&](const char* k) { return out.verdicts.at(k).verdict; };
    auto conv = [&](const char* k) { return verdict(k) == Verdict::Convergent; };
    auto div = [&](const char* k) { return verdict(k) == Verdict::Divergent; };

    out.satisfies_i1 = conv("I1");
    out.satisfies_i2 = conv("I2");
    out.satisfies_i3 = conv("I3");

    // internal consistency: the Lipschitz envelope dominates the slope
    // envelope, so a convergent I2 cannot pair with a divergent I1
    if (conv("I2") && div("I1")) {
        out.diagnostics.push_back("inconsistent verdicts: I2 convergent but I1 divergent");
        return out;
    }
    if (conv("I2+") && div("I1+")) {
        out.diagnostics.push_back("inconsistent verdicts: I2+ convergent but I1+ divergent");
        return out;
    }
    // for odd sources convex on (0,inf) the two tail conditions are
    // equivalent; a contradiction is a numeric artefact, not a conclusion
    if (out.odd && out.convex_on_positives && conv("I1") && div("I2")) {
        out.diagnostics.push_back(
            "odd convex source with convergent I1 but divergent I2 contradicts the "
            "envelope identity ell = f(s)/s, L = f'");
        return out;
    }

    if (nl.positive_only) {
        if (conv("I2+")) {
            out.classification = WellPosedness::WellPosedL1PlusOnly;
            out.citations.push_back("rule:cone-uniqueness-condition (I2+ convergent)");
            out.global_for_small_data = conv("I3+");
            if (out.global_for_small_data)
                out.citations.push_back("rule:cone-small-data-global (I2+ and I3+ convergent)");
        } else if (out.convex_on_positives && div("I1+")) {
            out.classification = WellPosedness::NotWellPosedL1Plus;
            out.citations.push_back("rule:cone-convex-iff (divergent tail integral of f/s)");
        } else if (div("I2+") && out.convex_on_positives) {
            out.classification = WellPosedness::NotWellPosedL1Plus;
            out.citations.push_back("rule:cone-convex-iff (I2+ equals I1+ for convex sources)");
        }
        return out;
    }

    if (conv("I2")) {
        out.classification = WellPosedness::WellPosedL1;
        out.citations.push_back("rule:uniqueness-condition (I2 convergent)");
        out.global_for_small_data = conv("I3");
        if (out.global_for_small_data)
            out.citations.push_back("rule:small-data-global (I2 and I3 convergent)");
    } else if (div("I2")) {
        if (out.convex_on_positives && (div("I1+") || div("I2+"))) {
            out.classification = WellPosedness::NotWellPosedL1Plus;
            out.citations.push_back("rule:cone-convex-iff (divergent tail integral of f/s)");
        } else if (conv("I2+")) {
            out.classification = WellPosedness::WellPosedL1PlusOnly;
            out.citations.push_back("rule:cone-uniqueness-condition (I2+ convergent)");
            out.global_for_small_data = conv("I3+");
        } else {
            out.diagnostics.push_back("I2 divergent without a cone-side conclusion");
        }
    } else {
        out.diagnostics.push_back("I2 inconclusive");
    }
    return out;
}

}  // namespace heatlab
