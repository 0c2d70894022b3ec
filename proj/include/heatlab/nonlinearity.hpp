#pragma once

#include <functional>
#include <optional>
#include <string>

namespace heatlab {

using ScalarFn = std::function<double(double)>;

/// Closed-form envelope evaluators, when a builtin can supply them.
struct ClosedFormEnvelopes {
    ScalarFn ell;       // two-sided sup of f(t)/t over 0 < |t| <= s
    ScalarFn big_l;     // two-sided Lipschitz envelope
    ScalarFn ell_plus;  // positive-cone variants
    ScalarFn big_l_plus;
};

/// Source term f with structural metadata. f(0) = 0 always holds;
/// construction rejects violations.
struct Nonlinearity {
    ScalarFn f;
    std::string name;
    bool claims_monotone = false;
    bool claims_odd = false;
    bool claims_convex_on_positives = false;
    /// True for source terms defined only on [0, infinity); f is extended
    /// by zero on the negative axis and only the positive-cone machinery
    /// applies.
    bool positive_only = false;
    std::optional<ClosedFormEnvelopes> closed_form;

    double operator()(double u) const { return f(u); }
};

/// Builds a Nonlinearity from the expression grammar. Checks f(0) = 0 and
/// finiteness at a spread of probe points; throws on violation.
Nonlinearity parse_nonlinearity(const std::string& text);

/// Builtin registry: "power(p)" (p >= 1), "minpower(p,q)" (1 <= p < q,
/// odd extension of min{u^p, u^q}), "linear(c)",
/// "logcorrected(gamma,beta,a,b)" with Fujita power 1+2/n (needs the
/// dimension). Closed-form envelopes are attached where derivable.
Nonlinearity make_builtin(const std::string& spec_text, int dim);

/// Accepts either a builtin spec or a raw expression.
Nonlinearity make_nonlinearity(const std::string& text, int dim);

struct HypothesisVerdict {
    bool pass = true;
    std::string witness;  // empty when pass
};

/// Probes hypothesis (M): monotone on a symmetric log-spaced grid of
/// probe_count points per sign over [range^-1-ish, range], and finite
/// local difference quotients under refinement.
HypothesisVerdict check_hypothesis_m(const Nonlinearity& nl, int probe_count, double range);

struct StructureFlags {
    bool odd = false;
    bool convex_on_positives = false;
    std::string odd_witness;
    std::string convexity_witness;
};

/// Numeric probes for oddness and midpoint convexity on (0, range].
StructureFlags check_structure(const Nonlinearity& nl, double range);

}  // namespace heatlab
