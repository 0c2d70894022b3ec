#pragma once

#include <string>
#include <utility>
#include <vector>

#include "heatlab/envelopes.hpp"

namespace heatlab {

enum class ConditionKind { I1, I2, I3, I1Plus, I2Plus, I3Plus };
enum class Verdict { Convergent, Divergent, Inconclusive };

std::string to_string(ConditionKind kind);
std::string to_string(Verdict v);

/// Evidence-carrying verdict for one integral condition. partial_values
/// holds (cutoff, cumulative integral) per dyadic doubling; increments are
/// the per-band contributions the decision rule inspects.
struct ConditionVerdict {
    ConditionKind kind;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<std::pair<double, double>> partial_values;
    std::vector<double> increments;
    double tail_exponent_estimate = 0.0;
    double total = 0.0;
    std::string rule;  // which decision rule fired
};

/// Numeric verdict for the integral conditions on dyadic cutoffs 2^k
/// (upward from 1 for the tail conditions, downward toward 0 for the
/// origin conditions), capped at 2^40 / 2^-40. Convergence/divergence are
/// strong numeric evidence, never proof; the evidence trail is returned.
ConditionVerdict check_condition(ConditionKind kind, const EnvelopeFunctions& env, int dim);

/// Partial integral of s^{-p_F} * envelope(s) over [1, cutoff] (or
/// [cutoff, 1] when cutoff < 1) by the same banded quadrature. Exposed for
/// the substitution-equivalence cross-check.
double partial_condition_integral(const ScalarFn& envelope, int dim, double cutoff);

/// The substituted form: integral of envelope(tau^{-n/2}) over
/// [tau_lo, tau_hi], 129-point composite Simpson per dyadic band.
double substituted_condition_integral(const ScalarFn& envelope, int dim, double tau_lo,
                                      double tau_hi);

}  // namespace heatlab
