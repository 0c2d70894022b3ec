#pragma once

#include <string>

#include "heatlab/nonlinearity.hpp"

namespace heatlab {

/// Non-decreasing envelope evaluators on [0, infinity):
///   ell(s)        sup of f(t)/t over 0 < |t| <= s
///   big_l(s)      sup of difference quotients of f over [-s, s]
///   ell_plus / big_l_plus   positive-cone variants (t, u, v in (0, s])
/// All evaluate to 0 at s <= 0 and satisfy ell <= big_l,
/// ell_plus <= ell, big_l_plus <= big_l.
struct EnvelopeFunctions {
    ScalarFn ell;
    ScalarFn big_l;
    ScalarFn ell_plus;
    ScalarFn big_l_plus;
    std::string provenance;  // "closed-form" or "numeric"
};

/// Builds envelopes for nl. Closed forms attached to the nonlinearity are
/// used when present; otherwise cumulative maxima over a log-spaced probe
/// grid (samples_per_decade points per decade up to s_max, with quotient
/// refinement near kinks). Evaluators interpolate log-linearly and
/// extrapolate by the local power-law exponent at each end.
EnvelopeFunctions compute_envelopes(const Nonlinearity& nl, double s_max,
                                    int samples_per_decade = 64);

/// Numeric path regardless of closed forms; used to cross-check them.
EnvelopeFunctions compute_envelopes_numeric(const Nonlinearity& nl, double s_max,
                                            int samples_per_decade = 64);

}  // namespace heatlab
