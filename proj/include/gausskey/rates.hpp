#pragma once

// Closed-form rate bounds for a canonical one-mode Gaussian channel, in bits
// per channel use. Each rate is max{0, interior}; the signed interiors are
// exposed for root finding.

#include "gausskey/channel.hpp"

namespace gausskey {

/// Reverse coherent information bound: log2|1/(1-tau)| - g(nbar).
double e_r_interior(const CanonicalChannel& ch);
/// Single-use Gaussian coherent information: log2|tau/(1-tau)| - g(nbar).
/// -infinity at tau = 0.
double q1g_interior(const CanonicalChannel& ch);
/// Noisy reverse-reconciliation homodyne protocol:
/// 1/2 log2(lambda/|1-tau|) + g(sqrt(w/(4 lambda)) - 1/2) - g(nbar).
double r_rev_interior(const CanonicalChannel& ch);

double e_r(const CanonicalChannel& ch);
double q1g(const CanonicalChannel& ch);
double r_rev(const CanonicalChannel& ch);

/// lambda = (|1-tau| + w) / (1 + |1-tau| w).
double protocol_lambda(const CanonicalChannel& ch);

struct RateReport {
  double tau;
  double nbar;
  double eps;
  double e_r;
  double q1g;
  double r_rev;
  double lambda;
  double w;
};

RateReport rate_report(const CanonicalChannel& ch);

}  // namespace gausskey
