#include "gausskey/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gausskey {

double e_r_interior(const CanonicalChannel& ch) {
  return -std::log2(std::abs(1.0 - ch.tau())) - entropy_g(ch.nbar());
}

double q1g_interior(const CanonicalChannel& ch) {
  const double tau = ch.tau();
  if (tau == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::log2(std::abs(tau / (1.0 - tau))) - entropy_g(ch.nbar());
}

double protocol_lambda(const CanonicalChannel& ch) {
  const double a = std::abs(1.0 - ch.tau());
  const double w = ch.w();
  return (a + w) / (1.0 + a * w);
}

double r_rev_interior(const CanonicalChannel& ch) {
  const double a = std::abs(1.0 - ch.tau());
  const double w = ch.w();
  const double lambda = protocol_lambda(ch);
  // sqrt(w/(4 lambda)) >= 1/2 since w >= lambda; clamp the rounding.
  const double x = std::max(0.0, std::sqrt(w / (4.0 * lambda)) - 0.5);
  return 0.5 * std::log2(lambda / a) + entropy_g(x) - entropy_g(ch.nbar());
}

double e_r(const CanonicalChannel& ch) { return std::max(0.0, e_r_interior(ch)); }

double q1g(const CanonicalChannel& ch) {
  if (ch.tau() == 0.0) {
    return 0.0;
  }
  return std::max(0.0, q1g_interior(ch));
}

double r_rev(const CanonicalChannel& ch) { return std::max(0.0, r_rev_interior(ch)); }

RateReport rate_report(const CanonicalChannel& ch) {
  return RateReport{
      .tau = ch.tau(),
      .nbar = ch.nbar(),
      .eps = ch.eps(),
      .e_r = e_r(ch),
      .q1g = q1g(ch),
      .r_rev = r_rev(ch),
      .lambda = protocol_lambda(ch),
      .w = ch.w(),
  };
}

}  // namespace gausskey
