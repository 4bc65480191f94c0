#pragma once

// Security thresholds on the scaled noise eps = 2 nbar |1 - tau|: the
// smallest eps at which each closed-form rate vanishes.

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace gausskey {

enum class RateId { e_r, q1g, r_rev };

std::string_view to_string(RateId id);

/// Signed interior of the given rate at (tau, eps).
double rate_interior(RateId id, double tau, double eps);

struct ThresholdResult {
  double eps;
  /// Set when the monotonicity pre-check on r_rev failed and the root was
  /// located by a grid scan instead of plain bisection.
  bool scan_fallback;
};

ThresholdResult find_threshold(RateId id, double tau, double tol = 1e-9);
double threshold_eps(RateId id, double tau, double tol = 1e-9);

struct ThresholdRow {
  double tau;
  double eps_q;
  double eps_r;
  double eps_rev;
  bool flagged;
};

struct ThresholdCurve {
  std::vector<ThresholdRow> rows;
  double tolerance;
};

/// Evenly spaced tau grid over [tau_min, tau_max] with `steps` points; points
/// within 1e-6 of tau = 1 are skipped.
ThresholdCurve sweep(double tau_min, double tau_max, std::size_t steps, double tol = 1e-9);

/// Header `tau,eps_q,eps_r,eps_rev`, LF line endings, `digits` significant
/// digits per value.
void write_csv(std::ostream& os, const ThresholdCurve& curve, int digits = 12);

struct RegionLabel {
  bool antidegradable;  // tau <= 1/2
  bool e_r_positive;
  bool q1g_positive;
  bool r_rev_positive;
  bool reverse_beats_antidegradability;
};

RegionLabel classify(double tau, double eps);

}  // namespace gausskey
