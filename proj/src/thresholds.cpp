#include "gausskey/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "gausskey/channel.hpp"
#include "gausskey/rates.hpp"

namespace gausskey {

namespace {

constexpr double kBracketLimit = 1e12;
constexpr int kMonotoneSamples = 64;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kMaxScanCells = 1e6;
constexpr double kUnitExclusion = 1e-6;

bool monotone_on(RateId id, double tau, double hi) {
  double prev = rate_interior(id, tau, 0.0);
  for (int i = 1; i <= kMonotoneSamples; ++i) {
    const double v = rate_interior(id, tau, hi * i / kMonotoneSamples);
    if (v > prev + kMonotoneSlack) {
      return false;
    }
    prev = v;
  }
  return true;
}

double bisect(RateId id, double tau, double lo, double hi, double tol) {
  // Invariant: interior(lo) > 0 >= interior(hi).
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (rate_interior(id, tau, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol && std::abs(rate_interior(id, tau, hi)) <= tol) {
      break;
    }
  }
  return hi;
}

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

std::string_view to_string(RateId id) {
  switch (id) {
    case RateId::e_r:
      return "e_r";
    case RateId::q1g:
      return "q1g";
    case RateId::r_rev:
      return "r_rev";
  }
  return "?";
}

double rate_interior(RateId id, double tau, double eps) {
  const CanonicalChannel ch = make_canonical(tau, Eps{eps});
  switch (id) {
    case RateId::e_r:
      return e_r_interior(ch);
    case RateId::q1g:
      return q1g_interior(ch);
    case RateId::r_rev:
      return r_rev_interior(ch);
  }
  return 0.0;
}

ThresholdResult find_threshold(RateId id, double tau, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::Domain, "tol", "threshold tolerance must be > 0");
  }
  if (!(rate_interior(id, tau, 0.0) > 0.0)) {
    return {0.0, false};
  }
  double hi = 1.0;
  while (rate_interior(id, tau, hi) > 0.0) {
    hi *= 2.0;
    if (hi > kBracketLimit) {
      throw Error(ErrorKind::Numeric, "tau", "threshold bracket did not close");
    }
  }
  if (id != RateId::r_rev || monotone_on(id, tau, hi)) {
    return {bisect(id, tau, 0.0, hi, tol), false};
  }
  // First sign change on a uniform grid, refined by bisection inside the cell.
  const double step = std::max(tol, hi / kMaxScanCells);
  double lo = 0.0;
  for (double e = step; e <= hi + step; e += step) {
    if (!(rate_interior(id, tau, e) > 0.0)) {
      return {bisect(id, tau, lo, e, tol), true};
    }
    lo = e;
  }
  return {hi, true};
}

double threshold_eps(RateId id, double tau, double tol) { return find_threshold(id, tau, tol).eps; }

ThresholdCurve sweep(double tau_min, double tau_max, std::size_t steps, double tol) {
  if (steps == 0 || !(tau_min <= tau_max)) {
    throw Error(ErrorKind::Domain, "steps", "sweep: empty tau grid");
  }
  ThresholdCurve curve{{}, tol};
  for (std::size_t i = 0; i < steps; ++i) {
    const double tau =
        steps == 1 ? tau_min
                   : tau_min + (tau_max - tau_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    if (std::abs(tau - 1.0) < kUnitExclusion) {
      continue;
    }
    const auto rev = find_threshold(RateId::r_rev, tau, tol);
    curve.rows.push_back({tau, threshold_eps(RateId::q1g, tau, tol), threshold_eps(RateId::e_r, tau, tol),
                          rev.eps, rev.scan_fallback});
  }
  if (curve.rows.empty()) {
    throw Error(ErrorKind::Domain, "steps", "sweep: every grid point coincides with tau = 1");
  }
  return curve;
}

void write_csv(std::ostream& os, const ThresholdCurve& curve, int digits) {
  os << "tau,eps_q,eps_r,eps_rev\n";
  for (const auto& r : curve.rows) {
    os << format_number(r.tau, digits) << ',' << format_number(r.eps_q, digits) << ','
       << format_number(r.eps_r, digits) << ',' << format_number(r.eps_rev, digits) << '\n';
  }
}

RegionLabel classify(double tau, double eps) {
  const CanonicalChannel ch = make_canonical(tau, Eps{eps});
  RegionLabel label{};
  label.antidegradable = tau <= 0.5;
  label.e_r_positive = e_r(ch) > 0.0;
  label.q1g_positive = q1g(ch) > 0.0;
  label.r_rev_positive = r_rev(ch) > 0.0;
  label.reverse_beats_antidegradability =
      label.antidegradable && (label.e_r_positive || label.r_rev_positive);
  return label;
}

}  // namespace gausskey
