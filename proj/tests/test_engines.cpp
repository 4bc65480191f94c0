#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "gausskey/engines.hpp"
#include "gausskey/rates.hpp"
#include "oracles.hpp"

using namespace gausskey;

namespace {
CanonicalChannel ch(double tau, double nbar) { return make_canonical(tau, Nbar{nbar}); }
}  // namespace

// With a vacuum source A is pure and uncorrelated, so CI = 0 and
// RCI = -S(B) with B thermal.
TEST(Rci, VacuumInput) {
  for (double tau : {0.2, 0.7, 1.5}) {
    const auto c = ch(tau, 0.3);
    const double vb = tau + std::abs(1.0 - tau) * c.w();
    EXPECT_NEAR(rci_finite_mu(c, 1.0), -oracle::g((vb - 1.0) / 2.0), 1e-12);
    EXPECT_NEAR(ci_finite_mu(c, 1.0), 0.0, 1e-12);
  }
  EXPECT_NEAR(rci_finite_mu(ch(0.4, 0.0), 1.0), 0.0, 1e-12);
}

TEST(Rci, ConvergesToClosedForm) {
  EXPECT_NEAR(rci_finite_mu(ch(0.5, 0.0), 1e4), 1.0, 1e-3);
  EXPECT_NEAR(rci_finite_mu(ch(0.7, 0.2), 1e4), e_r_interior(ch(0.7, 0.2)), 1e-3);
  EXPECT_NEAR(ci_finite_mu(ch(0.7, 0.2), 1e4), q1g_interior(ch(0.7, 0.2)), 1e-3);
  EXPECT_NEAR(ci_finite_mu(ch(1.5, 0.1), 1e4), q1g_interior(ch(1.5, 0.1)), 1e-3);
}

TEST(Ci, PureLossAtHalfIsZero) {
  for (double mu : {1.0, 3.0, 100.0, 1e4}) {
    EXPECT_NEAR(ci_finite_mu(ch(0.5, 0.0), mu), 0.0, 1e-6) << mu;
  }
}

TEST(Rci, NonDecreasingInMuWherePositive) {
  const std::vector<double> mus{1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 1e4};
  for (double tau : {0.3, 0.6, 0.9, 1.2, 1.6}) {
    for (double n : {0.0, 0.1}) {
      const auto c = ch(tau, n);
      if (e_r_interior(c) <= 0.0) continue;
      double prev = -1e300;
      for (double mu : mus) {
        const double v = rci_finite_mu(c, mu);
        EXPECT_GE(v, prev - 1e-9) << tau << " " << n << " " << mu;
        EXPECT_GE(e_r_interior(c) - v, -1e-6);
        prev = v;
      }
    }
  }
}

TEST(Ci, NonDecreasingInMuWherePositive) {
  const std::vector<double> mus{1.0, 2.0, 5.0, 10.0, 100.0, 1000.0, 1e4};
  for (double tau : {0.6, 0.8, 1.3, 2.0, 3.0}) {
    const auto c = ch(tau, 0.05);
    if (q1g_interior(c) <= 0.0) continue;
    double prev = -1e300;
    for (double mu : mus) {
      const double v = ci_finite_mu(c, mu);
      EXPECT_GE(v, prev - 1e-9) << tau << " " << mu;
      prev = v;
    }
  }
}

// Below tau = 1/2 the coherent information starts at 0 and falls toward the
// negative limit.
TEST(Ci, DecreasesWhereLimitIsNegative) {
  const auto c = ch(0.3, 0.0);
  ASSERT_LT(q1g_interior(c), 0.0);
  const double a = ci_finite_mu(c, 10.0);
  const double b = ci_finite_mu(c, 1000.0);
  EXPECT_LT(a, 0.0);
  EXPECT_LT(b, a);
  EXPECT_GT(b, q1g_interior(c));
}

TEST(Convergence, RowsCarryGap) {
  const std::vector<double> mus{10.0, 100.0, 1000.0};
  const auto rows = convergence(ch(0.5, 0.1), mus, Engine::rci);
  ASSERT_EQ(rows.size(), 3U);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.gap, r.target - r.value);
    EXPECT_DOUBLE_EQ(r.target, e_r_interior(ch(0.5, 0.1)));
  }
  EXPECT_LT(std::abs(rows[2].gap), std::abs(rows[0].gap));
}

TEST(Protocol, TrustedPortsMatchClosedForm) {
  const std::pair<double, double> pts[] = {{0.5, 0.0}, {0.5, 0.25}, {0.8, 0.1}, {1.5, 0.1}};
  for (auto [tau, n] : pts) {
    const auto c = ch(tau, n);
    EXPECT_NEAR(protocol_rate_numeric(c, 1e3, PortModel::trusted).rate, r_rev_interior(c), 1e-2) << tau;
  }
}

TEST(Protocol, UntrustedPortsDoNotMatch) {
  const auto c = ch(0.5, 0.0);
  EXPECT_GT(std::abs(protocol_rate_numeric(c, 1e3, PortModel::untrusted).rate - r_rev_interior(c)), 1e-2);
}

TEST(Protocol, BasisSymmetry) {
  for (double tau : {0.4, 0.8, 1.5, 2.5}) {
    for (auto ports : {PortModel::trusted, PortModel::untrusted}) {
      const auto c = ch(tau, 0.2);
      const double q = protocol_rate_numeric(c, 50.0, ports, Quadrature::q).rate;
      const double p = protocol_rate_numeric(c, 50.0, ports, Quadrature::p).rate;
      EXPECT_NEAR(q, p, 1e-10) << tau;
    }
  }
}

TEST(Protocol, BreakdownIsConsistent) {
  const auto r = protocol_rate_numeric(ch(0.7, 0.3), 20.0, PortModel::trusted);
  EXPECT_GE(r.holevo_eve, 0.0);
  EXPECT_GT(r.mutual_information, 0.0);
  EXPECT_NEAR(r.holevo_eve, r.eve_entropy - r.eve_conditional_entropy, 1e-12);
  EXPECT_NEAR(r.rate, r.mutual_information - r.holevo_eve, 1e-12);
}

TEST(Protocol, Errors) {
  EXPECT_THROW(protocol_rate_numeric(ch(0.5, 0.0), 1.0, PortModel::trusted), Error);
  EXPECT_THROW(protocol_rate_numeric(ch(-0.5, 0.0), 10.0, PortModel::trusted), Error);
  EXPECT_THROW(protocol_rate_numeric(ch(0.0, 0.0), 10.0, PortModel::trusted), Error);
  EXPECT_THROW(rci_finite_mu(ch(0.5, 0.0), 0.5), Error);
}
