#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gausskey/channel.hpp"
#include "oracles.hpp"

using namespace gausskey;

TEST(MakeCanonical, Examples) {
  const auto a = make_canonical(0.5, Nbar{0.0});
  EXPECT_EQ(a.class_label(), ChannelClass::C_att);
  EXPECT_EQ(a.eps(), 0.0);

  const auto b = make_canonical(0.5, Eps{0.3});
  EXPECT_NEAR(b.nbar(), 0.3, 1e-15);

  const auto d = make_canonical(-0.5, Nbar{0.1});
  EXPECT_EQ(d.class_label(), ChannelClass::D);
  EXPECT_NEAR(d.eps(), 0.3, 1e-15);

  EXPECT_EQ(make_canonical(0.0, Nbar{1.0}).class_label(), ChannelClass::A1);
  EXPECT_EQ(make_canonical(0.0, Nbar{1.0}).rank(), 0);
  EXPECT_EQ(make_canonical(2.0, Nbar{1.0}).class_label(), ChannelClass::C_amp);
  EXPECT_EQ(make_canonical(2.0, Nbar{1.0}).rank(), 2);
}

TEST(MakeCanonical, Errors) {
  try {
    make_canonical(1.0, Nbar{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedClass);
    EXPECT_EQ(e.parameter(), "tau");
    EXPECT_STREQ(e.what(), "classes B1/B2 (tau=1) unsupported");
  }
  EXPECT_THROW(make_canonical(0.5, Nbar{-0.1}), Error);
  EXPECT_THROW(make_canonical(0.5, Eps{-0.1}), Error);
  EXPECT_THROW(make_canonical(std::nan(""), Nbar{0.0}), Error);
}

TEST(MakeCanonical, EpsRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tau(-3.0, 4.0);
  std::uniform_real_distribution<double> nbar(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = tau(rng);
    if (t == 1.0) continue;
    const double n = nbar(rng);
    const double back = CanonicalChannel::nbar_of_eps(t, CanonicalChannel::eps_of_nbar(t, n));
    EXPECT_NEAR(back, n, 1e-12 * std::max(1.0, n));
  }
}

TEST(ApplyChannel, PureLossOnVacuumIsVacuum) {
  const CovMat out = apply_channel(CovMat::vacuum(1), make_canonical(0.5, Nbar{0.0}), 0);
  EXPECT_LE((out.matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ApplyChannel, TmsvThroughPureLoss) {
  const double mu = 9.0;
  const CovMat out = apply_channel(tmsv(mu), make_canonical(0.5, Nbar{0.0}), 1);
  const Eigen::Matrix2d b = out.block(1, 1);
  const Eigen::Matrix2d c = out.block(0, 1);
  EXPECT_NEAR(b(0, 0), (mu + 1.0) / 2.0, 1e-14);
  EXPECT_NEAR(b(1, 1), (mu + 1.0) / 2.0, 1e-14);
  EXPECT_NEAR(c(0, 0), std::sqrt(mu * mu - 1.0) / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(c(1, 1), -std::sqrt(mu * mu - 1.0) / std::sqrt(2.0), 1e-13);
  // Alice's block untouched.
  EXPECT_NEAR(out(0, 0), mu, 0.0);
}

TEST(ApplyChannel, EntanglementBreakingA1) {
  const double nbar = 0.4;
  const CovMat out = apply_channel(tmsv(6.0), make_canonical(0.0, Nbar{nbar}), 1);
  EXPECT_LE((out.block(1, 1) - (2 * nbar + 1) * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(out.block(0, 1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ApplyChannel, PhaseConjugationFlipsPCorrelation) {
  const double mu = 4.0;
  const CovMat in = tmsv(mu);
  const CovMat out = apply_channel(in, make_canonical(-0.5, Nbar{0.2}), 1);
  const double s = std::sqrt(0.5);
  EXPECT_NEAR(out(0, 2), s * in(0, 2), 1e-14);
  EXPECT_NEAR(out(1, 3), -s * in(1, 3), 1e-14);
  EXPECT_GT(out(1, 3), 0.0);
}

TEST(ApplyChannel, MapsValidStatesToValidStates) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> tau(-3.0, 4.0);
  std::uniform_real_distribution<double> nbar(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double t = tau(rng);
    const CovMat v = CovMat::from_matrix(oracle::random_state(2, rng));
    const CovMat out = apply_channel(v, make_canonical(t, Nbar{nbar(rng)}), i % 2);
    for (double nu : raw_symplectic_eigenvalues(out.matrix())) {
      EXPECT_GE(nu, 1.0 - 1e-9) << "tau=" << t;
    }
  }
}

TEST(ApplyChannel, ModeOutOfRange) {
  EXPECT_THROW(apply_channel(CovMat::vacuum(1), make_canonical(0.5, Nbar{0.0}), 1), Error);
}

TEST(Dilation, ReproducesChannel) {
  for (auto [tau, nbar] : {std::pair{0.6, 0.2}, std::pair{0.1, 1.5}, std::pair{1.7, 0.3}, std::pair{3.0, 0.0}}) {
    const auto ch = make_canonical(tau, Nbar{nbar});
    const CovMat global = apply_dilation(tmsv(5.0), dilate(ch), 1);
    ASSERT_EQ(global.n_modes(), 4U);
    const std::size_t ab[] = {0, 1};
    const Matrix reduced = partial_trace(global, ab).matrix();
    const Matrix direct = apply_channel(tmsv(5.0), ch, 1).matrix();
    EXPECT_LE((reduced - direct).cwiseAbs().maxCoeff(), 1e-10) << "tau=" << tau;
  }
}

TEST(Dilation, GlobalStateIsPure) {
  for (double mu : {1.0, 2.0, 5.0, 50.0}) {
    for (double tau : {0.3, 0.8, 1.2, 2.5}) {
      const CovMat global = apply_dilation(tmsv(mu), dilate(make_canonical(tau, Nbar{0.7})), 1);
      for (double nu : symplectic_spectrum(global).values) {
        EXPECT_NEAR(nu, 1.0, 1e-9) << "mu=" << mu << " tau=" << tau;
      }
    }
  }
}

TEST(Dilation, EveEntropyEqualsJointOutputEntropy) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> tau_att(0.01, 0.99);
  std::uniform_real_distribution<double> tau_amp(1.01, 4.0);
  std::uniform_real_distribution<double> nbar(0.0, 3.0);
  std::uniform_real_distribution<double> mu(1.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double t = i % 2 ? tau_att(rng) : tau_amp(rng);
    const CovMat global = apply_dilation(tmsv(mu(rng)), dilate(make_canonical(t, Nbar{nbar(rng)})), 1);
    const std::size_t ab[] = {0, 1};
    const std::size_t eve[] = {2, 3};
    EXPECT_NEAR(von_neumann_entropy(partial_trace(global, eve)), von_neumann_entropy(partial_trace(global, ab)),
                1e-9);
  }
}

TEST(Dilation, UnsupportedClasses) {
  for (double tau : {0.0, -0.5}) {
    try {
      dilate(make_canonical(tau, Nbar{0.1}));
      FAIL() << tau;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::UnsupportedDilation);
    }
  }
}
