#include "gausskey/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gausskey/channel.hpp"

namespace gausskey {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Neumaier-compensated running sum.
class Sum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  std::uint64_t n = 0;
  Sum a, b, aa, bb, ab, aaaa, bbbb, aabb;

  void add(double x, double y) {
    ++n;
    a.add(x);
    b.add(y);
    aa.add(x * x);
    bb.add(y * y);
    ab.add(x * y);
    aaaa.add(x * x * x * x);
    bbbb.add(y * y * y * y);
    aabb.add(x * x * y * y);
  }

  Eigen::Matrix2d covariance() const {
    const double k = static_cast<double>(n);
    const double ma = a.value() / k;
    const double mb = b.value() / k;
    Eigen::Matrix2d c;
    c(0, 0) = aa.value() / k - ma * ma;
    c(1, 1) = bb.value() / k - mb * mb;
    c(0, 1) = c(1, 0) = ab.value() / k - ma * mb;
    return c;
  }

  // Standard error of each second moment E[x_i x_j], from the spread of the
  // products x_i x_j.
  Eigen::Matrix2d standard_error() const {
    const double k = static_cast<double>(n);
    auto se = [k](double mean_sq, double mean) {
      return std::sqrt(std::max(0.0, mean_sq - mean * mean) / k);
    };
    Eigen::Matrix2d s;
    s(0, 0) = se(aaaa.value() / k, aa.value() / k);
    s(1, 1) = se(bbbb.value() / k, bb.value() / k);
    s(0, 1) = s(1, 0) = se(aabb.value() / k, ab.value() / k);
    return s;
  }
};

double cross_sign(const Eigen::Matrix2d& m) { return m(0, 1) < 0.0 ? -1.0 : 1.0; }

}  // namespace

std::string_view to_string(SiftMode m) { return m == SiftMode::memory ? "memory" : "sifted"; }

Eigen::Matrix2d analytic_moments(double tau, double nbar, double mu, Quadrature basis) {
  const CanonicalChannel ch = make_canonical(tau, Nbar{nbar});
  if (!(mu >= 1.0)) {
    throw Error(ErrorKind::Domain, "mu", "analytic_moments: mu must be >= 1");
  }
  const double at = std::abs(tau);
  const double va = mu;
  const double vb = 0.5 * (at * mu + std::abs(1.0 - tau) * ch.w() + 1.0);
  double cross = std::sqrt(at * (mu - 1.0) * (mu + 1.0) / 2.0);
  if (basis == Quadrature::p && tau > 0.0) {
    cross = -cross;
  }
  Eigen::Matrix2d m;
  m << va, cross, cross, vb;
  return m;
}

double gaussian_mutual_information(const Eigen::Matrix2d& cov) {
  const double prod = cov(0, 0) * cov(1, 1);
  return 0.5 * std::log2(prod / (prod - cov(0, 1) * cov(0, 1)));
}

RoundRng::RoundRng(std::uint64_t seed, std::uint64_t round)
    : state_(mix64(seed ^ mix64(round * kGolden + kGolden))) {}

std::uint64_t RoundRng::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RoundRng::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

SimStats simulate(const SimConfig& cfg, const std::function<void(const RoundRecord&)>& sink) {
  if (cfg.rounds == 0) {
    throw Error(ErrorKind::Domain, "rounds", "simulate: rounds must be >= 1");
  }
  const Eigen::Matrix2d mom_q = analytic_moments(cfg.tau, cfg.nbar, cfg.mu, Quadrature::q);
  const Eigen::Matrix2d mom_p = analytic_moments(cfg.tau, cfg.nbar, cfg.mu, Quadrature::p);
  const double align_p = cross_sign(mom_q) * cross_sign(mom_p);

  struct Sampler {
    double sa, slope, sb_cond, sb;
  };
  auto sampler = [](const Eigen::Matrix2d& m) {
    const double sa = std::sqrt(m(0, 0));
    const double slope = m(0, 1) / sa;
    return Sampler{sa, slope, std::sqrt(std::max(0.0, m(1, 1) - slope * slope)), std::sqrt(m(1, 1))};
  };
  const Sampler samp_q = sampler(mom_q);
  const Sampler samp_p = sampler(mom_p);

  Moments pooled, per_q, per_p;
  for (std::uint64_t round = 0; round < cfg.rounds; ++round) {
    RoundRng rng(cfg.seed, round);
    const std::uint64_t bits = rng.next_u64();
    const auto basis_b = (bits & 1U) ? Quadrature::p : Quadrature::q;
    const auto basis_a = cfg.mode == SiftMode::memory ? basis_b
                                                      : ((bits >> 1) & 1U) ? Quadrature::p : Quadrature::q;
    const double radius = std::sqrt(-2.0 * std::log(rng.next_unit()));
    const double angle = 2.0 * std::numbers::pi * rng.next_unit();
    const double z1 = radius * std::cos(angle);
    const double z2 = radius * std::sin(angle);

    const bool kept = basis_a == basis_b;
    const Sampler& s = basis_b == Quadrature::q ? samp_q : samp_p;
    const double x_a = s.sa * z1;
    // Different quadratures of the two modes are uncorrelated.
    const double x_b = kept ? s.slope * z1 + s.sb_cond * z2 : s.sb * z2;

    if (kept) {
      if (basis_b == Quadrature::q) {
        per_q.add(x_a, x_b);
        pooled.add(x_a, x_b);
      } else {
        per_p.add(x_a, x_b);
        pooled.add(align_p * x_a, x_b);
      }
    }
    if (sink) {
      sink(RoundRecord{basis_b, basis_a, kept, x_a, x_b});
    }
  }

  if (pooled.n == 0) {
    throw Error(ErrorKind::EmptyStatistics, "rounds", "simulate: no rounds survived sifting");
  }

  SimStats st{};
  st.rounds = cfg.rounds;
  st.kept_rounds = pooled.n;
  st.empirical_cov = pooled.covariance();
  st.analytic_cov = mom_q;
  st.standard_error = pooled.standard_error();
  st.mi_empirical = gaussian_mutual_information(st.empirical_cov);
  st.mi_analytic = gaussian_mutual_information(st.analytic_cov);
  st.sift_ratio = static_cast<double>(pooled.n) / static_cast<double>(cfg.rounds);
  st.empirical_cross_q = per_q.n > 0 ? per_q.covariance()(0, 1) : 0.0;
  st.empirical_cross_p = per_p.n > 0 ? per_p.covariance()(0, 1) : 0.0;
  st.analytic_cross_q = mom_q(0, 1);
  st.analytic_cross_p = mom_p(0, 1);
  return st;
}

}  // namespace gausskey
