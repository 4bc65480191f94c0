#pragma once

// Seeded Monte Carlo of the homodyne reverse-reconciliation protocol at the
// level of classical outcomes. Each round draws Alice's and Bob's homodyne
// outcomes from the zero-mean Gaussian fixed by the covariance matrix of
// TMSV(mu) -> channel -> balanced beam splitter with vacuum.

#include <cstdint>
#include <functional>
#include <string_view>

#include <Eigen/Dense>

#include "gausskey/symplectic.hpp"

namespace gausskey {

enum class SiftMode { memory, sifted };

std::string_view to_string(SiftMode m);

struct SimConfig {
  double tau = 0.5;
  double nbar = 0.0;
  double mu = 1.0;
  std::uint64_t rounds = 1;
  std::uint64_t seed = 0;
  SiftMode mode = SiftMode::memory;
};

/// Covariance of (x_A, x_B1) when both parties measure `basis`.
/// V_A = mu, V_B = (|tau| mu + |1-tau| w + 1) / 2, cross term
/// +-sqrt(|tau| (mu^2 - 1) / 2): positive in q; in p negative for tau > 0 and
/// positive for tau < 0 (phase conjugation).
Eigen::Matrix2d analytic_moments(double tau, double nbar, double mu, Quadrature basis);

/// Gaussian mutual information 1/2 log2(V_A V_B / det) of a 2x2 covariance.
double gaussian_mutual_information(const Eigen::Matrix2d& cov);

struct RoundRecord {
  Quadrature basis_b;
  Quadrature basis_a;
  bool kept;
  double x_a;
  double x_b;
};

struct SimStats {
  std::uint64_t rounds;
  std::uint64_t kept_rounds;
  /// Pooled over bases, with Alice's p outcomes sign-aligned to the q-basis
  /// correlation so both bases share `analytic_cov`.
  Eigen::Matrix2d empirical_cov;
  Eigen::Matrix2d analytic_cov;
  Eigen::Matrix2d standard_error;
  double mi_empirical;
  double mi_analytic;
  double sift_ratio;
  // Raw per-basis cross covariances, before sign alignment.
  double empirical_cross_q;
  double empirical_cross_p;
  double analytic_cross_q;
  double analytic_cross_p;
};

/// Name of the generator recorded in simulation metadata.
inline constexpr std::string_view kRngName = "splitmix64 counter stream + Box-Muller";

/// SplitMix64 sequence keyed by (seed, round): the stream for a round depends
/// on nothing else, so rounds can be generated in any order.
class RoundRng {
 public:
  RoundRng(std::uint64_t seed, std::uint64_t round);
  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double next_unit();

 private:
  std::uint64_t state_;
};

SimStats simulate(const SimConfig& cfg,
                  const std::function<void(const RoundRecord&)>& sink = {});

}  // namespace gausskey
