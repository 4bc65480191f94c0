#pragma once

// One-mode Gaussian channels in canonical form C(tau, r, nbar), tau != 1.

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "gausskey/symplectic.hpp"

namespace gausskey {

enum class ChannelClass { A1, C_att, C_amp, D };

std::string_view to_string(ChannelClass c);

/// Mean thermal photon number of the environment.
struct Nbar {
  double value;
};
/// Scaled thermal noise eps = 2 nbar |1 - tau|.
struct Eps {
  double value;
};
using Noise = std::variant<Nbar, Eps>;

class CanonicalChannel {
 public:
  double tau() const noexcept { return tau_; }
  double nbar() const noexcept { return nbar_; }
  /// Variance of the environment, w = 2 nbar + 1.
  double w() const noexcept { return 2.0 * nbar_ + 1.0; }
  double eps() const noexcept { return eps_of_nbar(tau_, nbar_); }
  /// 0 for A1, 2 for the other supported classes. Not used by any rate.
  int rank() const noexcept { return rank_; }
  ChannelClass class_label() const noexcept;

  static double eps_of_nbar(double tau, double nbar);
  static double nbar_of_eps(double tau, double eps);

 private:
  friend CanonicalChannel make_canonical(double tau, Noise noise);
  CanonicalChannel(double tau, double nbar, int rank) : tau_(tau), nbar_(nbar), rank_(rank) {}

  double tau_;
  double nbar_;
  int rank_;
};

/// Throws ErrorKind::UnsupportedClass for tau = 1 and ErrorKind::Domain for
/// negative or non-finite noise.
CanonicalChannel make_canonical(double tau, Noise noise);

/// V_m -> X V_m X^T + Y on `mode`, cross-correlations -> C X^T, with
/// X = sqrt(tau) I (tau > 0), 0 (tau = 0), sqrt(-tau) Z (tau < 0) and
/// Y = |1 - tau| (2 nbar + 1) I.
CovMat apply_channel(const CovMat& v, const CanonicalChannel& ch, std::size_t mode);

/// Stinespring-style dilation of a class C channel. Local mode layout is
/// {0: system, 1: environment e1, 2: environment e2}; `system_symplectic`
/// couples modes 0 and 1, `environment_state` is the TMSV(w) on (e1, e2)
/// and Eve holds both environment outputs.
struct Dilation {
  Matrix system_symplectic;
  CovMat environment_state;
  std::vector<std::size_t> eve_modes;
};

/// Beam splitter of transmissivity tau for 0 < tau < 1, two-mode squeezer of
/// gain tau for tau > 1. Classes A1 and D throw UnsupportedDilation.
Dilation dilate(const CanonicalChannel& ch);

/// Appends the two environment modes to `v` and applies the dilation to
/// `mode`. The returned state has n + 2 modes; Eve's are n and n + 1.
CovMat apply_dilation(const CovMat& v, const Dilation& dil, std::size_t mode);

}  // namespace gausskey
