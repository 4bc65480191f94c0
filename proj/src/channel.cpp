#include "gausskey/channel.hpp"

#include <cmath>
#include <string>

namespace gausskey {

std::string_view to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::A1:
      return "A1";
    case ChannelClass::C_att:
      return "C_att";
    case ChannelClass::C_amp:
      return "C_amp";
    case ChannelClass::D:
      return "D";
  }
  return "?";
}

ChannelClass CanonicalChannel::class_label() const noexcept {
  if (tau_ == 0.0) {
    return ChannelClass::A1;
  }
  if (tau_ < 0.0) {
    return ChannelClass::D;
  }
  return tau_ < 1.0 ? ChannelClass::C_att : ChannelClass::C_amp;
}

double CanonicalChannel::eps_of_nbar(double tau, double nbar) {
  return 2.0 * nbar * std::abs(1.0 - tau);
}

double CanonicalChannel::nbar_of_eps(double tau, double eps) {
  return eps / (2.0 * std::abs(1.0 - tau));
}

CanonicalChannel make_canonical(double tau, Noise noise) {
  if (!std::isfinite(tau)) {
    throw Error(ErrorKind::Domain, "tau", "tau must be finite");
  }
  if (tau == 1.0) {
    throw Error(ErrorKind::UnsupportedClass, "tau", "classes B1/B2 (tau=1) unsupported");
  }
  double nbar = 0.0;
  if (const auto* n = std::get_if<Nbar>(&noise)) {
    if (!(n->value >= 0.0) || !std::isfinite(n->value)) {
      throw Error(ErrorKind::Domain, "nbar", "nbar must be a finite value >= 0");
    }
    nbar = n->value;
  } else {
    const double eps = std::get<Eps>(noise).value;
    if (!(eps >= 0.0) || !std::isfinite(eps)) {
      throw Error(ErrorKind::Domain, "eps", "eps must be a finite value >= 0");
    }
    nbar = CanonicalChannel::nbar_of_eps(tau, eps);
  }
  return CanonicalChannel(tau, nbar, tau == 0.0 ? 0 : 2);
}

CovMat apply_channel(const CovMat& v, const CanonicalChannel& ch, std::size_t mode) {
  if (mode >= v.n_modes()) {
    throw Error(ErrorKind::Domain, "mode", "apply_channel: mode index out of range");
  }
  const double tau = ch.tau();
  Eigen::Matrix2d x = Eigen::Matrix2d::Zero();
  if (tau > 0.0) {
    x = std::sqrt(tau) * Eigen::Matrix2d::Identity();
  } else if (tau < 0.0) {
    x(0, 0) = std::sqrt(-tau);
    x(1, 1) = -std::sqrt(-tau);
  }
  const Eigen::Matrix2d y = std::abs(1.0 - tau) * ch.w() * Eigen::Matrix2d::Identity();

  const auto dim = v.matrix().rows();
  // Embedding of X on the target mode; identity elsewhere.
  Matrix t = Matrix::Identity(dim, dim);
  const auto k = static_cast<Eigen::Index>(2 * mode);
  t.block<2, 2>(k, k) = x;
  Matrix out = t * v.matrix() * t.transpose();
  out.block<2, 2>(k, k) += y;
  return CovMat::from_matrix(0.5 * (out + out.transpose()));
}

Dilation dilate(const CanonicalChannel& ch) {
  const double tau = ch.tau();
  Matrix coupling;
  switch (ch.class_label()) {
    case ChannelClass::C_att:
      coupling = beam_splitter(tau);
      break;
    case ChannelClass::C_amp:
      coupling = two_mode_squeezer(tau);
      break;
    default:
      throw Error(ErrorKind::UnsupportedDilation, "tau",
                  "dilation is only available for class C channels (0 < tau < 1 or tau > 1)");
  }
  return Dilation{std::move(coupling), tmsv(ch.w()), {1, 2}};
}

CovMat apply_dilation(const CovMat& v, const Dilation& dil, std::size_t mode) {
  if (mode >= v.n_modes()) {
    throw Error(ErrorKind::Domain, "mode", "apply_dilation: mode index out of range");
  }
  const CovMat joint = tensor(v, dil.environment_state);
  const std::size_t env = v.n_modes();
  const std::size_t modes[] = {mode, env};
  return apply_symplectic(joint, dil.system_symplectic, modes);
}

}  // namespace gausskey
