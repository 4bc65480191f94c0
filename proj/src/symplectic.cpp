#include "gausskey/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

namespace gausskey {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPhysicalTol = 1e-9;
constexpr double kDiscriminantTol = 1e-9;
constexpr double kDegenerateSplit = 1e-6;
constexpr double kMeasuredVarianceFloor = 1e-12;

const Eigen::Matrix2d kZ = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, -1.0).finished();

double det2(const Eigen::Ref<const Matrix>& b) { return b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0); }

void check_modes(std::span<const std::size_t> modes, std::size_t n_modes, const char* what) {
  if (modes.empty()) {
    throw Error(ErrorKind::Domain, what, std::string(what) + ": mode list is empty");
  }
  std::vector<bool> seen(n_modes, false);
  for (auto m : modes) {
    if (m >= n_modes) {
      throw Error(ErrorKind::Domain, what,
                  std::string(what) + ": mode index " + std::to_string(m) + " out of range");
    }
    if (seen[m]) {
      throw Error(ErrorKind::Domain, what,
                  std::string(what) + ": mode index " + std::to_string(m) + " repeated");
    }
    seen[m] = true;
  }
}

std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (auto m : modes) {
    idx.push_back(static_cast<Eigen::Index>(2 * m));
    idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return idx;
}

std::vector<double> hermitian_route(const Matrix& v) {
  const auto n = v.rows() / 2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(v);
  const Matrix root = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
  const Matrix k = root * symplectic_form(static_cast<std::size_t>(n)) * root;
  // i K is Hermitian with spectrum {+nu_k, -nu_k}.
  const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 2 * n - 1; i >= n; --i) {
    out.push_back(hs.eigenvalues()(i));
  }
  return out;
}

}  // namespace

double entropy_g(double x) {
  if (!(x >= 0.0)) {
    throw Error(ErrorKind::Domain, "x", "entropy_g: argument must be >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

Matrix symplectic_form(std::size_t n_modes) {
  Matrix om = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    const auto i = static_cast<Eigen::Index>(2 * k);
    om(i, i + 1) = 1.0;
    om(i + 1, i) = -1.0;
  }
  return om;
}

double physical_tolerance(const Matrix& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  return kPhysicalTol + 8.0 * std::numeric_limits<double>::epsilon() * scale * scale;
}

std::vector<double> raw_symplectic_eigenvalues(const Matrix& v) {
  const auto n = v.rows() / 2;
  if (n == 1) {
    return {std::sqrt(std::max(0.0, det2(v)))};
  }
  if (n == 2) {
    const double delta = det2(v.block(0, 0, 2, 2)) + det2(v.block(2, 2, 2, 2)) +
                         2.0 * det2(v.block(0, 2, 2, 2));
    const double det = v.determinant();
    double disc = delta * delta - 4.0 * det;
    if (disc < 0.0) {
      if (disc < -kDiscriminantTol * std::max(1.0, delta * delta)) {
        throw Error(ErrorKind::Numeric, "V",
                    "symplectic_spectrum: negative discriminant in two-mode closed form");
      }
      disc = 0.0;
    }
    if (disc < kDegenerateSplit * delta * delta) {
      // sqrt(disc) amplifies rounding when nu_+ ~ nu_- (pure states in
      // particular); the Hermitian route stays accurate there.
      return hermitian_route(v);
    }
    const double plus_sq = 0.5 * (delta + std::sqrt(disc));
    // nu_-^2 = det / nu_+^2 is the same root without the cancellation in
    // (delta - sqrt(disc)) / 2.
    const double minus_sq = plus_sq > 0.0 ? det / plus_sq : 0.0;
    return {std::sqrt(plus_sq), std::sqrt(std::max(0.0, minus_sq))};
  }
  return hermitian_route(v);
}

CovMat CovMat::from_matrix(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw Error(ErrorKind::Validity, "V", "covariance matrix must be square with even dimension");
  }
  if (!m.allFinite()) {
    throw Error(ErrorKind::Validity, "V", "covariance matrix has non-finite entries");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw Error(ErrorKind::Validity, "V", "covariance matrix is not symmetric");
  }
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorKind::Validity, "V", "covariance matrix is not positive definite");
  }
  const double tol = physical_tolerance(sym);
  for (double nu : raw_symplectic_eigenvalues(sym)) {
    if (nu < 1.0 - tol) {
      throw Error(ErrorKind::Validity, "V",
                  "covariance matrix violates the uncertainty relation (symplectic eigenvalue " +
                      std::to_string(nu) + " < 1)");
    }
  }
  return CovMat(std::move(sym));
}

CovMat CovMat::vacuum(std::size_t n_modes) {
  if (n_modes == 0) {
    throw Error(ErrorKind::Domain, "n_modes", "vacuum: need at least one mode");
  }
  return CovMat(Matrix::Identity(2 * n_modes, 2 * n_modes));
}

Eigen::Matrix2d CovMat::block(std::size_t i, std::size_t j) const {
  return m_.block<2, 2>(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j));
}

CovMat tmsv(double mu) {
  if (!(mu >= 1.0)) {
    throw Error(ErrorKind::Domain, "mu", "tmsv: variance mu must be >= 1");
  }
  const double c = std::sqrt((mu - 1.0) * (mu + 1.0));
  Matrix m(4, 4);
  m << mu * Eigen::Matrix2d::Identity(), c * kZ, c * kZ, mu * Eigen::Matrix2d::Identity();
  return CovMat::from_matrix(m);
}

CovMat thermal(double w) {
  if (!(w >= 1.0)) {
    throw Error(ErrorKind::Domain, "w", "thermal: variance w must be >= 1");
  }
  return CovMat::from_matrix(w * Matrix::Identity(2, 2));
}

CovMat tensor(const CovMat& a, const CovMat& b) {
  const auto na = a.matrix().rows();
  const auto nb = b.matrix().rows();
  Matrix m = Matrix::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.matrix();
  m.bottomRightCorner(nb, nb) = b.matrix();
  return CovMat::from_matrix(m);
}

SymplecticSpectrum symplectic_spectrum(const CovMat& v) {
  auto values = raw_symplectic_eigenvalues(v.matrix());
  for (auto& nu : values) {
    nu = std::max(nu, 1.0);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
  return {std::move(values)};
}

double von_neumann_entropy(const CovMat& v) {
  double s = 0.0;
  for (double nu : symplectic_spectrum(v).values) {
    s += entropy_g(0.5 * (nu - 1.0));
  }
  return s;
}

CovMat partial_trace(const CovMat& v, std::span<const std::size_t> keep) {
  check_modes(keep, v.n_modes(), "keep");
  const auto idx = quadrature_indices(keep);
  return CovMat::from_matrix(v.matrix()(idx, idx));
}

bool is_symplectic(const Matrix& s, double tol) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0 || s.rows() == 0) {
    return false;
  }
  const Matrix om = symplectic_form(static_cast<std::size_t>(s.rows() / 2));
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  return (s * om * s.transpose() - om).cwiseAbs().maxCoeff() <= tol * scale * scale;
}

CovMat apply_symplectic(const CovMat& v, const Matrix& s, std::span<const std::size_t> modes) {
  check_modes(modes, v.n_modes(), "modes");
  if (s.rows() != static_cast<Eigen::Index>(2 * modes.size()) || !is_symplectic(s)) {
    throw Error(ErrorKind::Domain, "S", "apply_symplectic: matrix is not symplectic on the given modes");
  }
  const auto dim = v.matrix().rows();
  Matrix full = Matrix::Identity(dim, dim);
  const auto idx = quadrature_indices(modes);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    full.row(idx[r]).setZero();
  }
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      full(idx[r], idx[c]) = s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  const Matrix out = full * v.matrix() * full.transpose();
  return CovMat::from_matrix(0.5 * (out + out.transpose()));
}

Matrix beam_splitter(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::Domain, "eta", "beam_splitter: transmissivity must lie in [0, 1]");
  }
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Matrix s(4, 4);
  s << t * id, r * id, -r * id, t * id;
  return s;
}

Matrix balanced_beam_splitter() { return beam_splitter(0.5); }

Matrix two_mode_squeezer(double gain) {
  if (!(gain >= 1.0)) {
    throw Error(ErrorKind::Domain, "gain", "two_mode_squeezer: gain must be >= 1");
  }
  const double a = std::sqrt(gain);
  const double b = std::sqrt(gain - 1.0);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Matrix s(4, 4);
  s << a * id, b * kZ, b * kZ, a * id;
  return s;
}

Matrix phase_rotation(double theta) {
  Matrix s(2, 2);
  s << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return s;
}

Matrix single_mode_squeezer(double r) {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = std::exp(-r);
  s(1, 1) = std::exp(r);
  return s;
}

CovMat homodyne_condition(const CovMat& v, std::size_t measured_mode, Quadrature quadrature) {
  const auto n = v.n_modes();
  if (n < 2) {
    throw Error(ErrorKind::Domain, "V", "homodyne_condition: need at least two modes");
  }
  if (measured_mode >= n) {
    throw Error(ErrorKind::Domain, "measured_mode", "homodyne_condition: mode index out of range");
  }
  const auto k = static_cast<Eigen::Index>(2 * measured_mode + (quadrature == Quadrature::q ? 0 : 1));
  const double var = v(k, k);
  if (!(var > kMeasuredVarianceFloor)) {
    throw Error(ErrorKind::DegenerateMeasurement, "measured_mode",
                "homodyne_condition: measured quadrature has vanishing variance");
  }
  std::vector<std::size_t> keep;
  for (std::size_t m = 0; m < n; ++m) {
    if (m != measured_mode) {
      keep.push_back(m);
    }
  }
  const auto idx = quadrature_indices(keep);
  const Matrix a = v.matrix()(idx, idx);
  const Eigen::VectorXd c = v.matrix()(idx, k);
  return CovMat::from_matrix(a - (c * c.transpose()) / var);
}

}  // namespace gausskey
