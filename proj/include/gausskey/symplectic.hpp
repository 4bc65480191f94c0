#pragma once

// Covariance-matrix algebra for bosonic Gaussian states.
//
// Convention: [q, p] = 2i, so the vacuum has unit quadrature variance and a
// thermal mode with mean photon number n has variance 2n + 1. Quadratures are
// ordered (q_0, p_0, q_1, p_1, ...). Modes are indexed from 0. Entropies are
// in bits.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gausskey/errors.hpp"

namespace gausskey {

using Matrix = Eigen::MatrixXd;

enum class Quadrature { q, p };

/// Thermal entropy g(x) = (x+1) log2(x+1) - x log2(x), with g(0) = 0.
double entropy_g(double x);

/// Symmetric, positive-definite covariance matrix of an n-mode Gaussian state
/// obeying the uncertainty relation (all symplectic eigenvalues >= 1).
class CovMat {
 public:
  /// Validates symmetry (1e-12 relative to the largest entry), positive
  /// definiteness and physicality, then stores the symmetrized matrix.
  static CovMat from_matrix(const Matrix& m);
  static CovMat vacuum(std::size_t n_modes);

  std::size_t n_modes() const noexcept { return static_cast<std::size_t>(m_.rows() / 2); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// 2x2 block coupling mode i to mode j.
  Eigen::Matrix2d block(std::size_t i, std::size_t j) const;

 private:
  explicit CovMat(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Symplectic eigenvalues, sorted descending and clamped to >= 1.
struct SymplecticSpectrum {
  std::vector<double> values;
};

/// Two-mode squeezed vacuum with quadrature variance mu on each mode.
CovMat tmsv(double mu);
/// Single-mode thermal state w * I.
CovMat thermal(double w);
/// Tensor product: modes of `a` followed by modes of `b`.
CovMat tensor(const CovMat& a, const CovMat& b);

/// Standard symplectic form, block-diagonal in [[0, 1], [-1, 0]].
Matrix symplectic_form(std::size_t n_modes);

SymplecticSpectrum symplectic_spectrum(const CovMat& v);
double von_neumann_entropy(const CovMat& v);

/// Unclamped symplectic eigenvalues of a symmetric positive-definite matrix,
/// descending. One mode uses sqrt(det), two modes the closed form in the
/// seralian Delta (near-degenerate spectra excepted), three or more the
/// Hermitian matrix i V^1/2 Omega V^1/2.
std::vector<double> raw_symplectic_eigenvalues(const Matrix& v);

/// Allowed undershoot below 1 for a symplectic eigenvalue of `v`: 1e-9 plus
/// the rounding floor of a matrix with entries of this magnitude.
double physical_tolerance(const Matrix& v);

/// Principal submatrix on the listed modes, in the order given.
CovMat partial_trace(const CovMat& v, std::span<const std::size_t> keep);

bool is_symplectic(const Matrix& s, double tol = 1e-10);

/// V -> S V S^T, with S (2m x 2m) acting on the listed modes.
CovMat apply_symplectic(const CovMat& v, const Matrix& s,
                        std::span<const std::size_t> modes);

/// a' = sqrt(eta) a + sqrt(1-eta) b,  b' = -sqrt(1-eta) a + sqrt(eta) b.
Matrix beam_splitter(double eta);
Matrix balanced_beam_splitter();
/// Phase-insensitive amplifier coupling: a' = sqrt(G) a + sqrt(G-1) Z b,
/// b' = sqrt(G-1) Z a + sqrt(G) b with Z = diag(1, -1).
Matrix two_mode_squeezer(double gain);
Matrix phase_rotation(double theta);
/// q -> e^{-r} q, p -> e^{r} p.
Matrix single_mode_squeezer(double r);

/// Conditional covariance of the remaining modes after homodyning
/// `quadrature` of `measured_mode`. Independent of the outcome value.
CovMat homodyne_condition(const CovMat& v, std::size_t measured_mode, Quadrature quadrature);

}  // namespace gausskey
