// Dense complex linear algebra for small quantum systems: states, observables,
// tensor products, partial traces, Hermitian eigendecompositions, entropy.
// Everything here is a value type or a pure function; Eigen is the only math
// dependency. Target dimensions are desk scale (<= 16), so dense storage only.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace locreal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Construction-time validation tolerance (Hermiticity, trace, norm).
inline constexpr double kValidationTol = 1e-10;

// Entrywise comparison with an explicit absolute tolerance.
inline bool approx_equal(const Matrix& a, const Matrix& b, double atol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return ((a - b).cwiseAbs().maxCoeff() <= atol);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  return (a - b).norm();
}

// Kronecker product with block ordering (a[i,j] * b) at block (i,j).
template <typename DerivedA, typename DerivedB>
Matrix tensor(const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Matrix identity(Index n) { return Matrix::Identity(n, n); }

// Pauli operators, convention sigma_z |0> = +|0>.
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
// n . sigma for a real 3-vector n (not required to be unit here).
Matrix pauli_dot(const Eigen::Vector3d& n);

// Normalized state vector. Norm is checked at construction; the tolerance is
// overridable for deliberately perturbed inputs.
class PureState {
 public:
  explicit PureState(Vector amplitudes, double tol = kValidationTol);

  static PureState basis_state(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Matrix projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }

 private:
  Vector amplitudes_;
};

// Unnormalized ensemble member: squared norm is the ensemble weight.
struct WeightedVector {
  Vector amplitudes;

  double weight() const { return amplitudes.squaredNorm(); }
};

// Hermitian, positive semidefinite, unit-trace matrix with attached subsystem
// dimensions. dims = {dA, dB, ...}; the matrix acts on the tensor product.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<Index> dims, Matrix m, double tol = kValidationTol);

  static DensityMatrix from_pure(const PureState& psi,
                                 std::vector<Index> dims = {});
  static DensityMatrix maximally_mixed(std::vector<Index> dims);

  Index dim() const { return matrix_.rows(); }
  const std::vector<Index>& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }

  // Same matrix reinterpreted with a different subsystem split.
  DensityMatrix with_dims(std::vector<Index> dims) const;

 private:
  std::vector<Index> dims_;
  Matrix matrix_;
};

class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix m, double tol = kValidationTol);

  Index dim() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

// Reduced state on subsystem `keep` (0 = A, 1 = B) of a bipartite state.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

// Low-level partial trace over explicit dimensions; `m` need not be a valid
// density matrix (used for unnormalized post-measurement blocks).
Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, int keep);

// AB - BA. The result is anti-Hermitian for Hermitian inputs.
Matrix commutator(const HermitianObservable& a, const HermitianObservable& b);
Matrix commutator(const Matrix& a, const Matrix& b);

struct EigResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // orthonormal columns, phase-fixed
};

// Hermitian eigendecomposition. Eigenvalues ascending; each eigenvector's
// first nonzero component is made real positive so repeated runs agree.
EigResult eig_hermitian(const Matrix& h, double tol = kValidationTol);
EigResult eig_hermitian(const HermitianObservable& h);
EigResult eig_hermitian(const DensityMatrix& rho);

// Tr(rho * m).
Complex expectation(const DensityMatrix& rho, const Matrix& m);

// -sum lambda log2 lambda in bits; eigenvalues in [-1e-10, 0) clamp to zero.
double von_neumann_entropy(const DensityMatrix& rho);

namespace detail {

// Rotates each column so its first component above `zero_tol` is real
// positive. Leaves all-zero columns untouched.
void fix_column_phases(Matrix& v, double zero_tol = 1e-12);

void require(bool cond, const std::string& what);

}  // namespace detail

}  // namespace locreal
