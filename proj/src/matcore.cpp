#include "locreal/matcore.hpp"

#include <cmath>
#include <numeric>

namespace locreal {

namespace detail {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void fix_column_phases(Matrix& v, double zero_tol) {
  for (Index c = 0; c < v.cols(); ++c) {
    for (Index r = 0; r < v.rows(); ++r) {
      const double mag = std::abs(v(r, c));
      if (mag > zero_tol) {
        v.col(c) *= std::conj(v(r, c)) / mag;
        break;
      }
    }
  }
}

}  // namespace detail

using detail::require;

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix pauli_dot(const Eigen::Vector3d& n) {
  return n.x() * sigma_x() + n.y() * sigma_y() + n.z() * sigma_z();
}

PureState::PureState(Vector amplitudes, double tol)
    : amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() >= 1, "PureState: empty amplitude vector");
  require(std::abs(amplitudes_.norm() - 1.0) <= tol,
          "PureState: amplitudes are not normalized");
}

PureState PureState::basis_state(Index dim, Index k) {
  require(dim >= 1 && k >= 0 && k < dim, "basis_state: index out of range");
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

namespace {

Index dims_product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

}  // namespace

DensityMatrix::DensityMatrix(std::vector<Index> dims, Matrix m, double tol)
    : dims_(std::move(dims)), matrix_(std::move(m)) {
  require(!dims_.empty(), "DensityMatrix: dims must be non-empty");
  for (Index d : dims_)
    require(d >= 1, "DensityMatrix: subsystem dimensions must be positive");
  require(matrix_.rows() == matrix_.cols(),
          "DensityMatrix: matrix must be square");
  require(matrix_.rows() == dims_product(dims_),
          "DensityMatrix: matrix size does not match product of dims");
  require((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "DensityMatrix: matrix is not Hermitian");
  require(std::abs(matrix_.trace() - Complex(1.0, 0.0)) <= tol,
          "DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_,
                                               Eigen::EigenvaluesOnly);
  require(solver.eigenvalues().minCoeff() >= -tol,
          "DensityMatrix: matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi,
                                       std::vector<Index> dims) {
  if (dims.empty()) dims = {psi.dim()};
  return DensityMatrix(std::move(dims), psi.projector());
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<Index> dims) {
  const Index n = dims_product(dims);
  return DensityMatrix(std::move(dims), Matrix::Identity(n, n) / double(n));
}

DensityMatrix DensityMatrix::with_dims(std::vector<Index> dims) const {
  return DensityMatrix(std::move(dims), matrix_);
}

HermitianObservable::HermitianObservable(Matrix m, double tol)
    : matrix_(std::move(m)) {
  require(matrix_.rows() == matrix_.cols(),
          "HermitianObservable: matrix must be square");
  require(matrix_.size() > 0, "HermitianObservable: empty matrix");
  require((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "HermitianObservable: matrix is not Hermitian");
}

Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, int keep) {
  require(m.rows() == m.cols() && m.rows() == dim_a * dim_b,
          "partial_trace: matrix size does not match dim_a * dim_b");
  require(keep == 0 || keep == 1, "partial_trace: keep must be 0 or 1");
  if (keep == 1) {
    Matrix out = Matrix::Zero(dim_b, dim_b);
    for (Index a = 0; a < dim_a; ++a)
      out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
    return out;
  }
  Matrix out = Matrix::Zero(dim_a, dim_a);
  for (Index a = 0; a < dim_a; ++a)
    for (Index c = 0; c < dim_a; ++c)
      out(a, c) = m.block(a * dim_b, c * dim_b, dim_b, dim_b).trace();
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  require(rho.dims().size() == 2,
          "partial_trace: state must have exactly 2 subsystem dims");
  const Index da = rho.dims()[0];
  const Index db = rho.dims()[1];
  Matrix reduced = partial_trace(rho.matrix(), da, db, keep);
  return DensityMatrix({keep == 0 ? da : db}, std::move(reduced));
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
          "commutator: dimension mismatch");
  return a * b - b * a;
}

Matrix commutator(const HermitianObservable& a, const HermitianObservable& b) {
  return commutator(a.matrix(), b.matrix());
}

EigResult eig_hermitian(const Matrix& h, double tol) {
  require(h.rows() == h.cols(), "eig_hermitian: matrix must be square");
  require((h - h.adjoint()).cwiseAbs().maxCoeff() <= tol,
          "eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  require(solver.info() == Eigen::Success, "eig_hermitian: solver failed");
  EigResult result{solver.eigenvalues(), solver.eigenvectors()};
  detail::fix_column_phases(result.eigenvectors);
  return result;
}

EigResult eig_hermitian(const HermitianObservable& h) {
  return eig_hermitian(h.matrix());
}

EigResult eig_hermitian(const DensityMatrix& rho) {
  return eig_hermitian(rho.matrix());
}

Complex expectation(const DensityMatrix& rho, const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() == rho.dim(),
          "expectation: dimension mismatch");
  return (rho.matrix() * m).trace();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

}  // namespace locreal
