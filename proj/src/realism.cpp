#include "locreal/realism.hpp"

#include <cmath>

namespace locreal {

using detail::require;

HvmJointModel::HvmJointModel(Eigen::Vector2d a_values, Eigen::Vector2d b_values,
                             Eigen::Matrix2d joint_probs, double tol)
    : a_(std::move(a_values)), b_(std::move(b_values)),
      p_(std::move(joint_probs)) {
  require(p_.minCoeff() >= 0.0, "HvmJointModel: negative joint probability");
  require(std::abs(p_.sum() - 1.0) <= tol,
          "HvmJointModel: joint probabilities do not sum to 1");
}

namespace {

// Orthonormalized standard basis vector with the smallest |overlap| with psi,
// ties broken by lowest index.
PureState default_perp(const PureState& psi) {
  const Vector& amps = psi.amplitudes();
  Index best = 0;
  double best_overlap = std::abs(amps(0));
  for (Index k = 1; k < amps.size(); ++k) {
    if (std::abs(amps(k)) < best_overlap) {
      best_overlap = std::abs(amps(k));
      best = k;
    }
  }
  Vector v = Vector::Unit(amps.size(), best);
  v -= amps * amps.dot(v);  // dot conjugates the left argument
  const double norm = v.norm();
  require(norm > 1e-8, "pure_witness: could not build an orthogonal state");
  return PureState(v / norm);
}

RealismWitness witness_from_pair(const Vector& psi, const Vector& perp,
                                 Complex predicted_gap) {
  const Matrix cross = perp * psi.adjoint();  // |perp><psi|
  Matrix a = cross + cross.adjoint();
  Matrix b = Complex(0, -1) * (cross - cross.adjoint());
  HermitianObservable oa(std::move(a));
  HermitianObservable ob(std::move(b));
  Matrix c = commutator(oa, ob);
  return RealismWitness{std::move(oa), std::move(ob), std::move(c),
                        predicted_gap};
}

}  // namespace

RealismWitness pure_witness(const PureState& psi,
                            std::optional<PureState> psi_perp) {
  require(psi.dim() >= 2, "pure_witness: state dimension must be at least 2");
  PureState perp = psi_perp ? std::move(*psi_perp) : default_perp(psi);
  require(perp.dim() == psi.dim(), "pure_witness: dimension mismatch");
  require(std::abs(psi.amplitudes().dot(perp.amplitudes())) <= kValidationTol,
          "pure_witness: psi_perp is not orthogonal to psi");

  RealismWitness w =
      witness_from_pair(psi.amplitudes(), perp.amplitudes(), Complex(0, 0));
  w.predicted_gap =
      (psi.amplitudes().adjoint() * w.c * psi.amplitudes()).value();
  require(std::abs(w.predicted_gap - Complex(0, -2)) <= kValidationTol,
          "pure_witness: gap deviates from -2i");
  return w;
}

RealismWitness mixed_witness(const DensityMatrix& rho, double tol) {
  const EigResult eig = eig_hermitian(rho);
  const Index n = rho.dim();
  Eigen::VectorXd deltas =
      eig.eigenvalues.array() - 1.0 / static_cast<double>(n);

  if (deltas.cwiseAbs().maxCoeff() < tol) throw MaximallyMixedError(n, tol);

  // Extreme deltas maximize the gap; ties keep the lowest sort position.
  Index hi = 0, lo = 0;
  for (Index i = 1; i < n; ++i) {
    if (deltas(i) > deltas(hi)) hi = i;
    if (deltas(i) < deltas(lo)) lo = i;
  }

  // witness_from_pair(x, y) has C = 2i(|y><y| - |x><x|): the max-delta
  // eigenvector takes the y role so the gap comes out 2i(dp_max - dp_min).
  const Complex gap(0.0, 2.0 * (deltas(hi) - deltas(lo)));
  RealismWitness w = witness_from_pair(eig.eigenvectors.col(lo),
                                       eig.eigenvectors.col(hi), gap);
  require(std::abs(expectation(rho, w.c) - gap) <= 1e-9,
          "mixed_witness: predicted gap deviates from Tr(rho C)");
  return w;
}

Complex realism_gap(const DensityMatrix& rho, const HermitianObservable& a,
                    const HermitianObservable& b) {
  require(a.dim() == rho.dim() && b.dim() == rho.dim(),
          "realism_gap: dimension mismatch");
  return expectation(rho, a.matrix() * b.matrix()) -
         expectation(rho, b.matrix() * a.matrix());
}

std::pair<double, double> hvm_expectation(const HvmJointModel& model) {
  double ab = 0.0, ba = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Grouping the pre-assigned outcome product first makes the order
      // symmetry exact: a_i * b_j and b_j * a_i are the same double.
      ab += model.joint_probs()(i, j) * (model.a_values()(i) *
                                         model.b_values()(j));
      ba += model.joint_probs()(i, j) * (model.b_values()(j) *
                                         model.a_values()(i));
    }
  }
  return {ab, ba};
}

bool is_maximally_mixed(const DensityMatrix& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(),
                                               Eigen::EigenvaluesOnly);
  const double uniform = 1.0 / static_cast<double>(rho.dim());
  return (solver.eigenvalues().array() - uniform).abs().maxCoeff() <= tol;
}

}  // namespace locreal
