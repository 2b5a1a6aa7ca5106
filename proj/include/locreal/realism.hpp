// Witness observables separating quantum mechanics from hidden-variable
// models. A hidden-variable model predicts identical averages for the joint
// quantities AB and BA; quantum mechanics gives Tr(rho[A,B]), which is nonzero
// for every pure state and every non-maximally-mixed state under the
// constructions below.

#pragma once

#include <optional>
#include <utility>

#include "locreal/matcore.hpp"

namespace locreal {

// Non-fatal verdict: the input is maximally mixed, the one state whose
// realism gap vanishes for every observable pair.
class MaximallyMixedError : public std::runtime_error {
 public:
  explicit MaximallyMixedError(Index dim, double tol)
      : std::runtime_error("state is maximally mixed within tolerance " +
                           std::to_string(tol) + " (dim " +
                           std::to_string(dim) + "); no witness exists"),
        dim_(dim),
        tol_(tol) {}

  Index dim() const { return dim_; }
  double tolerance() const { return tol_; }

 private:
  Index dim_;
  double tol_;
};

// Witness triple: Hermitian A, B with C = [A,B], and the gap Tr(rho C)
// predicted for the state the witness was built from.
struct RealismWitness {
  HermitianObservable a;
  HermitianObservable b;
  Matrix c;
  Complex predicted_gap;
};

// Hidden-variable joint model for two two-valued observables: pre-assigned
// outcome pairs (a_i, b_j) carrying probabilities p(i,j). The hidden variables
// themselves never appear; only the joint distribution is observable.
class HvmJointModel {
 public:
  HvmJointModel(Eigen::Vector2d a_values, Eigen::Vector2d b_values,
                Eigen::Matrix2d joint_probs, double tol = 1e-12);

  const Eigen::Vector2d& a_values() const { return a_; }
  const Eigen::Vector2d& b_values() const { return b_; }
  const Eigen::Matrix2d& joint_probs() const { return p_; }

 private:
  Eigen::Vector2d a_;
  Eigen::Vector2d b_;
  Eigen::Matrix2d p_;
};

// Witness for a pure state:
//   A = |perp><psi| + |psi><perp|
//   B = -i(|perp><psi| - |psi><perp|)
//   C = [A,B] = 2i(|perp><perp| - |psi><psi|),   <psi|C|psi> = -2i.
// When psi_perp is omitted it is built by orthonormalizing the standard basis
// vector with the smallest overlap against psi (ties to the lowest index).
RealismWitness pure_witness(const PureState& psi,
                            std::optional<PureState> psi_perp = std::nullopt);

// Witness for a mixed state, from its eigendecomposition. With dp_i = p_i-1/n,
// the eigenvectors at the extreme deltas give A, B with gap
// 2i(dp_max - dp_min), nonzero whenever the state is not maximally mixed.
// Throws MaximallyMixedError when every |dp_i| < tol.
RealismWitness mixed_witness(const DensityMatrix& rho, double tol = 1e-9);

// Tr(rho A B) - Tr(rho B A) = Tr(rho [A,B]). Purely imaginary; identically
// zero under any hidden-variable model.
Complex realism_gap(const DensityMatrix& rho, const HermitianObservable& a,
                    const HermitianObservable& b);

// The model's averages of AB and BA, summed in both written orders. They are
// equal by construction; returning the pair makes the symmetry checkable.
std::pair<double, double> hvm_expectation(const HvmJointModel& model);

// True iff every eigenvalue is within tol of 1/n, n the full dimension.
// A rank-deficient uniform state (e.g. diag(1/2,1/2,0) in dim 3) is not
// maximally mixed: a nonzero-gap witness still exists for it.
bool is_maximally_mixed(const DensityMatrix& rho, double tol);

}  // namespace locreal
