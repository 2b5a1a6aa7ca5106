// Strong and weak locality of bipartite states. A state is strongly local iff
// it is a product rho_A x rho_B (every measurement on A leaves B untouched);
// it is weakly local when some measurement on A leaves every conditional B
// state equal to rho_B. For a qubit A and projective measurements, a found
// weak basis certifies separability, and the certificate is constructive: the
// two B-side decompositions induced by the basis are connected by a unitary,
// whose diagonalization rewrites the purification in explicit product form.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "locreal/matcore.hpp"

namespace locreal {

// A weak-basis search was requested for a subsystem it does not support.
class UnsupportedDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested construction needs a found verdict and none exists.
class NotApplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Measurement operators {M_i} on subsystem A with sum M_i^dag M_i = I.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Matrix> operators, double tol = 1e-9);

  // Rank-1 projective measurement onto an orthonormal basis pair.
  static MeasurementSet projective(const PureState& phi1,
                                   const PureState& phi2);

  const std::vector<Matrix>& operators() const { return operators_; }
  Index dim() const { return operators_.front().rows(); }

 private:
  std::vector<Matrix> operators_;
};

struct ConditionalOutcome {
  int index;
  double prob;
  DensityMatrix post_state_b;
  // True when prob fell below threshold and post_state_b is rho_B by
  // convention rather than by measurement update.
  bool zero_prob_convention;
};

// Normalized post-measurement states of B for each outcome of a measurement
// on A. Outcomes with prob < 1e-12 carry rho_B, flagged.
std::vector<ConditionalOutcome> conditional_states(const DensityMatrix& rho_ab,
                                                   const MeasurementSet& m);

// ||rho_AB - rho_A x rho_B||_F < tol: the strong-locality decision.
bool is_product(const DensityMatrix& rho_ab, double tol);

// Schmidt rank >= 2, counting singular values of the coefficient matrix
// above tol.
bool pure_is_entangled(const PureState& psi_ab, const std::vector<Index>& dims,
                       double tol = 1e-8);

// S(rho_B) - S(rho_iB) in bits. May be negative for generalized
// measurements; reported as-is.
double info_gain(const DensityMatrix& rho_b, const DensityMatrix& rho_ib);

// Outcome of the qubit-A projective weak-locality search. A not-found verdict
// is resolution-qualified: it reports the best residual at the given grid, it
// does not prove nonexistence.
struct WeakLocalityVerdict {
  bool found;
  std::optional<std::pair<PureState, PureState>> basis;
  double theta;
  double phi;
  double residual;
  int grid_resolution;
};

// Scans rank-1 projective bases |phi(theta, phi)>, |phi_perp> over a
// grid x grid Bloch sphere (theta in [0,pi], phi in [0,2pi)), scoring each
// point by the worst conditional's Frobenius distance from rho_B, then
// refines the best point by coordinate descent with step halving. Ties go to
// the lowest (theta, phi), so parallel and serial runs agree exactly.
WeakLocalityVerdict weak_locality_search(const DensityMatrix& rho_ab,
                                         double tol = 1e-8, int grid = 48,
                                         int jobs = 1);

// Unitary U0 connecting two pure-state decompositions of the same mixed
// state: U0 applied to the stacked dec1 vectors reproduces dec2. Lists are
// zero-padded to equal length. Computed by factoring both stacks against a
// common eigen-square-root of the mixed state and completing the resulting
// isometries (completion rows from orthonormalized standard basis vectors).
Matrix hjw_connect(const std::vector<WeightedVector>& dec1,
                   const std::vector<WeightedVector>& dec2, double tol = 1e-8);

struct UnitaryDiagonalization {
  Matrix u;       // unitary, u * u0 * u^-1 = lambda
  Matrix lambda;  // diagonal, |lambda_kk| = 1
};

// Eigendecomposition of a unitary matrix. Diagonal entries are sorted by
// ascending principal argument; eigenvector columns are phase-fixed.
UnitaryDiagonalization unitary_diagonalize(const Matrix& u0,
                                           double tol = 1e-9);

struct SeparableTerm {
  double weight;
  PureState state_a;
  PureState state_b;
};

// Convex product decomposition of a bipartite state. Construction checks that
// weights sum to 1 and that the terms reconstruct the target.
class SeparableDecomposition {
 public:
  SeparableDecomposition(std::vector<SeparableTerm> terms,
                         const DensityMatrix& target,
                         double weight_tol = 1e-8,
                         double reconstruction_tol = 1e-7);

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  Matrix reconstruct() const;

 private:
  std::vector<SeparableTerm> terms_;
};

// Separability certificate from a found weak-locality verdict: purify rho_AB
// through its eigendecomposition, expand in the found A-basis, connect the
// two induced B-side families with hjw_connect, diagonalize the connector,
// rotate the purifying basis, and read off one product term per purifying
// index. Throws NotApplicableError when the verdict is not found.
SeparableDecomposition build_separable_decomposition(
    const DensityMatrix& rho_ab, const WeakLocalityVerdict& verdict,
    double tol = 1e-8);

}  // namespace locreal
