// Two concrete, parameterized experiments exhibiting a nonzero realism gap:
// a single-qubit mixture probed with (sigma_x, sigma_y) and a two-qubit
// partially entangled pure state probed with correlated spin observables.
// The gap Tr(rho [A,B]) is purely imaginary, so each report also carries the
// Hermitian witness D = -i[A,B]; i<D> reproduces the gap as an ordinary
// observable average.

#pragma once

#include <vector>

#include "locreal/matcore.hpp"

namespace locreal {

// rho = p|0><0| + (1-p)|1><1|.
struct SingleQubitScheme {
  double p;

  explicit SingleQubitScheme(double p_in);
};

// psi = cos(alpha)|00> + sin(alpha)|11>, probed with sigma_x x sigma_x and
// (n.sigma) x (n.sigma) for a unit 3-vector n.
struct TwoQubitScheme {
  double alpha;
  Eigen::Vector3d n;

  TwoQubitScheme(double alpha_in, const Eigen::Vector3d& n_in);

  // n = (1/sqrt(2), 1/sqrt(2), 0), the choice with the closed-form gap
  // 2i cos(2 alpha).
  static Eigen::Vector3d canonical_axis();
};

struct SchemeReport {
  HermitianObservable a;
  HermitianObservable b;
  Matrix c;       // [A, B]
  Complex gap;    // Tr(rho C) = i * d_expectation
  HermitianObservable hermitian_witness_d;  // D = -iC
  double d_expectation;
};

DensityMatrix single_qubit_state(const SingleQubitScheme& s);
DensityMatrix two_qubit_state(const TwoQubitScheme& s);

// A = sigma_x, B = sigma_y; gap = 2i(2p - 1), D = 2 sigma_z.
SchemeReport run_single_qubit(const SingleQubitScheme& s);

// A = sigma_x x sigma_x, B = (n.sigma) x (n.sigma); the gap is evaluated
// numerically from Tr(rho C). At the canonical axis it equals 2i cos(2 alpha)
// and C = i(I x sigma_z + sigma_z x I).
SchemeReport run_two_qubit(const TwoQubitScheme& s);

enum class SchemeFamily { kSingleQubit, kTwoQubit };

struct SweepRow {
  double param;           // p or alpha
  double gap_imag;
  double d_expectation;
};

// Uniform inclusive grid of `steps` >= 2 points from lo to hi, ascending.
// Two-qubit sweeps use the canonical axis. Rows may be computed on `jobs`
// threads; assembly is by index, so the output never depends on jobs.
std::vector<SweepRow> sweep(SchemeFamily family, double lo, double hi,
                            int steps, int jobs = 1);

}  // namespace locreal
