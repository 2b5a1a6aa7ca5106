#include "locreal/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace locreal {

using detail::require;

SingleQubitScheme::SingleQubitScheme(double p_in) : p(p_in) {
  require(p >= 0.0 && p <= 1.0, "SingleQubitScheme: p must lie in [0, 1]");
}

TwoQubitScheme::TwoQubitScheme(double alpha_in, const Eigen::Vector3d& n_in)
    : alpha(alpha_in), n(n_in) {
  require(std::abs(n.norm() - 1.0) <= 1e-10,
          "TwoQubitScheme: n must be a unit vector");
}

Eigen::Vector3d TwoQubitScheme::canonical_axis() {
  return Eigen::Vector3d(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0);
}

DensityMatrix single_qubit_state(const SingleQubitScheme& s) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = s.p;
  m(1, 1) = 1.0 - s.p;
  return DensityMatrix({2}, std::move(m));
}

DensityMatrix two_qubit_state(const TwoQubitScheme& s) {
  Vector psi = Vector::Zero(4);
  psi(0) = std::cos(s.alpha);
  psi(3) = std::sin(s.alpha);
  return DensityMatrix::from_pure(PureState(std::move(psi)), {2, 2});
}

namespace {

SchemeReport make_report(const DensityMatrix& rho, Matrix a_matrix,
                         Matrix b_matrix) {
  HermitianObservable a(std::move(a_matrix));
  HermitianObservable b(std::move(b_matrix));
  Matrix c = commutator(a, b);
  const Complex gap = expectation(rho, c);
  HermitianObservable d(Complex(0, -1) * c);
  const double d_expectation = expectation(rho, d.matrix()).real();
  require(std::abs(gap - Complex(0, 1) * d_expectation) <= 1e-9,
          "SchemeReport: gap and i<D> disagree");
  return SchemeReport{std::move(a), std::move(b),    std::move(c),
                      gap,          std::move(d), d_expectation};
}

}  // namespace

SchemeReport run_single_qubit(const SingleQubitScheme& s) {
  return make_report(single_qubit_state(s), sigma_x(), sigma_y());
}

SchemeReport run_two_qubit(const TwoQubitScheme& s) {
  const Matrix spin = pauli_dot(s.n);
  return make_report(two_qubit_state(s), tensor(sigma_x(), sigma_x()),
                     tensor(spin, spin));
}

std::vector<SweepRow> sweep(SchemeFamily family, double lo, double hi,
                            int steps, int jobs) {
  require(steps >= 2, "sweep: need at least 2 steps");
  require(hi > lo, "sweep: empty parameter range");
  require(jobs >= 1, "sweep: jobs must be at least 1");

  std::vector<SweepRow> rows(steps);
  const auto fill = [&](int begin, int end) {
    for (int k = begin; k < end; ++k) {
      const double param = lo + (hi - lo) * k / (steps - 1);
      const SchemeReport report =
          (family == SchemeFamily::kSingleQubit)
              ? run_single_qubit(SingleQubitScheme(param))
              : run_two_qubit(
                    TwoQubitScheme(param, TwoQubitScheme::canonical_axis()));
      rows[k] = {param, report.gap.imag(), report.d_expectation};
    }
  };

  if (jobs == 1 || steps < 2 * jobs) {
    fill(0, steps);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const int chunk = (steps + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back(fill, w * chunk,
                           std::min(steps, (w + 1) * chunk));
    for (auto& t : workers) t.join();
  }
  return rows;
}

}  // namespace locreal
