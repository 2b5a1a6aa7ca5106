#include "locreal/locality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace locreal {

using detail::require;

namespace {

constexpr double kZeroProbThreshold = 1e-12;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

MeasurementSet::MeasurementSet(std::vector<Matrix> operators, double tol)
    : operators_(std::move(operators)) {
  require(!operators_.empty(), "MeasurementSet: no operators");
  const Index d = operators_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& m : operators_) {
    require(m.rows() == d && m.cols() == d,
            "MeasurementSet: operators must be square and equally sized");
    sum += m.adjoint() * m;
  }
  require((sum - Matrix::Identity(d, d)).norm() <= tol,
          "MeasurementSet: operators do not satisfy sum M_i^dag M_i = I");
}

MeasurementSet MeasurementSet::projective(const PureState& phi1,
                                          const PureState& phi2) {
  require(phi1.dim() == phi2.dim(), "projective: dimension mismatch");
  return MeasurementSet({phi1.projector(), phi2.projector()});
}

std::vector<ConditionalOutcome> conditional_states(const DensityMatrix& rho_ab,
                                                   const MeasurementSet& m) {
  require(rho_ab.dims().size() == 2,
          "conditional_states: state must be bipartite");
  const Index da = rho_ab.dims()[0];
  const Index db = rho_ab.dims()[1];
  require(m.dim() == da,
          "conditional_states: measurement does not act on subsystem A");

  const DensityMatrix rho_b = partial_trace(rho_ab, 1);
  const Matrix identity_b = Matrix::Identity(db, db);

  std::vector<ConditionalOutcome> outcomes;
  outcomes.reserve(m.operators().size());
  for (std::size_t i = 0; i < m.operators().size(); ++i) {
    const Matrix& op = m.operators()[i];
    const double prob =
        (tensor(op.adjoint() * op, identity_b) * rho_ab.matrix())
            .trace()
            .real();
    if (prob < kZeroProbThreshold) {
      outcomes.push_back(
          {static_cast<int>(i), std::max(prob, 0.0), rho_b, true});
      continue;
    }
    const Matrix full_op = tensor(op, identity_b);
    Matrix raw = full_op * rho_ab.matrix() * full_op.adjoint();
    Matrix reduced = partial_trace(raw, da, db, 1);
    reduced /= reduced.trace().real();
    outcomes.push_back({static_cast<int>(i), prob,
                        DensityMatrix({db}, std::move(reduced)), false});
  }
  return outcomes;
}

bool is_product(const DensityMatrix& rho_ab, double tol) {
  require(rho_ab.dims().size() == 2, "is_product: state must be bipartite");
  const DensityMatrix rho_a = partial_trace(rho_ab, 0);
  const DensityMatrix rho_b = partial_trace(rho_ab, 1);
  return frobenius_distance(rho_ab.matrix(),
                            tensor(rho_a.matrix(), rho_b.matrix())) < tol;
}

bool pure_is_entangled(const PureState& psi_ab, const std::vector<Index>& dims,
                       double tol) {
  require(dims.size() == 2, "pure_is_entangled: need exactly 2 dims");
  const Index da = dims[0];
  const Index db = dims[1];
  require(da * db == psi_ab.dim(),
          "pure_is_entangled: dims product does not match state dimension");
  Matrix coeff(da, db);
  for (Index a = 0; a < da; ++a)
    coeff.row(a) = psi_ab.amplitudes().segment(a * db, db).transpose();
  Eigen::JacobiSVD<Matrix> svd(coeff);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank >= 2;
}

double info_gain(const DensityMatrix& rho_b, const DensityMatrix& rho_ib) {
  require(rho_b.dim() == rho_ib.dim(), "info_gain: dimension mismatch");
  return von_neumann_entropy(rho_b) - von_neumann_entropy(rho_ib);
}

namespace {

// Orthonormal qubit basis at Bloch angles (theta, phi).
std::pair<Vector, Vector> bloch_basis(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex phase = std::polar(1.0, phi);
  Vector v1(2), v2(2);
  v1 << Complex(c, 0), phase * s;
  v2 << -std::conj(phase) * s, Complex(c, 0);
  return {std::move(v1), std::move(v2)};
}

// Worst-outcome Frobenius distance of the conditional B states from rho_b for
// the projective basis (v1, v2) on a qubit A. Zero-probability outcomes
// contribute nothing (convention: conditional is rho_b).
double basis_residual(const Matrix& rho, Index db, const Matrix& rho_b,
                      const Vector& v1, const Vector& v2) {
  double worst = 0.0;
  for (const Vector* v : {&v1, &v2}) {
    Matrix raw = Matrix::Zero(db, db);
    for (Index a = 0; a < 2; ++a)
      for (Index c = 0; c < 2; ++c)
        raw += std::conj((*v)(a)) * (*v)(c)*rho.block(a * db, c * db, db, db);
    const double prob = raw.trace().real();
    if (prob < kZeroProbThreshold) continue;
    worst = std::max(worst, (raw / prob - rho_b).norm());
  }
  return worst;
}

struct GridPoint {
  double residual;
  double theta;
  double phi;
};

// Strictly better: lower residual, exact ties to the lowest (theta, phi).
bool better(const GridPoint& a, const GridPoint& b) {
  if (a.residual != b.residual) return a.residual < b.residual;
  if (a.theta != b.theta) return a.theta < b.theta;
  return a.phi < b.phi;
}

}  // namespace

WeakLocalityVerdict weak_locality_search(const DensityMatrix& rho_ab,
                                         double tol, int grid, int jobs) {
  require(rho_ab.dims().size() == 2,
          "weak_locality_search: state must be bipartite");
  if (rho_ab.dims()[0] != 2)
    throw UnsupportedDimensionError(
        "weak_locality_search: subsystem A must be two-dimensional");
  require(tol > 0, "weak_locality_search: tolerance must be positive");
  require(grid >= 2, "weak_locality_search: grid must be at least 2");
  require(jobs >= 1, "weak_locality_search: jobs must be at least 1");

  const Index db = rho_ab.dims()[1];
  const Matrix& rho = rho_ab.matrix();
  const Matrix rho_b = partial_trace(rho, 2, db, 1);

  const double theta_step = kPi / (grid - 1);
  const double phi_step = 2.0 * kPi / grid;
  const auto score_at = [&](double theta, double phi) {
    const auto [v1, v2] = bloch_basis(theta, phi);
    return basis_residual(rho, db, rho_b, v1, v2);
  };
  const auto scan = [&](int begin, int end) {
    GridPoint best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int idx = begin; idx < end; ++idx) {
      const double theta = theta_step * (idx / grid);
      const double phi = phi_step * (idx % grid);
      const GridPoint point{score_at(theta, phi), theta, phi};
      if (better(point, best)) best = point;
    }
    return best;
  };

  const int total = grid * grid;
  GridPoint best;
  if (jobs == 1 || total < 2 * jobs) {
    best = scan(0, total);
  } else {
    // Chunked parallel map; merging local bests in chunk order reproduces
    // the serial tie-breaking exactly.
    std::vector<GridPoint> bests(jobs);
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    const int chunk = (total + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w) {
      const int begin = w * chunk;
      const int end = std::min(total, begin + chunk);
      workers.emplace_back(
          [&, w, begin, end] { bests[w] = scan(begin, end); });
    }
    for (auto& t : workers) t.join();
    best = bests.front();
    for (int w = 1; w < jobs; ++w)
      if (better(bests[w], best)) best = bests[w];
  }

  // Coordinate descent around the best grid point, halving both steps each
  // sweep. 40 halvings take the step far below any useful resolution.
  double ht = theta_step, hp = phi_step;
  for (int iter = 0; iter < 40; ++iter) {
    for (int coord = 0; coord < 2; ++coord) {
      const double h = (coord == 0) ? ht : hp;
      for (const double delta : {+h, -h}) {
        GridPoint cand{0.0, best.theta + (coord == 0 ? delta : 0.0),
                       best.phi + (coord == 1 ? delta : 0.0)};
        cand.residual = score_at(cand.theta, cand.phi);
        if (cand.residual < best.residual) best = cand;
      }
    }
    ht /= 2.0;
    hp /= 2.0;
  }

  // Canonical angle ranges; the state is unchanged up to global phase.
  double theta = best.theta, phi = best.phi;
  if (theta < 0.0) {
    theta = -theta;
    phi += kPi;
  }
  if (theta > kPi) {
    theta = 2.0 * kPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0.0) phi += 2.0 * kPi;

  WeakLocalityVerdict verdict{false, std::nullopt, theta, phi,
                              best.residual, grid};
  if (best.residual < tol) {
    auto [v1, v2] = bloch_basis(theta, phi);
    verdict.found = true;
    verdict.basis.emplace(PureState(std::move(v1)), PureState(std::move(v2)));
  }
  return verdict;
}

namespace {

// Stacks the decomposition as d x n with one column per member, zero-padding
// to n columns.
Matrix stack_columns(const std::vector<WeightedVector>& dec, Index d,
                     Index n) {
  Matrix k = Matrix::Zero(d, n);
  for (std::size_t i = 0; i < dec.size(); ++i)
    k.col(static_cast<Index>(i)) = dec[i].amplitudes;
  return k;
}

// Completes r orthonormal rows to an n x n unitary by orthonormalizing
// standard basis vectors in index order.
Matrix complete_rows(const Matrix& w, Index n) {
  const Index r = w.rows();
  Matrix full(n, n);
  full.topRows(r) = w;
  Index filled = r;
  for (Index j = 0; j < n && filled < n; ++j) {
    Vector v = Vector::Unit(n, j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index m = 0; m < filled; ++m) {
        const Vector row = full.row(m).transpose();
        v -= row * row.dot(v);
      }
    const double norm = v.norm();
    if (norm > 1e-6) full.row(filled++) = (v / norm).transpose();
  }
  detail::require(filled == n, "hjw_connect: completion failed");
  return full;
}

}  // namespace

Matrix hjw_connect(const std::vector<WeightedVector>& dec1,
                   const std::vector<WeightedVector>& dec2, double tol) {
  require(!dec1.empty() && !dec2.empty(),
          "hjw_connect: decompositions must be non-empty");
  const Index d = dec1.front().amplitudes.size();
  for (const auto& list : {&dec1, &dec2})
    for (const WeightedVector& v : *list)
      require(v.amplitudes.size() == d,
              "hjw_connect: member vectors have mixed dimensions");

  const Index n = static_cast<Index>(std::max(dec1.size(), dec2.size()));
  const Matrix k1 = stack_columns(dec1, d, n);
  const Matrix k2 = stack_columns(dec2, d, n);
  const Matrix rho1 = k1 * k1.adjoint();
  const Matrix rho2 = k2 * k2.adjoint();
  const double rho_diff = (rho1 - rho2).norm();
  require(rho_diff <= tol,
          "hjw_connect: decompositions describe different mixed states");

  const Matrix rho = 0.5 * (rho1 + rho2);
  require(rho.trace().real() > kZeroProbThreshold,
          "hjw_connect: decompositions of the zero matrix");
  const EigResult eig = eig_hermitian(rho);
  const double rank_cut =
      std::max(eig.eigenvalues.maxCoeff() * 1e-12, 1e-14);
  Index rank = 0;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > rank_cut) ++rank;

  // Factor K_i = R W_i against the eigen-square-root R; the W_i have
  // orthonormal rows spanning the decompositions' coordinate frames.
  const Matrix v_r = eig.eigenvectors.rightCols(rank);
  const Eigen::VectorXd d_r = eig.eigenvalues.tail(rank);
  const Matrix r_factor = v_r * d_r.cwiseSqrt().asDiagonal();
  const Matrix w1 =
      d_r.cwiseSqrt().cwiseInverse().asDiagonal() * (v_r.adjoint() * k1);
  const Matrix w2 =
      d_r.cwiseSqrt().cwiseInverse().asDiagonal() * (v_r.adjoint() * k2);

  const double range_tol = std::max(100.0 * rho_diff, 1e-7);
  require((r_factor * w1 - k1).norm() <= range_tol &&
              (r_factor * w2 - k2).norm() <= range_tol,
          "hjw_connect: decomposition ranks are inconsistent with the state");

  const Matrix w1_full = complete_rows(w1, n);
  const Matrix w2_full = complete_rows(w2, n);
  Matrix u0 = (w1_full.adjoint() * w2_full).transpose();

  const double map_residual = (u0 * k1.transpose() - k2.transpose()).norm();
  require(map_residual <= std::max(1e-8, 100.0 * rho_diff),
          "hjw_connect: connection residual exceeds tolerance");
  return u0;
}

UnitaryDiagonalization unitary_diagonalize(const Matrix& u0, double tol) {
  require(u0.rows() == u0.cols() && u0.rows() >= 1,
          "unitary_diagonalize: matrix must be square");
  const Index n = u0.rows();
  require((u0.adjoint() * u0 - Matrix::Identity(n, n)).norm() <=
              tol * std::sqrt(static_cast<double>(n)),
          "unitary_diagonalize: input is not unitary");

  Eigen::ComplexSchur<Matrix> schur(u0, true);
  require(schur.info() == Eigen::Success, "unitary_diagonalize: Schur failed");

  // A unitary matrix is normal, so the Schur form is diagonal up to roundoff.
  Vector eigenvalues = schur.matrixT().diagonal();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::arg(eigenvalues(a)) < std::arg(eigenvalues(b));
  });

  Matrix basis(n, n);
  Matrix lambda = Matrix::Zero(n, n);
  for (Index m = 0; m < n; ++m) {
    basis.col(m) = schur.matrixU().col(order[m]);
    lambda(m, m) = eigenvalues(order[m]);
  }
  detail::fix_column_phases(basis);
  return UnitaryDiagonalization{basis.adjoint(), std::move(lambda)};
}

SeparableDecomposition::SeparableDecomposition(std::vector<SeparableTerm> terms,
                                               const DensityMatrix& target,
                                               double weight_tol,
                                               double reconstruction_tol)
    : terms_(std::move(terms)) {
  require(!terms_.empty(), "SeparableDecomposition: no terms");
  double total = 0.0;
  for (const SeparableTerm& t : terms_) {
    require(t.weight >= -1e-10, "SeparableDecomposition: negative weight");
    total += t.weight;
  }
  require(std::abs(total - 1.0) <= weight_tol,
          "SeparableDecomposition: weights do not sum to 1");
  require(frobenius_distance(reconstruct(), target.matrix()) <=
              reconstruction_tol,
          "SeparableDecomposition: terms do not reconstruct the state");
}

Matrix SeparableDecomposition::reconstruct() const {
  const Index da = terms_.front().state_a.dim();
  const Index db = terms_.front().state_b.dim();
  Matrix sum = Matrix::Zero(da * db, da * db);
  for (const SeparableTerm& t : terms_)
    sum += t.weight *
           tensor(t.state_a.projector(), t.state_b.projector());
  return sum;
}

SeparableDecomposition build_separable_decomposition(
    const DensityMatrix& rho_ab, const WeakLocalityVerdict& verdict,
    double tol) {
  if (!verdict.found || !verdict.basis)
    throw NotApplicableError(
        "build_separable_decomposition: verdict does not provide a basis");
  require(rho_ab.dims().size() == 2 && rho_ab.dims()[0] == 2,
          "build_separable_decomposition: state must be qubit x B");
  const Index db = rho_ab.dims()[1];

  const Vector& phi1 = verdict.basis->first.amplitudes();
  const Vector& phi2 = verdict.basis->second.amplitudes();
  const Matrix rho_b = partial_trace(rho_ab.matrix(), 2, db, 1);

  // Guard against a stale or hand-made verdict whose basis no longer keeps
  // the conditionals at rho_B.
  const double residual = basis_residual(rho_ab.matrix(), db, rho_b,
                                         phi1, phi2);
  require(residual <= 10.0 * std::max(tol, verdict.residual) + 1e-12,
          "build_separable_decomposition: verdict is numerically "
          "inconsistent with the state");

  const EigResult eig = eig_hermitian(rho_ab);
  std::vector<Index> kept;
  for (Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > kZeroProbThreshold) kept.push_back(i);
  const Index n = static_cast<Index>(kept.size());

  // Branch weights come from the outcome probabilities <phi_i|rho_A|phi_i>.
  const Matrix rho_a = partial_trace(rho_ab.matrix(), 2, db, 0);
  const double lambda1 = (phi1.adjoint() * rho_a * phi1).value().real();
  const double lambda2 = (phi2.adjoint() * rho_a * phi2).value().real();

  // B-side families eta_ik = sqrt(p_k) (<phi_i| x I)|psi_k> / sqrt(lambda_i).
  const auto branch = [&](const Vector& phi, double lambda) {
    std::vector<WeightedVector> dec;
    dec.reserve(n);
    for (Index k : kept) {
      const double scale = std::sqrt(eig.eigenvalues(k) / lambda);
      Vector eta = Vector::Zero(db);
      for (Index a = 0; a < 2; ++a)
        eta += std::conj(phi(a)) *
               eig.eigenvectors.col(k).segment(a * db, db);
      dec.push_back({scale * eta});
    }
    return dec;
  };

  std::vector<SeparableTerm> terms;
  const auto push_term = [&](double weight, Vector a, Vector b) {
    if (weight < kZeroProbThreshold) return;
    terms.push_back({weight, PureState(a / a.norm()), PureState(b / b.norm())});
  };

  if (lambda1 < kZeroProbThreshold || lambda2 < kZeroProbThreshold) {
    // One branch never fires: the state is |phi><phi| x rho_B already.
    const Vector& phi = (lambda1 >= lambda2) ? phi1 : phi2;
    const double lambda = std::max(lambda1, lambda2);
    for (const WeightedVector& eta : branch(phi, lambda))
      push_term(eta.weight(), phi, eta.amplitudes);
  } else {
    const std::vector<WeightedVector> dec1 = branch(phi1, lambda1);
    const std::vector<WeightedVector> dec2 = branch(phi2, lambda2);
    const Matrix u0 =
        hjw_connect(dec1, dec2, std::max(tol, 4.0 * (residual + tol)));
    const UnitaryDiagonalization diag = unitary_diagonalize(u0);

    // Rotate the purifying basis: eta'_1 stack = U * eta_1 stack, read off
    // one product term per purifying index.
    Matrix stack1(n, db);
    for (Index k = 0; k < n; ++k)
      stack1.row(k) = dec1[static_cast<std::size_t>(k)].amplitudes.transpose();
    Matrix rotated = diag.u * stack1;

    // The connector eigenbasis is free inside each degenerate eigenphase
    // block. Fix it by orthogonalizing the B-side family there, which in
    // particular keeps product-state terms on the rho_B eigenbasis.
    Index block_start = 0;
    for (Index k = 1; k <= n; ++k) {
      const bool boundary =
          k == n ||
          std::abs(diag.lambda(k, k) - diag.lambda(k - 1, k - 1)) > 1e-8;
      if (!boundary) continue;
      const Index len = k - block_start;
      if (len > 1) {
        const Matrix block = rotated.middleRows(block_start, len);
        Matrix gram = block * block.adjoint();
        gram = ((gram + gram.adjoint()) / 2.0).eval();
        const EigResult basis = eig_hermitian(gram);
        rotated.middleRows(block_start, len) =
            basis.eigenvectors.adjoint() * block;
      }
      block_start = k;
    }

    const double s1 = std::sqrt(lambda1);
    const double s2 = std::sqrt(lambda2);
    for (Index k = 0; k < n; ++k) {
      const Vector eta = rotated.row(k).transpose();
      const Vector a_side = s1 * phi1 + diag.lambda(k, k) * s2 * phi2;
      push_term(a_side.squaredNorm() * eta.squaredNorm(), a_side, eta);
    }
  }

  return SeparableDecomposition(std::move(terms), rho_ab);
}

}  // namespace locreal
