// Seeded Monte Carlo simulation of projective measurements. One mt19937_64
// stream per call and uniform doubles derived by a fixed bit recipe, so a
// (inputs, seed, shots) triple reproduces its report bit for bit. The gap
// estimator samples the Hermitian witness D = -i[A,B] and reports i * mean;
// sequential product sampling exists to demonstrate that it cannot see the
// gap (both orders share the exact mean Tr(rho {A,B}) / 2 for +-1-valued
// observables).

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "locreal/matcore.hpp"

namespace locreal {

struct EstimatorReport {
  double mean;
  double std_error;  // sample standard deviation / sqrt(shots); 0 for 1 shot
  std::uint64_t shots;
  std::uint64_t seed;
};

// One measurement outcome: a (merged) eigenvalue and its spectral projector.
struct SpectralOutcome {
  double value;
  Matrix projector;
};

// Spectral decomposition with eigenvalues closer than merge_tol fused into a
// single outcome (value = group mean, projector = summed).
std::vector<SpectralOutcome> merged_spectrum(const HermitianObservable& h,
                                             double merge_tol = 1e-9);

// Samples eigenvalues of h with Born probabilities Tr(rho P_i).
EstimatorReport measure_projective(const DensityMatrix& rho,
                                   const HermitianObservable& h,
                                   std::uint64_t shots, std::uint64_t seed);

struct GapEstimate {
  Complex estimate;  // i * report.mean
  EstimatorReport report;
  HermitianObservable witness_d;  // -i [a, b]
};

// Shot-level estimate of Tr(rho [a, b]) via the Hermitian witness.
GapEstimate estimate_gap(const DensityMatrix& rho,
                         const HermitianObservable& a,
                         const HermitianObservable& b, std::uint64_t shots,
                         std::uint64_t seed);

// Measures `first`, updates the state by the projective rule
// rho -> P_i rho P_i / p_i, measures `second`, records the outcome product.
EstimatorReport sequential_expectation(const DensityMatrix& rho,
                                       const HermitianObservable& first,
                                       const HermitianObservable& second,
                                       std::uint64_t shots,
                                       std::uint64_t seed);

// Closed form of the sequential product mean: sum_i a_i Tr(P_i rho P_i B).
double sequential_exact_mean(const DensityMatrix& rho,
                             const HermitianObservable& first,
                             const HermitianObservable& second);

namespace detail {

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Fixed
// recipe, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

}  // namespace locreal
