#include "locreal/sampler.hpp"

#include <cmath>

namespace locreal {

using detail::require;
using detail::uniform01;

namespace {

constexpr double kProbFloor = 1e-12;

// Born probabilities for a merged spectrum, with sub-floor entries zeroed
// and the rest renormalized. Keeps repeated sharp measurements exact.
std::vector<double> born_probs(const Matrix& rho,
                               const std::vector<SpectralOutcome>& spectrum) {
  std::vector<double> probs(spectrum.size());
  double total = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    double p = (rho * spectrum[i].projector).trace().real();
    if (p < kProbFloor) p = 0.0;
    probs[i] = p;
    total += p;
  }
  require(total > 0.0, "born_probs: no outcome has positive probability");
  for (double& p : probs) p /= total;
  return probs;
}

std::size_t draw(const std::vector<double>& probs, double u) {
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  // u landed in the roundoff sliver above the final cumulative value.
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return probs.size() - 1;
}

// Mean and standard error from per-outcome counts over known values.
EstimatorReport report_from_counts(const std::vector<double>& values,
                                   const std::vector<std::uint64_t>& counts,
                                   std::uint64_t shots, std::uint64_t seed) {
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    mean += values[i] * static_cast<double>(counts[i]);
  mean /= static_cast<double>(shots);

  double std_error = 0.0;
  if (shots > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double d = values[i] - mean;
      ss += d * d * static_cast<double>(counts[i]);
    }
    const double sample_var = ss / static_cast<double>(shots - 1);
    std_error = std::sqrt(sample_var / static_cast<double>(shots));
  }
  return EstimatorReport{mean, std_error, shots, seed};
}

}  // namespace

std::vector<SpectralOutcome> merged_spectrum(const HermitianObservable& h,
                                             double merge_tol) {
  const EigResult eig = eig_hermitian(h);
  std::vector<SpectralOutcome> spectrum;
  Index i = 0;
  const Index n = eig.eigenvalues.size();
  while (i < n) {
    Index j = i + 1;
    while (j < n && eig.eigenvalues(j) - eig.eigenvalues(j - 1) <= merge_tol)
      ++j;
    const Index width = j - i;
    const double value =
        eig.eigenvalues.segment(i, width).sum() / static_cast<double>(width);
    const auto block = eig.eigenvectors.middleCols(i, width);
    spectrum.push_back({value, block * block.adjoint()});
    i = j;
  }
  return spectrum;
}

EstimatorReport measure_projective(const DensityMatrix& rho,
                                   const HermitianObservable& h,
                                   std::uint64_t shots, std::uint64_t seed) {
  require(rho.dim() == h.dim(), "measure_projective: dimension mismatch");
  require(shots >= 1, "measure_projective: shots must be at least 1");

  const std::vector<SpectralOutcome> spectrum = merged_spectrum(h);
  const std::vector<double> probs = born_probs(rho.matrix(), spectrum);

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(spectrum.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s)
    ++counts[draw(probs, uniform01(rng))];

  std::vector<double> values(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    values[i] = spectrum[i].value;
  return report_from_counts(values, counts, shots, seed);
}

GapEstimate estimate_gap(const DensityMatrix& rho,
                         const HermitianObservable& a,
                         const HermitianObservable& b, std::uint64_t shots,
                         std::uint64_t seed) {
  require(a.dim() == b.dim() && rho.dim() == a.dim(),
          "estimate_gap: dimension mismatch");
  HermitianObservable d(Complex(0, -1) * commutator(a, b));
  EstimatorReport report = measure_projective(rho, d, shots, seed);
  return GapEstimate{Complex(0, 1) * report.mean, report, std::move(d)};
}

EstimatorReport sequential_expectation(const DensityMatrix& rho,
                                       const HermitianObservable& first,
                                       const HermitianObservable& second,
                                       std::uint64_t shots,
                                       std::uint64_t seed) {
  require(rho.dim() == first.dim() && rho.dim() == second.dim(),
          "sequential_expectation: dimension mismatch");
  require(shots >= 1, "sequential_expectation: shots must be at least 1");

  const std::vector<SpectralOutcome> spec_a = merged_spectrum(first);
  const std::vector<SpectralOutcome> spec_b = merged_spectrum(second);
  const std::vector<double> probs_a = born_probs(rho.matrix(), spec_a);

  // Conditional second-outcome tables, one per positive-probability first
  // outcome, from the updated state P_i rho P_i / p_i.
  std::vector<std::vector<double>> probs_b(spec_a.size());
  for (std::size_t i = 0; i < spec_a.size(); ++i) {
    if (probs_a[i] == 0.0) continue;
    const Matrix updated =
        spec_a[i].projector * rho.matrix() * spec_a[i].projector;
    probs_b[i] = born_probs(updated, spec_b);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint64_t>> counts(
      spec_a.size(), std::vector<std::uint64_t>(spec_b.size(), 0));
  for (std::uint64_t s = 0; s < shots; ++s) {
    const std::size_t i = draw(probs_a, uniform01(rng));
    const std::size_t j = draw(probs_b[i], uniform01(rng));
    ++counts[i][j];
  }

  std::vector<double> values;
  std::vector<std::uint64_t> flat;
  values.reserve(spec_a.size() * spec_b.size());
  flat.reserve(values.capacity());
  for (std::size_t i = 0; i < spec_a.size(); ++i)
    for (std::size_t j = 0; j < spec_b.size(); ++j) {
      values.push_back(spec_a[i].value * spec_b[j].value);
      flat.push_back(counts[i][j]);
    }
  return report_from_counts(values, flat, shots, seed);
}

double sequential_exact_mean(const DensityMatrix& rho,
                             const HermitianObservable& first,
                             const HermitianObservable& second) {
  require(rho.dim() == first.dim() && rho.dim() == second.dim(),
          "sequential_exact_mean: dimension mismatch");
  double mean = 0.0;
  for (const SpectralOutcome& out : merged_spectrum(first)) {
    const Matrix updated = out.projector * rho.matrix() * out.projector;
    mean += out.value * (updated * second.matrix()).trace().real();
  }
  return mean;
}

}  // namespace locreal
