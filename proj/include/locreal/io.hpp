// File and report formats. States, observables, and unitaries share one
// interchange document: {"dims": [..], "matrix": [[[re, im], ..], ..]}.
// A single-column matrix is read as a pure state, a square one as a density
// matrix or operator. Parsed states are gated at 1e-6 and then conditioned
// exactly (renormalized, symmetrized) so downstream validation never trips
// on rounded input files. Doubles are serialized at shortest round-trip
// length, so the payload survives emit -> parse bit for bit; conditioning
// may still renormalize a state by an ulp.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "locreal/locality.hpp"
#include "locreal/matcore.hpp"
#include "locreal/realism.hpp"
#include "locreal/sampler.hpp"
#include "locreal/schemes.hpp"

namespace locreal::io {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal string that parses back to exactly this double.
std::string format_double(double x);

Json complex_to_json(Complex z);
Json matrix_to_json(const Matrix& m);
// Rejects ragged rows, non-finite values, and anything not shaped like
// nested [re, im] rows.
Matrix matrix_from_json(const Json& j);

Json state_document(const DensityMatrix& rho);
Json state_document(const PureState& psi, const std::vector<Index>& dims);
Json observable_document(const HermitianObservable& h);
Json operator_document(const Matrix& u);

struct ParsedState {
  std::vector<Index> dims;
  std::optional<PureState> pure;  // set when the file held a column vector
  DensityMatrix rho;
};

// dims_override, when non-empty, replaces the document's dims.
ParsedState parse_state(const Json& doc,
                        const std::vector<Index>& dims_override = {});
ParsedState load_state(const std::string& path,
                       const std::vector<Index>& dims_override = {});

HermitianObservable parse_observable(const Json& doc);
HermitianObservable load_observable(const std::string& path);

// {"dims": [dA], "operators": [matrix, ..]}.
std::vector<Matrix> parse_measurement(const Json& doc);
std::vector<Matrix> load_measurement(const std::string& path);

// {"dims": [d], "vectors": [[[re, im], ..], ..]}; member norms are ensemble
// weights, so no normalization is applied.
std::vector<WeightedVector> parse_decomposition(const Json& doc);
std::vector<WeightedVector> load_decomposition(const std::string& path);
Json decomposition_document(const std::vector<WeightedVector>& dec);

Json witness_report(const RealismWitness& w);
Json maximally_mixed_report(Index dim, double tol);
Json weak_verdict_document(const WeakLocalityVerdict& v);
Json separable_document(const SeparableDecomposition& dec);
Json scheme_report_document(const SchemeReport& r);
Json estimator_document(const EstimatorReport& r);

std::string sweep_csv(const std::vector<SweepRow>& rows);
Json sweep_json(const std::vector<SweepRow>& rows);

Json load_json(const std::string& path);
// dump with stable key order and trailing newline.
std::string render(const Json& doc);

}  // namespace locreal::io
