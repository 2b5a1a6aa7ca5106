// locreal: witness construction, locality classification, scheme evaluation,
// and shot-level sampling for small quantum states, over JSON state files.
//
// Exit codes: 0 success, 1 input error, 2 maximally-mixed verdict,
// 3 unsupported dimension for the weak-locality search.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locreal/io.hpp"

namespace {

using namespace locreal;
using io::Json;

std::vector<Index> to_dims(const std::vector<std::int64_t>& raw) {
  std::vector<Index> dims;
  dims.reserve(raw.size());
  for (std::int64_t d : raw) {
    if (d < 1) throw io::ParseError("--dims entries must be positive");
    dims.push_back(static_cast<Index>(d));
  }
  return dims;
}

struct SweepRange {
  double lo;
  double hi;
  int steps;
};

SweepRange parse_sweep_range(const std::string& text) {
  SweepRange r{};
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    throw io::ParseError("--sweep expects lo:hi:steps");
  try {
    r.lo = std::stod(text.substr(0, first));
    r.hi = std::stod(text.substr(first + 1, second - first - 1));
    r.steps = std::stoi(text.substr(second + 1));
  } catch (const std::exception&) {
    throw io::ParseError("--sweep expects lo:hi:steps");
  }
  return r;
}

Eigen::Vector3d to_axis(const std::vector<double>& raw) {
  if (raw.size() != 3) throw io::ParseError("--n expects nx,ny,nz");
  return Eigen::Vector3d(raw[0], raw[1], raw[2]);
}

int emit_sweep(const std::vector<SweepRow>& rows, const std::string& format) {
  if (format == "csv")
    std::cout << io::sweep_csv(rows);
  else
    std::cout << io::render(io::sweep_json(rows));
  return 0;
}

int cmd_witness(const std::string& state_path,
                const std::vector<std::int64_t>& dims, double tol) {
  const io::ParsedState st = io::load_state(state_path, to_dims(dims));
  try {
    const RealismWitness w =
        st.pure ? pure_witness(*st.pure) : mixed_witness(st.rho, tol);
    std::cout << io::render(io::witness_report(w));
  } catch (const MaximallyMixedError& e) {
    std::cout << io::render(io::maximally_mixed_report(e.dim(), e.tolerance()));
    return 2;
  }
  return 0;
}

int cmd_classify(const std::string& state_path,
                 const std::vector<std::int64_t>& dims, double tol, int grid,
                 int jobs, bool no_weak, const std::string& measurement_path) {
  const io::ParsedState st = io::load_state(state_path, to_dims(dims));
  if (st.dims.size() != 2)
    throw io::ParseError(
        "classify needs a bipartite state: supply --dims dA,dB");

  Json report;
  report["strong_local"] = is_product(st.rho, tol);
  if (st.pure)
    report["pure_entangled"] = pure_is_entangled(*st.pure, st.dims, tol);

  if (!no_weak) {
    const WeakLocalityVerdict verdict =
        weak_locality_search(st.rho, tol, grid, jobs);
    report["weak_verdict"] = io::weak_verdict_document(verdict);
    if (verdict.found)
      report["separable_decomposition"] =
          io::separable_document(build_separable_decomposition(st.rho, verdict, tol));
  }

  if (!measurement_path.empty()) {
    const MeasurementSet m(io::load_measurement(measurement_path));
    const DensityMatrix rho_b = partial_trace(st.rho, 1);
    Json gains = Json::array();
    Json probs = Json::array();
    for (const ConditionalOutcome& out : conditional_states(st.rho, m)) {
      gains.push_back(info_gain(rho_b, out.post_state_b));
      probs.push_back(out.prob);
    }
    report["info_gain_bits"] = std::move(gains);
    report["outcome_probs"] = std::move(probs);
  }

  std::cout << io::render(report);
  return 0;
}

int emit_scheme_report(const SchemeReport& report) {
  std::cout << io::render(io::scheme_report_document(report));
  return 0;
}

int cmd_sample_scheme(const std::string& family, double p, double alpha,
                      const std::vector<double>& axis, std::uint64_t shots,
                      std::uint64_t seed) {
  const bool single = family == "single-qubit";
  const DensityMatrix rho =
      single ? single_qubit_state(SingleQubitScheme(p))
             : two_qubit_state(TwoQubitScheme(alpha, to_axis(axis)));
  const SchemeReport scheme =
      single ? run_single_qubit(SingleQubitScheme(p))
             : run_two_qubit(TwoQubitScheme(alpha, to_axis(axis)));
  const GapEstimate est = estimate_gap(rho, scheme.a, scheme.b, shots, seed);
  Json doc = io::estimator_document(est.report);
  doc["estimate"] = io::complex_to_json(est.estimate);
  doc["exact_gap"] = io::complex_to_json(scheme.gap);
  doc["exact_mean"] = scheme.d_expectation;
  doc["operationalization"] = "gap = i * <D> with D = -i[A, B]";
  std::cout << io::render(doc);
  return 0;
}

int cmd_sample_files(const std::string& state_path,
                     const std::vector<std::int64_t>& dims,
                     const std::string& obs_path, const std::string& obs_a,
                     const std::string& obs_b, std::uint64_t shots,
                     std::uint64_t seed) {
  const io::ParsedState st = io::load_state(state_path, to_dims(dims));
  if (!obs_a.empty() != !obs_b.empty())
    throw io::ParseError("--obs-a and --obs-b must be given together");
  if (!obs_a.empty()) {
    const HermitianObservable a = io::load_observable(obs_a);
    const HermitianObservable b = io::load_observable(obs_b);
    const GapEstimate est = estimate_gap(st.rho, a, b, shots, seed);
    Json doc = io::estimator_document(est.report);
    doc["estimate"] = io::complex_to_json(est.estimate);
    doc["exact_gap"] = io::complex_to_json(realism_gap(st.rho, a, b));
    doc["exact_mean"] =
        expectation(st.rho, est.witness_d.matrix()).real();
    doc["operationalization"] = "gap = i * <D> with D = -i[A, B]";
    std::cout << io::render(doc);
    return 0;
  }
  if (obs_path.empty())
    throw io::ParseError("sample needs --obs or --obs-a/--obs-b");
  const HermitianObservable h = io::load_observable(obs_path);
  const EstimatorReport report = measure_projective(st.rho, h, shots, seed);
  Json doc = io::estimator_document(report);
  doc["exact_mean"] = expectation(st.rho, h.matrix()).real();
  std::cout << io::render(doc);
  return 0;
}

int cmd_hjw(const std::string& dec1_path, const std::string& dec2_path,
            double tol) {
  const std::vector<WeightedVector> dec1 = io::load_decomposition(dec1_path);
  const std::vector<WeightedVector> dec2 = io::load_decomposition(dec2_path);
  const Matrix u0 = hjw_connect(dec1, dec2, tol);
  const UnitaryDiagonalization diag = unitary_diagonalize(u0);

  const Index n = u0.rows();
  const Index d = dec1.front().amplitudes.size();
  Matrix stack1 = Matrix::Zero(n, d);
  Matrix stack2 = Matrix::Zero(n, d);
  for (std::size_t i = 0; i < dec1.size(); ++i)
    stack1.row(static_cast<Index>(i)) = dec1[i].amplitudes.transpose();
  for (std::size_t i = 0; i < dec2.size(); ++i)
    stack2.row(static_cast<Index>(i)) = dec2[i].amplitudes.transpose();

  Json doc{{"u0", io::operator_document(u0)},
           {"u", io::operator_document(diag.u)},
           {"lambda", io::operator_document(diag.lambda)},
           {"map_residual", (u0 * stack1 - stack2).norm()}};
  std::cout << io::render(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Realism-gap witnesses, locality classification, and measurement "
      "sampling for small quantum states"};
  app.require_subcommand(1);

  std::string state_path;
  std::vector<std::int64_t> dims;
  double tol_witness = 1e-9;
  double tol_search = 1e-8;
  int grid = 48;
  int jobs = 1;
  bool no_weak = false;
  std::string measurement_path;
  double p = 0.5;
  double alpha = 0.0;
  std::vector<double> axis = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
  std::string sweep_range;
  std::string format = "json";
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  std::string scheme_name;
  std::string obs_path, obs_a_path, obs_b_path;
  std::string dec1_path, dec2_path;
  double sweep_from = 0.0, sweep_to = 1.0;
  int sweep_steps = 2;

  int exit_code = 0;

  CLI::App* wit = app.add_subcommand(
      "witness", "Build the non-commuting witness pair for a state");
  wit->add_option("--state", state_path, "state file")->required();
  wit->add_option("--dims", dims, "subsystem dims, e.g. 2,2")->delimiter(',');
  wit->add_option("--tol", tol_witness, "maximally-mixed threshold")
      ->capture_default_str();
  wit->callback([&] { exit_code = cmd_witness(state_path, dims, tol_witness); });

  CLI::App* cls = app.add_subcommand(
      "classify", "Strong/weak locality classification of a bipartite state");
  cls->add_option("--state", state_path, "state file")->required();
  cls->add_option("--dims", dims, "subsystem dims, e.g. 2,2")->delimiter(',');
  cls->add_option("--tol", tol_search, "search tolerance")
      ->capture_default_str();
  cls->add_option("--grid", grid, "Bloch grid resolution")
      ->capture_default_str();
  cls->add_option("--jobs", jobs, "search worker threads")
      ->capture_default_str();
  cls->add_flag("--no-weak", no_weak, "skip the weak-locality search");
  cls->add_option("--measurement", measurement_path,
                  "measurement file for per-outcome info gain");
  cls->callback([&] {
    exit_code = cmd_classify(state_path, dims, tol_search, grid, jobs,
                             no_weak, measurement_path);
  });

  CLI::App* sch = app.add_subcommand(
      "scheme", "Evaluate a gap scheme at fixed parameters");
  sch->require_subcommand(1);
  CLI::App* sq = sch->add_subcommand("single-qubit",
                                     "rho = p|0><0| + (1-p)|1><1|, A = "
                                     "sigma_x, B = sigma_y");
  sq->add_option("--p", p, "mixture weight of |0><0|")->capture_default_str();
  sq->add_option("--sweep", sweep_range, "sweep p over lo:hi:steps");
  sq->add_option("--format", format, "json or csv (sweeps default to csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  sq->add_option("--jobs", jobs, "sweep worker threads")
      ->capture_default_str();
  sq->callback([&] {
    if (!sweep_range.empty()) {
      const SweepRange r = parse_sweep_range(sweep_range);
      exit_code = emit_sweep(
          sweep(SchemeFamily::kSingleQubit, r.lo, r.hi, r.steps, jobs),
          sq->count("--format") ? format : "csv");
    } else {
      exit_code = emit_scheme_report(run_single_qubit(SingleQubitScheme(p)));
    }
  });
  CLI::App* tq = sch->add_subcommand(
      "two-qubit",
      "psi = cos(a)|00> + sin(a)|11>, A = XX, B = (n.s)(n.s)");
  tq->add_option("--alpha", alpha, "entanglement angle, radians")
      ->capture_default_str();
  tq->add_option("--n", axis, "measurement axis nx,ny,nz")->delimiter(',');
  tq->add_option("--sweep", sweep_range, "sweep alpha over lo:hi:steps");
  tq->add_option("--format", format, "json or csv (sweeps default to csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  tq->add_option("--jobs", jobs, "sweep worker threads")
      ->capture_default_str();
  tq->callback([&] {
    if (!sweep_range.empty()) {
      const SweepRange r = parse_sweep_range(sweep_range);
      exit_code = emit_sweep(
          sweep(SchemeFamily::kTwoQubit, r.lo, r.hi, r.steps, jobs),
          tq->count("--format") ? format : "csv");
    } else {
      exit_code = emit_scheme_report(
          run_two_qubit(TwoQubitScheme(alpha, to_axis(axis))));
    }
  });

  CLI::App* swp = app.add_subcommand(
      "sweep", "Tabulate a scheme's gap over a parameter range");
  swp->add_option("--scheme", scheme_name, "single-qubit or two-qubit")
      ->required()
      ->check(CLI::IsMember({"single-qubit", "two-qubit"}));
  swp->add_option("--from", sweep_from, "range start")->required();
  swp->add_option("--to", sweep_to, "range end")->required();
  swp->add_option("--steps", sweep_steps, "grid points, endpoints included")
      ->required();
  swp->add_option("--format", format, "json or csv (default csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  swp->add_option("--jobs", jobs, "sweep worker threads")
      ->capture_default_str();
  swp->callback([&] {
    const SchemeFamily family = scheme_name == "single-qubit"
                                    ? SchemeFamily::kSingleQubit
                                    : SchemeFamily::kTwoQubit;
    exit_code = emit_sweep(sweep(family, sweep_from, sweep_to, sweep_steps,
                                 jobs),
                           swp->count("--format") ? format : "csv");
  });

  CLI::App* smp = app.add_subcommand(
      "sample", "Shot-level estimate of a gap or observable mean");
  smp->add_option("--scheme", scheme_name, "single-qubit or two-qubit")
      ->check(CLI::IsMember({"single-qubit", "two-qubit"}));
  smp->add_option("--p", p, "single-qubit mixture weight")
      ->capture_default_str();
  smp->add_option("--alpha", alpha, "two-qubit entanglement angle")
      ->capture_default_str();
  smp->add_option("--n", axis, "two-qubit measurement axis")->delimiter(',');
  smp->add_option("--state", state_path, "state file (alternative to --scheme)");
  smp->add_option("--dims", dims, "subsystem dims for --state")
      ->delimiter(',');
  smp->add_option("--obs", obs_path, "observable file to sample");
  smp->add_option("--obs-a", obs_a_path, "first gap observable file");
  smp->add_option("--obs-b", obs_b_path, "second gap observable file");
  smp->add_option("--shots", shots, "samples to draw")->capture_default_str();
  smp->add_option("--seed", seed, "RNG seed")->capture_default_str();
  smp->callback([&] {
    if (!scheme_name.empty())
      exit_code = cmd_sample_scheme(scheme_name, p, alpha, axis, shots, seed);
    else if (!state_path.empty())
      exit_code = cmd_sample_files(state_path, dims, obs_path, obs_a_path,
                                   obs_b_path, shots, seed);
    else
      throw io::ParseError("sample needs --scheme or --state");
  });

  CLI::App* hjw = app.add_subcommand(
      "hjw", "Unitary connecting two decompositions of one mixed state");
  hjw->add_option("--dec1", dec1_path, "first decomposition file")->required();
  hjw->add_option("--dec2", dec2_path, "second decomposition file")
      ->required();
  hjw->add_option("--tol", tol_search, "same-state tolerance")
      ->capture_default_str();
  hjw->callback(
      [&] { exit_code = cmd_hjw(dec1_path, dec2_path, tol_search); });

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;
    }
  } catch (const UnsupportedDimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
