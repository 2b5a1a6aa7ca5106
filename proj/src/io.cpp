#include "locreal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace locreal::io {

namespace {

constexpr double kParseTol = 1e-6;

double number_at(const Json& j, const char* context) {
  if (!j.is_number())
    throw ParseError(std::string(context) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x))
    throw ParseError(std::string(context) + ": non-finite value");
  return x;
}

Complex complex_at(const Json& j, const char* context) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(std::string(context) +
                     ": entries must be [re, im] pairs");
  return Complex(number_at(j[0], context), number_at(j[1], context));
}

std::vector<Index> dims_from(const Json& doc, Index total,
                             const std::vector<Index>& dims_override) {
  std::vector<Index> dims = dims_override;
  if (dims.empty() && doc.contains("dims")) {
    const Json& jd = doc.at("dims");
    if (!jd.is_array() || jd.empty())
      throw ParseError("dims: expected a non-empty list");
    for (const Json& v : jd) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
        throw ParseError("dims: entries must be positive integers");
      dims.push_back(static_cast<Index>(v.get<std::int64_t>()));
    }
  }
  if (dims.empty()) dims = {total};
  Index product = 1;
  for (Index d : dims) product *= d;
  if (product != total)
    throw ParseError("dims: product does not match the matrix dimension");
  return dims;
}

Vector vector_from_json(const Json& j, const char* context) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(context) + ": expected a non-empty list");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Index>(i)) = complex_at(j[i], context);
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix: expected a non-empty list of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("matrix: rows must be non-empty lists");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          complex_at(j[r][c], "matrix");
  }
  return m;
}

Json state_document(const DensityMatrix& rho) {
  Json dims = Json::array();
  for (Index d : rho.dims()) dims.push_back(static_cast<std::int64_t>(d));
  return Json{{"dims", std::move(dims)}, {"matrix", matrix_to_json(rho.matrix())}};
}

Json state_document(const PureState& psi, const std::vector<Index>& dims) {
  Json jd = Json::array();
  for (Index d : dims) jd.push_back(static_cast<std::int64_t>(d));
  return Json{{"dims", std::move(jd)},
              {"matrix", matrix_to_json(psi.amplitudes())}};
}

Json observable_document(const HermitianObservable& h) {
  return Json{{"dims", Json::array({static_cast<std::int64_t>(h.dim())})},
              {"matrix", matrix_to_json(h.matrix())}};
}

Json operator_document(const Matrix& u) {
  return Json{{"dims", Json::array({static_cast<std::int64_t>(u.rows())})},
              {"matrix", matrix_to_json(u)}};
}

ParsedState parse_state(const Json& doc,
                        const std::vector<Index>& dims_override) {
  if (!doc.is_object() || !doc.contains("matrix"))
    throw ParseError("state: expected an object with a matrix field");
  Matrix m = matrix_from_json(doc.at("matrix"));

  if (m.cols() == 1 && m.rows() > 1) {
    const std::vector<Index> dims = dims_from(doc, m.rows(), dims_override);
    Vector amps = m.col(0);
    const double norm = amps.norm();
    if (std::abs(norm - 1.0) > kParseTol)
      throw ParseError("state: vector is not normalized");
    PureState psi(amps / norm);
    DensityMatrix rho = DensityMatrix::from_pure(psi, dims);
    return ParsedState{dims, std::move(psi), std::move(rho)};
  }

  if (m.rows() != m.cols())
    throw ParseError("state: matrix must be square or a single column");
  const std::vector<Index> dims = dims_from(doc, m.rows(), dims_override);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kParseTol)
    throw ParseError("state: matrix is not Hermitian");
  m = 0.5 * (m + m.adjoint()).eval();
  const double trace = m.trace().real();
  if (std::abs(trace - 1.0) > kParseTol)
    throw ParseError("state: trace is not 1");
  m /= trace;
  return ParsedState{dims, std::nullopt, DensityMatrix(dims, std::move(m), kParseTol)};
}

ParsedState load_state(const std::string& path,
                       const std::vector<Index>& dims_override) {
  return parse_state(load_json(path), dims_override);
}

HermitianObservable parse_observable(const Json& doc) {
  if (!doc.is_object() || !doc.contains("matrix"))
    throw ParseError("observable: expected an object with a matrix field");
  Matrix m = matrix_from_json(doc.at("matrix"));
  if (m.rows() != m.cols())
    throw ParseError("observable: matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kParseTol)
    throw ParseError("observable: matrix is not Hermitian");
  m = 0.5 * (m + m.adjoint()).eval();
  return HermitianObservable(std::move(m));
}

HermitianObservable load_observable(const std::string& path) {
  return parse_observable(load_json(path));
}

std::vector<Matrix> parse_measurement(const Json& doc) {
  if (!doc.is_object() || !doc.contains("operators"))
    throw ParseError("measurement: expected an object with operators");
  const Json& ops = doc.at("operators");
  if (!ops.is_array() || ops.empty())
    throw ParseError("measurement: operators must be a non-empty list");
  std::vector<Matrix> out;
  out.reserve(ops.size());
  for (const Json& op : ops) out.push_back(matrix_from_json(op));
  return out;
}

std::vector<Matrix> load_measurement(const std::string& path) {
  return parse_measurement(load_json(path));
}

std::vector<WeightedVector> parse_decomposition(const Json& doc) {
  if (!doc.is_object() || !doc.contains("vectors"))
    throw ParseError("decomposition: expected an object with vectors");
  const Json& vecs = doc.at("vectors");
  if (!vecs.is_array() || vecs.empty())
    throw ParseError("decomposition: vectors must be a non-empty list");
  std::vector<WeightedVector> out;
  out.reserve(vecs.size());
  for (const Json& v : vecs)
    out.push_back({vector_from_json(v, "decomposition")});
  const Index d = out.front().amplitudes.size();
  for (const WeightedVector& v : out)
    if (v.amplitudes.size() != d)
      throw ParseError("decomposition: vectors have mixed dimensions");
  return out;
}

std::vector<WeightedVector> load_decomposition(const std::string& path) {
  return parse_decomposition(load_json(path));
}

Json decomposition_document(const std::vector<WeightedVector>& dec) {
  Json vecs = Json::array();
  for (const WeightedVector& v : dec) {
    Json entries = Json::array();
    for (Index i = 0; i < v.amplitudes.size(); ++i)
      entries.push_back(complex_to_json(v.amplitudes(i)));
    vecs.push_back(std::move(entries));
  }
  return Json{{"dims",
               Json::array({static_cast<std::int64_t>(
                   dec.empty() ? 0 : dec.front().amplitudes.size())})},
              {"vectors", std::move(vecs)}};
}

Json witness_report(const RealismWitness& w) {
  return Json{{"verdict", "witness"},
              {"a", observable_document(w.a)},
              {"b", observable_document(w.b)},
              {"c", operator_document(w.c)},
              {"predicted_gap", complex_to_json(w.predicted_gap)}};
}

Json maximally_mixed_report(Index dim, double tol) {
  return Json{{"verdict", "maximally-mixed"},
              {"dim", static_cast<std::int64_t>(dim)},
              {"tol", tol}};
}

Json weak_verdict_document(const WeakLocalityVerdict& v) {
  Json doc{{"found", v.found},
           {"theta", v.theta},
           {"phi", v.phi},
           {"residual", v.residual},
           {"grid", v.grid_resolution}};
  if (v.basis) {
    doc["basis"] = Json::array(
        {matrix_to_json(v.basis->first.amplitudes()),
         matrix_to_json(v.basis->second.amplitudes())});
  }
  return doc;
}

Json separable_document(const SeparableDecomposition& dec) {
  Json terms = Json::array();
  for (const SeparableTerm& t : dec.terms()) {
    terms.push_back(Json{{"weight", t.weight},
                         {"state_a", matrix_to_json(t.state_a.amplitudes())},
                         {"state_b", matrix_to_json(t.state_b.amplitudes())}});
  }
  return Json{{"terms", std::move(terms)}};
}

Json scheme_report_document(const SchemeReport& r) {
  return Json{{"a", observable_document(r.a)},
              {"b", observable_document(r.b)},
              {"c", operator_document(r.c)},
              {"gap", complex_to_json(r.gap)},
              {"hermitian_witness_d", observable_document(r.hermitian_witness_d)},
              {"d_expectation", r.d_expectation},
              {"operationalization", "gap = i * <D> with D = -i[A, B]"}};
}

Json estimator_document(const EstimatorReport& r) {
  return Json{{"mean", r.mean},
              {"std_error", r.std_error},
              {"shots", r.shots},
              {"seed", r.seed}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,gap_imag,d_expectation\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.param);
    out += ',';
    out += format_double(r.gap_imag);
    out += ',';
    out += format_double(r.d_expectation);
    out += '\n';
  }
  return out;
}

Json sweep_json(const std::vector<SweepRow>& rows) {
  Json arr = Json::array();
  for (const SweepRow& r : rows)
    arr.push_back(Json{{"param", r.param},
                       {"gap_imag", r.gap_imag},
                       {"d_expectation", r.d_expectation}});
  return Json{{"rows", std::move(arr)}};
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace locreal::io
