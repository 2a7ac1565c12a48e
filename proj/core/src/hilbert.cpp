#include "g2lab/hilbert.hpp"

#include <cmath>
#include <sstream>

namespace g2lab {

namespace {

double max_abs_asymmetry(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::string dim_text(Eigen::Index a, Eigen::Index b) {
  std::ostringstream os;
  os << a << " vs " << b;
  return os.str();
}

// Trace out the second factor: result(i,i') = sum_j m((i,j),(i',j)).
ComplexMatrix partial_trace_second(const ComplexMatrix& m, Eigen::Index dim_a,
                                   Eigen::Index dim_b) {
  ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index k = 0; k < dim_a; ++k)
      for (Eigen::Index j = 0; j < dim_b; ++j)
        out(i, k) += m(i * dim_b + j, k * dim_b + j);
  return out;
}

// Trace out the first factor: result(j,j') = sum_i m((i,j),(i,j')).
ComplexMatrix partial_trace_first(const ComplexMatrix& m, Eigen::Index dim_a,
                                  Eigen::Index dim_b) {
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index j = 0; j < dim_b; ++j)
    for (Eigen::Index l = 0; l < dim_b; ++l)
      for (Eigen::Index i = 0; i < dim_a; ++i)
        out(j, l) += m(i * dim_b + j, i * dim_b + l);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& x, const ComplexMatrix& y) {
  ComplexMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

}  // namespace

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::zero_vector: return "zero_vector";
    case ErrorKind::zero_field: return "zero_field";
    case ErrorKind::dim_mismatch: return "dim_mismatch";
    case ErrorKind::non_hermitian: return "non_hermitian";
    case ErrorKind::missing_structure: return "missing_structure";
    case ErrorKind::index_out_of_range: return "index_out_of_range";
    case ErrorKind::invalid_weights: return "invalid_weights";
    case ErrorKind::incompatible_source_detector:
      return "incompatible_source_detector";
    case ErrorKind::channel_count_mismatch: return "channel_count_mismatch";
    case ErrorKind::undefined_ratio: return "undefined_ratio";
    case ErrorKind::empty_setting: return "empty_setting";
    case ErrorKind::invalid_config: return "invalid_config";
  }
  return "unknown";
}

StateVector::StateVector(ComplexVector raw) {
  if (raw.size() < 1)
    throw Error(ErrorKind::zero_vector, "state vector must have dim >= 1");
  const double norm = raw.norm();
  if (norm <= kZeroNormFloor)
    throw Error(ErrorKind::zero_vector,
                "cannot normalize a (near-)zero vector");
  amplitudes_ = raw / norm;
}

StateVector normalize(const ComplexVector& raw) { return StateVector(raw); }

HermitianOperator::HermitianOperator(ComplexMatrix entries, double tol) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw Error(ErrorKind::dim_mismatch, "operator matrix must be square");
  const double asym = max_abs_asymmetry(entries);
  if (asym > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |m - m^dagger| = " << asym
       << " exceeds tolerance " << tol;
    throw Error(ErrorKind::non_hermitian, os.str());
  }
  entries_ = std::move(entries);
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

HermitianOperator tensor(const HermitianOperator& x,
                         const HermitianOperator& y) {
  return HermitianOperator(kron(x.matrix(), y.matrix()));
}

ComplexMatrix commutator(const HermitianOperator& x,
                         const HermitianOperator& y) {
  if (x.dim() != y.dim())
    throw Error(ErrorKind::dim_mismatch,
                "commutator dims differ: " + dim_text(x.dim(), y.dim()));
  return x.matrix() * y.matrix() - y.matrix() * x.matrix();
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

double operator_norm(const HermitianOperator& x) {
  const double asym = max_abs_asymmetry(x.matrix());
  if (asym > kHermitianOperationTol) {
    std::ostringstream os;
    os << "operator_norm input drifted off Hermitian symmetry by " << asym;
    throw Error(ErrorKind::non_hermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      x.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double expectation(const HermitianOperator& x, const StateVector& psi) {
  if (x.dim() != psi.dim())
    throw Error(ErrorKind::dim_mismatch,
                "expectation dims differ: " + dim_text(x.dim(), psi.dim()));
  const Complex value =
      psi.amplitudes().dot(x.matrix() * psi.amplitudes());
  if (std::abs(value.imag()) >= 1e-10) {
    std::ostringstream os;
    os << "expectation has imaginary residue " << value.imag();
    throw Error(ErrorKind::non_hermitian, os.str());
  }
  return value.real();
}

bool is_dichotomous(const HermitianOperator& x, double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      x.matrix(), Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double ev = solver.eigenvalues()(i);
    if (std::abs(std::abs(ev) - 1.0) > tol) return false;
  }
  return true;
}

BellScenario::BellScenario(
    HermitianOperator a1_in, HermitianOperator a2_in, HermitianOperator b1_in,
    HermitianOperator b2_in,
    std::optional<std::pair<Eigen::Index, Eigen::Index>> dims,
    bool dichotomous_in)
    : a1(std::move(a1_in)),
      a2(std::move(a2_in)),
      b1(std::move(b1_in)),
      b2(std::move(b2_in)),
      local_dims(dims),
      dichotomous(dichotomous_in) {
  const Eigen::Index d = a1.dim();
  if (a2.dim() != d || b1.dim() != d || b2.dim() != d)
    throw Error(ErrorKind::dim_mismatch,
                "scenario operators must share one dimension");
  if (local_dims) {
    if (local_dims->first < 1 || local_dims->second < 1 ||
        local_dims->first * local_dims->second != d)
      throw Error(ErrorKind::dim_mismatch,
                  "local structure dims do not factor the scenario dim");
  }
  if (dichotomous) {
    for (const HermitianOperator* op : {&a1, &a2, &b1, &b2}) {
      if (!is_dichotomous(*op))
        throw Error(ErrorKind::non_hermitian,
                    "dichotomous flag set but eigenvalues are not all +-1");
    }
  }
}

BellScenario BellScenario::from_local_factors(const HermitianOperator& a1f,
                                              const HermitianOperator& a2f,
                                              const HermitianOperator& b1f,
                                              const HermitianOperator& b2f,
                                              bool dichotomous) {
  if (a1f.dim() != a2f.dim() || b1f.dim() != b2f.dim())
    throw Error(ErrorKind::dim_mismatch,
                "party factors must share a dimension");
  const auto ia = HermitianOperator::identity(a1f.dim());
  const auto ib = HermitianOperator::identity(b1f.dim());
  return BellScenario(tensor(a1f, ib), tensor(a2f, ib), tensor(ia, b1f),
                      tensor(ia, b2f),
                      std::make_pair(a1f.dim(), b1f.dim()), dichotomous);
}

bool verify_local_structure(const BellScenario& s) {
  if (!s.local_dims)
    throw Error(ErrorKind::missing_structure,
                "scenario carries no local tensor structure");
  const auto [dim_a, dim_b] = *s.local_dims;

  for (const HermitianOperator* a : {&s.a1, &s.a2})
    for (const HermitianOperator* b : {&s.b1, &s.b2}) {
      const ComplexMatrix c =
          a->matrix() * b->matrix() - b->matrix() * a->matrix();
      if (c.cwiseAbs().maxCoeff() > 1e-10) return false;
    }

  const ComplexMatrix id_a = ComplexMatrix::Identity(dim_a, dim_a);
  const ComplexMatrix id_b = ComplexMatrix::Identity(dim_b, dim_b);
  for (const HermitianOperator* a : {&s.a1, &s.a2}) {
    const ComplexMatrix factor =
        partial_trace_second(a->matrix(), dim_a, dim_b) /
        static_cast<double>(dim_b);
    if ((a->matrix() - kron(factor, id_b)).cwiseAbs().maxCoeff() > 1e-9)
      return false;
  }
  for (const HermitianOperator* b : {&s.b1, &s.b2}) {
    const ComplexMatrix factor =
        partial_trace_first(b->matrix(), dim_a, dim_b) /
        static_cast<double>(dim_a);
    if ((b->matrix() - kron(id_a, factor)).cwiseAbs().maxCoeff() > 1e-9)
      return false;
  }
  return true;
}

}  // namespace g2lab
