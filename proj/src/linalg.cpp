#include "rdoa/linalg.hpp"

#include "rdoa/errors.hpp"

#include <cmath>
#include <string>

namespace rdoa {

HermitianMatrix::HermitianMatrix(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() == 0 || data_.rows() != data_.cols()) {
    throw DomainError("Hermitian matrix must be square and non-empty");
  }
  if (!data_.allFinite()) throw DomainError("matrix contains NaN or Inf");
  const double scale = data_.cwiseAbs().maxCoeff();
  const double asym = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw DomainError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
  CMatrix sym = 0.5 * (data_ + data_.adjoint());
  data_ = std::move(sym);
}

HermitianMatrix sample_covariance(const CMatrix& y) {
  if (y.rows() == 0 || y.cols() == 0) throw DomainError("empty snapshot block");
  const auto n = y.rows();
  CMatrix r = CMatrix::Zero(n, n);
  r.selfadjointView<Eigen::Lower>().rankUpdate(y, 1.0 / static_cast<double>(y.cols()));
  for (Eigen::Index col = 0; col < n; ++col) {
    r(col, col) = Complex(r(col, col).real(), 0.0);
    for (Eigen::Index row = col + 1; row < n; ++row) r(col, row) = std::conj(r(row, col));
  }
  return HermitianMatrix(std::move(r));
}

HermitianMatrix sample_covariance(const SnapshotMatrix& snapshots) {
  return sample_covariance(snapshots.data());
}

void canonicalize_phase(CVector& v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  double best_abs = std::abs(v(0));
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs == 0.0) return;
  const Complex rotation = std::conj(v(best)) / best_abs;
  v *= rotation;
  v(best) = Complex(best_abs, 0.0);
}

EvdResult hermitian_evd(const HermitianMatrix& r) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(r.data(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");

  const auto n = r.dim();
  EvdResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    const int src = n - 1 - i;
    out.eigenvalues(i) = solver.eigenvalues()(src);
    CVector v = solver.eigenvectors().col(src);
    v.normalize();
    canonicalize_phase(v);
    out.eigenvectors.col(i) = v;
  }
  return out;
}

}  // namespace rdoa
