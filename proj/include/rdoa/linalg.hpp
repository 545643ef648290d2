#pragma once

#include "rdoa/array_model.hpp"

namespace rdoa {

/// Square complex matrix that equals its conjugate transpose. Construction
/// checks the symmetry to 1e-12 (relative to the largest entry) and then
/// stores the exactly symmetrized average.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix data);

  int dim() const { return static_cast<int>(data_.rows()); }
  const CMatrix& data() const { return data_; }

 private:
  CMatrix data_;
};

struct EvdResult {
  Eigen::VectorXd eigenvalues;  // descending
  CMatrix eigenvectors;         // column i pairs with eigenvalues(i), unit norm
};

/// R = (1/K) sum_k y_k y_k^H.
HermitianMatrix sample_covariance(const SnapshotMatrix& snapshots);
HermitianMatrix sample_covariance(const CMatrix& snapshots);

/// Full eigendecomposition, eigenvalues sorted descending. Each eigenvector is
/// rotated so that its largest-modulus component is real and positive.
EvdResult hermitian_evd(const HermitianMatrix& r);

/// Rotates v in place so its largest-modulus entry is real positive (first
/// such entry on ties). Zero vectors are left untouched.
void canonicalize_phase(CVector& v);

}  // namespace rdoa
