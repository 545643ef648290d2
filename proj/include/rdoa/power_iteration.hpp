#pragma once

#include "rdoa/linalg.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rdoa {

// Starting vectors for the power iteration. All indices are 1-based.
namespace init {
struct AllOnes {};       ///< [1, 1, ..., 1]
struct Alternating {};   ///< [1, -1, 1, -1, ...]
struct HalvesSigned {};  ///< first N/2 entries +1, the rest -1
struct DftColumn {};     ///< n-th entry exp(-j n A), A = 2 pi / (N sqrt(N)), n = 1..N
struct Hot {             ///< ones at the listed (strictly increasing) positions
  std::vector<int> indices;
};
struct BasisVector {  ///< e_k
  int k = 1;
};
struct RowSum {};  ///< conj(row sums of R / sum of all entries of R)
struct NearSignal {
  double theta_hint_deg = 0.0;
  double spacing = 0.5;
};
struct Random {
  std::uint64_t seed = 0;
};
struct Custom {
  CVector vector;
};
}  // namespace init

using InitialVectorSpec =
    std::variant<init::AllOnes, init::Alternating, init::HalvesSigned, init::DftColumn, init::Hot,
                 init::BasisVector, init::RowSum, init::NearSignal, init::Random, init::Custom>;

init::Hot two_hot(int m, int n);
init::Hot three_hot(int m, int n, int k);
init::Hot four_hot(int m, int n, int k, int l);

/// Parses "ones", "alternating", "halves", "dft", "hot:1+4", "basis:3",
/// "rowsum", "near:50", "random:7".
InitialVectorSpec parse_initial_vector(std::string_view text);
std::string to_string(const InitialVectorSpec& spec);

/// Unit-norm starting vector of length r.dim().
CVector make_initial_vector(const InitialVectorSpec& spec, const HermitianMatrix& r);
/// Same, for specs that do not look at the matrix (everything except RowSum).
CVector make_initial_vector(const InitialVectorSpec& spec, int dim);

/// |a(theta)^T v0| with the plain (unconjugated) transpose.
double orthogonality_defect(const ArrayGeometry& geometry, double theta_deg, const CVector& v0);

struct PowerIterationResult {
  double dominant_eigenvalue = 0.0;
  CVector dominant_eigenvector;
  int iterations = 0;
  /// ||R u_n - rho_n u_n|| / |rho_n| for each iterate u_n.
  std::vector<double> residual_history;
  /// Rayleigh quotient rho_n of each iterate.
  std::vector<double> eigenvalue_history;
  bool converged = false;
};

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr int kDefaultMaxIterations = 200;

/// Power iteration u_n = R u_{n-1} / ||R u_{n-1}||. Stops at the first iterate
/// whose relative eigen-residual is <= epsilon. Non-convergence is reported
/// through the result's `converged` flag, not by throwing.
PowerIterationResult power_iterate(const HermitianMatrix& r, const InitialVectorSpec& spec,
                                   double epsilon = kDefaultEpsilon,
                                   int max_iterations = kDefaultMaxIterations);

double rayleigh_quotient(const HermitianMatrix& r, const CVector& v);

/// Upper bound (log2 eps - log2(dim - 1)) / log2(lambda2 / lambda1) on the
/// iteration count. Diagnostic only.
double iteration_bound(double epsilon, int dim, double lambda_ratio);

}  // namespace rdoa
