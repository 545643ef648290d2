#include "rdoa/power_iteration.hpp"

#include "rdoa/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace rdoa {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

init::Hot make_hot(std::vector<int> indices) {
  for (std::size_t i = 1; i < indices.size(); ++i) {
    if (indices[i] <= indices[i - 1]) throw DomainError("hot indices must be strictly increasing");
  }
  if (!indices.empty() && indices.front() < 1) throw DomainError("hot indices are 1-based");
  return init::Hot{std::move(indices)};
}

CVector normalized(CVector v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("initial vector is zero");
  return v / norm;
}

CVector pattern_vector(const InitialVectorSpec& spec, int dim) {
  return std::visit(
      Overloaded{
          [&](const init::AllOnes&) -> CVector { return CVector::Ones(dim); },
          [&](const init::Alternating&) -> CVector {
            CVector v(dim);
            for (int i = 0; i < dim; ++i) v(i) = (i % 2 == 0) ? 1.0 : -1.0;
            return v;
          },
          [&](const init::HalvesSigned&) -> CVector {
            CVector v(dim);
            for (int i = 0; i < dim; ++i) v(i) = (i < dim / 2) ? 1.0 : -1.0;
            return v;
          },
          [&](const init::DftColumn&) -> CVector {
            const double step = 2.0 * kPi / (dim * std::sqrt(static_cast<double>(dim)));
            CVector v(dim);
            for (int i = 0; i < dim; ++i) v(i) = std::polar(1.0, -step * (i + 1));
            return v;
          },
          [&](const init::Hot& hot) -> CVector {
            if (hot.indices.empty()) throw DomainError("hot vector needs at least one index");
            CVector v = CVector::Zero(dim);
            int prev = 0;
            for (int idx : hot.indices) {
              if (idx <= prev || idx > dim) {
                throw DomainError("hot indices must be strictly increasing within [1, dim]");
              }
              v(idx - 1) = 1.0;
              prev = idx;
            }
            return v;
          },
          [&](const init::BasisVector& b) -> CVector {
            if (b.k < 1 || b.k > dim) throw DomainError("basis index out of range");
            CVector v = CVector::Zero(dim);
            v(b.k - 1) = 1.0;
            return v;
          },
          [&](const init::RowSum&) -> CVector {
            throw DomainError("row-sum start vector needs the matrix");
          },
          [&](const init::NearSignal& s) -> CVector {
            return steering_vector(ArrayGeometry(dim, s.spacing), s.theta_hint_deg);
          },
          [&](const init::Random& r) -> CVector {
            std::mt19937_64 rng(r.seed);
            std::normal_distribution<double> half_power(0.0, std::sqrt(0.5));
            CVector v(dim);
            for (int i = 0; i < dim; ++i) {
              const double re = half_power(rng);
              const double im = half_power(rng);
              v(i) = Complex(re, im);
            }
            return v;
          },
          [&](const init::Custom& c) -> CVector {
            if (c.vector.size() != dim) throw DomainError("custom start vector has wrong length");
            return c.vector;
          },
      },
      spec);
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  while (!text.empty()) {
    const auto comma = text.find('+');
    const std::string_view item = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw DomainError("bad integer '" + std::string(item) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

init::Hot two_hot(int m, int n) { return make_hot({m, n}); }
init::Hot three_hot(int m, int n, int k) { return make_hot({m, n, k}); }
init::Hot four_hot(int m, int n, int k, int l) { return make_hot({m, n, k, l}); }

InitialVectorSpec parse_initial_vector(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;

  if (name == "ones" && !has_arg) return init::AllOnes{};
  if (name == "alternating" && !has_arg) return init::Alternating{};
  if (name == "halves" && !has_arg) return init::HalvesSigned{};
  if (name == "dft" && !has_arg) return init::DftColumn{};
  if (name == "rowsum" && !has_arg) return init::RowSum{};
  if (name == "hot" && has_arg) return make_hot(parse_int_list(arg));
  if (name == "basis" && has_arg) {
    const auto k = parse_int_list(arg);
    if (k.size() != 1) throw DomainError("basis takes one index");
    return init::BasisVector{k.front()};
  }
  if (name == "near" && has_arg) return init::NearSignal{parse_double(arg)};
  if (name == "random") {
    std::uint64_t seed = 0;
    if (has_arg) {
      const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), seed);
      if (ec != std::errc() || ptr != arg.data() + arg.size()) {
        throw DomainError("bad random seed '" + std::string(arg) + "'");
      }
    }
    return init::Random{seed};
  }
  throw DomainError("unknown initial vector '" + std::string(text) + "'");
}

std::string to_string(const InitialVectorSpec& spec) {
  return std::visit(
      Overloaded{
          [](const init::AllOnes&) -> std::string { return "ones"; },
          [](const init::Alternating&) -> std::string { return "alternating"; },
          [](const init::HalvesSigned&) -> std::string { return "halves"; },
          [](const init::DftColumn&) -> std::string { return "dft"; },
          [](const init::Hot& h) -> std::string {
            std::string s = "hot:";
            for (std::size_t i = 0; i < h.indices.size(); ++i) {
              if (i) s += '+';
              s += std::to_string(h.indices[i]);
            }
            return s;
          },
          [](const init::BasisVector& b) -> std::string { return "basis:" + std::to_string(b.k); },
          [](const init::RowSum&) -> std::string { return "rowsum"; },
          [](const init::NearSignal& s) -> std::string {
            std::ostringstream os;
            os << "near:" << s.theta_hint_deg;
            return os.str();
          },
          [](const init::Random& r) -> std::string { return "random:" + std::to_string(r.seed); },
          [](const init::Custom&) -> std::string { return "custom"; },
      },
      spec);
}

CVector make_initial_vector(const InitialVectorSpec& spec, int dim) {
  if (dim < 1) throw DomainError("start vector dimension must be positive");
  return normalized(pattern_vector(spec, dim));
}

CVector make_initial_vector(const InitialVectorSpec& spec, const HermitianMatrix& r) {
  if (!std::holds_alternative<init::RowSum>(spec)) return make_initial_vector(spec, r.dim());

  // (v0)^H = (1^H R) / S(R)  =>  v0 = conj(column sums / S(R)).
  const CVector column_sums = r.data().colwise().sum().transpose();
  const Complex total = column_sums.sum();
  CVector v = std::abs(total) > 0.0 ? CVector((column_sums / total).conjugate())
                                    : CVector(column_sums.conjugate());
  return normalized(std::move(v));
}

double orthogonality_defect(const ArrayGeometry& geometry, double theta_deg, const CVector& v0) {
  if (v0.size() != geometry.n_antennas()) {
    throw DomainError("start vector length does not match the array");
  }
  const CVector a = steering_vector(geometry, theta_deg);
  return std::abs((a.transpose() * v0).value());
}

double rayleigh_quotient(const HermitianMatrix& r, const CVector& v) {
  if (v.size() != r.dim()) throw DomainError("vector length does not match the matrix");
  const double vv = v.squaredNorm();
  if (!(vv > 0.0)) throw DomainError("Rayleigh quotient of a zero vector");
  const Complex q = v.dot(r.data() * v) / vv;  // Eigen's dot conjugates the left operand
  const double tol = 1e-12 * std::max(1.0, std::abs(q.real()));
  if (std::abs(q.imag()) > tol) {
    throw NumericError("Rayleigh quotient has a non-negligible imaginary part");
  }
  return q.real();
}

PowerIterationResult power_iterate(const HermitianMatrix& r, const InitialVectorSpec& spec,
                                   double epsilon, int max_iterations) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");

  const CMatrix& m = r.data();
  CVector u = make_initial_vector(spec, r);
  CVector w = m * u;

  PowerIterationResult out;
  out.residual_history.reserve(static_cast<std::size_t>(max_iterations));
  out.eigenvalue_history.reserve(static_cast<std::size_t>(max_iterations));
  for (int n = 1; n <= max_iterations; ++n) {
    const double norm = w.norm();
    if (!(norm > 0.0)) throw DomainError("start vector lies in the null space of R");
    u = w / norm;
    w.noalias() = m * u;
    const double rho = u.dot(w).real();
    const double residual = rho != 0.0 ? (w - rho * u).norm() / std::abs(rho)
                                       : std::numeric_limits<double>::infinity();
    out.residual_history.push_back(residual);
    out.eigenvalue_history.push_back(rho);
    out.iterations = n;
    out.dominant_eigenvalue = rho;
    if (residual <= epsilon) {
      out.converged = true;
      break;
    }
  }
  out.dominant_eigenvector = std::move(u);
  canonicalize_phase(out.dominant_eigenvector);
  return out;
}

double iteration_bound(double epsilon, int dim, double lambda_ratio) {
  if (!(lambda_ratio > 0.0 && lambda_ratio < 1.0)) {
    throw DomainError("eigenvalue ratio must lie in (0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (dim < 2) throw DomainError("dimension must be >= 2");
  return (std::log2(epsilon) - std::log2(static_cast<double>(dim - 1))) / std::log2(lambda_ratio);
}

}  // namespace rdoa
