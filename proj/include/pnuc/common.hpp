#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace pnuc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// All randomness in the library is drawn from this engine, seeded explicitly.
using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a brute-force routine is asked to work beyond its cost guard.
struct RefusalError : std::length_error {
  using std::length_error::length_error;
};

/// Raised when a search cannot meet its target within the permitted size.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A sampled contractivity level came out above 1 + tolerance.
struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exponent p in [1, inf] together with its conjugate q.
class PExponent {
 public:
  explicit PExponent(double p) : p_(p) {
    if (!(p >= 1.0)) throw DomainError("exponent p must lie in [1, inf]");
    if (p == 1.0)
      q_ = kInf;
    else if (p == kInf)
      q_ = 1.0;
    else
      q_ = p / (p - 1.0);
  }

  static PExponent infinity() { return PExponent(kInf); }

  double p() const { return p_; }
  double q() const { return q_; }
  bool is_one() const { return p_ == 1.0; }
  bool is_two() const { return p_ == 2.0; }
  bool is_infinite() const { return p_ == kInf; }
  bool has_closed_form() const { return is_one() || is_two() || is_infinite(); }

  PExponent conjugate() const { return PExponent(q_); }

  friend bool operator==(const PExponent& a, const PExponent& b) { return a.p_ == b.p_; }

 private:
  double p_;
  double q_;
};

inline cplx unit_sign(cplx z) {
  const double r = std::abs(z);
  return r == 0.0 ? cplx(0.0, 0.0) : z / r;
}

inline CMatrix random_complex_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

inline CVector random_complex_vector(Index n, Rng& rng) {
  return random_complex_matrix(n, 1, rng).col(0);
}

inline bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return kInf;
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace pnuc
