#pragma once

// Rational transfer functions and their controllable canonical realizations.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <complex>
#include <stdexcept>
#include <vector>

namespace mfc::plants {

// Polynomials are coefficient vectors in ascending powers of s.
inline std::vector<double> poly_mul(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Monic polynomial with the given roots: prod (s - r_k).
inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
  std::vector<double> p{1.0};
  for (double r : roots) p = poly_mul(p, {-r, 1.0});
  return p;
}

inline std::complex<double> poly_eval(const std::vector<double>& coeffs,
                                      std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * s + coeffs[k];
  return acc;
}

inline int poly_degree(const std::vector<double>& coeffs) {
  int deg = -1;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0.0) deg = static_cast<int>(k);
  return deg;
}

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
};

// Controllable canonical realization of num/den. The denominator is
// normalized monic; a proper (deg num == deg den) entry yields a nonzero
// feedthrough D.
inline StateSpace realize_tf(const std::vector<double>& num,
                             const std::vector<double>& den) {
  const int dn = poly_degree(num);
  const int dd = poly_degree(den);
  if (dd < 0) throw std::invalid_argument("realize_tf: zero denominator");
  if (dn > dd) throw std::invalid_argument("realize_tf: improper transfer function");

  const double lead = den[dd];
  std::vector<double> a(dd + 1, 0.0), b(dd + 1, 0.0);
  for (int k = 0; k <= dd; ++k) a[k] = den[k] / lead;
  for (int k = 0; k <= dn; ++k) b[k] = num[k] / lead;

  StateSpace ss;
  const int n = dd;
  ss.D = b[n];
  if (n == 0) {
    ss.A.resize(0, 0);
    ss.B.resize(0);
    ss.C.resize(0);
    return ss;
  }
  ss.A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int j = 0; j < n; ++j) ss.A(n - 1, j) = -a[j];
  ss.B = Eigen::VectorXd::Zero(n);
  ss.B(n - 1) = 1.0;
  ss.C = Eigen::RowVectorXd::Zero(n);
  for (int j = 0; j < n; ++j) ss.C(j) = b[j] - ss.D * a[j];
  return ss;
}

inline std::complex<double> frequency_response(const StateSpace& ss, double omega) {
  const int n = ss.order();
  if (n == 0) return ss.D;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n) * std::complex<double>(0.0, omega);
  M -= ss.A.cast<std::complex<double>>();
  Eigen::VectorXcd z = M.partialPivLu().solve(ss.B.cast<std::complex<double>>());
  return (ss.C.cast<std::complex<double>>() * z).value() + ss.D;
}

inline Eigen::VectorXcd poles(const StateSpace& ss) {
  if (ss.order() == 0) return Eigen::VectorXcd();
  Eigen::EigenSolver<Eigen::MatrixXd> es(ss.A, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

} // namespace mfc::plants
