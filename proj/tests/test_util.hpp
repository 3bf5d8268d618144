#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace testutil {

// Composite Simpson quadrature, n even subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Dense polynomial with ascending coefficients.
struct Poly {
  std::vector<double> c;
  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
  }
  Poly derivative() const {
    if (c.size() <= 1) return Poly{{0.0}};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    return Poly{d};
  }
  // i-th derivative evaluated at x.
  double deriv_at(int i, double x) const {
    Poly p = *this;
    for (int k = 0; k < i; ++k) p = p.derivative();
    return p(x);
  }
};

inline std::vector<double> sample_function(const std::function<double(double)>& f,
                                           double h, std::size_t count,
                                           double t0 = 0.0) {
  std::vector<double> s(count);
  for (std::size_t j = 0; j < count; ++j) s[j] = f(t0 + static_cast<double>(j) * h);
  return s;
}

inline double mean(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / static_cast<double>(v.size() - 1);
}

// Least-squares slope of log|y| against t over [i0, i1); y must be nonzero.
inline double log_decay_rate(const std::vector<double>& t, const std::vector<double>& y,
                             std::size_t i0, std::size_t i1) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (std::size_t i = i0; i < i1; ++i) {
    const double ly = std::log(std::abs(y[i]));
    st += t[i]; sy += ly; stt += t[i] * t[i]; sty += t[i] * ly;
    ++n;
  }
  const double denom = n * stt - st * st;
  return -(n * sty - st * sy) / denom;
}

// Independent per-window realization of the derivative estimator: assemble
// the (N+1)x(N+1) linear system for one window and solve it numerically by
// Gaussian elimination. The window signal is modeled piecewise-linear and
// all weighted integrals are evaluated in closed form through monomial
// expansion, so this shares no code with the kernel path.
class DirectEstimator {
public:
  DirectEstimator(int N, int nu, double T, double h) : N_(N), nu_(nu), T_(T), h_(h) {}

  std::vector<double> estimate(const std::vector<double>& x) const {
    const int n = N_ + 1;
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (int m = 0; m <= N_; ++m) {
      for (int i = 0; i <= N_ - m; ++i) A[m][i] = lhs(m, i);
      b[m] = rhs(m, x);
    }
    return gauss_solve(A, b);
  }

private:
  int N_, nu_;
  double T_, h_;

  static double fact(int n) {
    double f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }
  static double perm(int n, int k) {
    double f = 1;
    for (int j = 0; j < k; ++j) f *= (n - j);
    return f;
  }
  static double choose(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

  double lhs(int m, int i) const {
    const int a = nu_ + m + i - N_;
    return perm(N_ - i, m) * std::pow(T_, a - 1) / fact(a - 1);
  }

  // integral over [lo,hi] of tau^p
  static double mono(double lo, double hi, int p) {
    return (std::pow(hi, p + 1) - std::pow(lo, p + 1)) / (p + 1);
  }

  // exact integral of g(tau) * interp(x) where g has ascending coeffs
  double weighted_integral(const std::vector<double>& g,
                           const std::vector<double>& x) const {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      const double a = j * h_, b2 = (j + 1) * h_;
      for (std::size_t p = 0; p < g.size(); ++p) {
        if (g[p] == 0.0) continue;
        const double ip = mono(a, b2, static_cast<int>(p));
        const double ip1 = mono(a, b2, static_cast<int>(p) + 1);
        // x(tau) = x_j (b-tau)/h + x_{j+1} (tau-a)/h on [a,b]
        acc += g[p] * (x[j] * (b2 * ip - ip1) + x[j + 1] * (ip1 - a * ip)) / h_;
      }
    }
    return acc;
  }

  double rhs(int m, const std::vector<double>& x) const {
    double acc = 0.0;
    for (int q = 0; q <= m; ++q) {
      const double coeff = choose(m, q) * perm(N_ + 1, q);
      const int alpha = nu_ + q - N_ - 1;
      const int nder = m - q;
      const double sign = (nder % 2) ? -1.0 : 1.0;
      if (alpha == 0) {
        acc += coeff * sign * std::pow(T_, nder) * x.back();
        continue;
      }
      // g(tau) = (T-tau)^(alpha-1) tau^nder / (alpha-1)! expanded in monomials
      std::vector<double> g(alpha + nder, 0.0);
      for (int k = 0; k <= alpha - 1; ++k) {
        const double c = choose(alpha - 1, k) * std::pow(T_, alpha - 1 - k) *
                         ((k % 2) ? -1.0 : 1.0);
        g[k + nder] += c / fact(alpha - 1);
      }
      acc += coeff * sign * weighted_integral(g, x);
    }
    return acc;
  }

  static std::vector<double> gauss_solve(std::vector<std::vector<double>> A,
                                         std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
      std::swap(A[col], A[piv]);
      std::swap(b[col], b[piv]);
      if (A[col][col] == 0.0) throw std::runtime_error("singular test system");
      for (std::size_t r = col + 1; r < n; ++r) {
        const double f = A[r][col] / A[col][col];
        for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> sol(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
      double acc = b[r];
      for (std::size_t c = r + 1; c < n; ++c) acc -= A[r][c] * sol[c];
      sol[r] = acc / A[r][r];
    }
    return sol;
  }
};

} // namespace testutil
