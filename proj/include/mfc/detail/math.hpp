#pragma once

namespace mfc::detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// n * (n-1) * ... * (n-k+1)
inline double falling(int n, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (n - j);
  return f;
}

inline double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

} // namespace mfc::detail
