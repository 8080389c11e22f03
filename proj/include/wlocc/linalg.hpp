#pragma once

// Minimal 2x2 complex matrix algebra for single-qubit local operators.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace wlocc {

using complex = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
struct Matrix2 {
  std::array<complex, 4> m{};

  constexpr complex& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }
  constexpr const complex& operator()(int r, int c) const {
    return m[static_cast<std::size_t>(2 * r + c)];
  }

  static Matrix2 identity() { return {{complex{1}, complex{0}, complex{0}, complex{1}}}; }
  static Matrix2 zero() { return {}; }
  static Matrix2 diag(complex a, complex d) { return {{a, complex{0}, complex{0}, d}}; }
  static Matrix2 upper(complex a, complex b, complex d) { return {{a, b, complex{0}, d}}; }

  bool is_upper_triangular(double tol = 0.0) const { return std::abs(m[2]) <= tol; }
};

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

inline Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
  Matrix2 r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
  return r;
}

inline Matrix2 operator*(complex s, const Matrix2& a) {
  Matrix2 r;
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
  return r;
}

inline Matrix2 adjoint(const Matrix2& a) {
  return {{std::conj(a.m[0]), std::conj(a.m[2]), std::conj(a.m[1]), std::conj(a.m[3])}};
}

/// A^dagger A.
inline Matrix2 gram(const Matrix2& a) { return adjoint(a) * a; }

inline double max_abs_diff(const Matrix2& a, const Matrix2& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.m[i] - b.m[i]));
  return d;
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
inline std::array<double, 2> hermitian_eigenvalues(const Matrix2& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double off = std::norm(h(0, 1));
  const double half_tr = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + off);
  return {half_tr - disc, half_tr + disc};
}

inline double largest_eigenvalue(const Matrix2& h) { return hermitian_eigenvalues(h)[1]; }

}  // namespace wlocc
