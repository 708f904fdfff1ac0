#pragma once

#include <span>
#include <vector>

namespace pfr {

/// Square tridiagonal matrix stored by diagonals.
/// lower[i] = A(i+1, i), diag[i] = A(i, i), upper[i] = A(i, i+1).
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  Tridiagonal() = default;
  explicit Tridiagonal(int n) : lower(n > 0 ? n - 1 : 0), diag(n), upper(n > 0 ? n - 1 : 0) {}

  int size() const { return static_cast<int>(diag.size()); }
  /// Entry (i, j); zero off the band.
  double at(int i, int j) const;
  std::vector<double> multiply(std::span<const double> v) const;
};

/// LU factorization with partial pivoting (the LAPACK gttrf scheme).
/// Pivoting fills one extra superdiagonal.
class TridiagonalLU {
 public:
  /// Returns false when a zero pivot is met.
  bool factor(const Tridiagonal& a);
  /// Solves A x = b in place.
  void solve(std::span<double> b) const;

 private:
  std::vector<double> dl_, d_, du_, du2_;
  std::vector<int> pivot_;
};

}  // namespace pfr
