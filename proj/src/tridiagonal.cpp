#include "pfr/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace pfr {

double Tridiagonal::at(int i, int j) const {
  if (i == j) return diag[i];
  if (j == i + 1) return upper[i];
  if (i == j + 1) return lower[j];
  return 0.0;
}

std::vector<double> Tridiagonal::multiply(std::span<const double> v) const {
  const int n = size();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double s = diag[i] * v[i];
    if (i > 0) s += lower[i - 1] * v[i - 1];
    if (i + 1 < n) s += upper[i] * v[i + 1];
    out[i] = s;
  }
  return out;
}

bool TridiagonalLU::factor(const Tridiagonal& a) {
  const int n = a.size();
  dl_ = a.lower;
  d_ = a.diag;
  du_ = a.upper;
  du2_.assign(n > 2 ? n - 2 : 0, 0.0);
  pivot_.resize(n);
  for (int i = 0; i < n; ++i) pivot_[i] = i;

  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      if (d_[i] != 0.0) {
        const double fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      const double fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const double temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
      pivot_[i] = i + 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (d_[i] == 0.0 || !std::isfinite(d_[i])) return false;
  }
  return true;
}

void TridiagonalLU::solve(std::span<double> b) const {
  const int n = static_cast<int>(d_.size());
  if (static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("TridiagonalLU::solve: size mismatch");
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (pivot_[i] == i) {
      b[i + 1] -= dl_[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - dl_[i] * b[i];
    }
  }
  if (n == 0) return;
  b[n - 1] /= d_[n - 1];
  if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
  for (int i = n - 3; i >= 0; --i) {
    b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
  }
}

}  // namespace pfr
