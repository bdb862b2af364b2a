#include "qvs/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qvs {

namespace {

constexpr double kNegativeTolerance = -1e-8;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

// Squared off-diagonal Frobenius norm (both triangles).
double off_diagonal_sq(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = a[i * n + j];
      s += v * v;
    }
  }
  return 2.0 * s;
}

}  // namespace

void jacobi_eigenvalues(double* a, std::size_t n, Matrix* vectors) {
  if (vectors != nullptr) {
    *vectors = Matrix::identity(n);
  }
  if (n < 2) return;

  const double threshold = kOffDiagonalTolerance * static_cast<double>(n);
  const double threshold_sq = threshold * threshold;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_sq(a, n) <= threshold_sq) return;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        // smaller-magnitude root for stability
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * n + p];
          const double arq = a[r * n + q];
          const double nrp = arp - s * (arq + tau * arp);
          const double nrq = arq + s * (arp - tau * arq);
          a[r * n + p] = nrp;
          a[p * n + r] = nrp;
          a[r * n + q] = nrq;
          a[q * n + r] = nrq;
        }
        if (vectors != nullptr) {
          for (std::size_t r = 0; r < n; ++r) {
            const double vrp = (*vectors)(r, p);
            const double vrq = (*vectors)(r, q);
            (*vectors)(r, p) = vrp - s * (vrq + tau * vrp);
            (*vectors)(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }
}

EigenSystem eigen_symmetric_full(const KernelMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> work(m.entries());
  EigenSystem sys;
  jacobi_eigenvalues(work.data(), n, &sys.vectors);
  sys.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) sys.values[i] = work[i * n + i];
  return sys;
}

std::vector<double> normalize_eigenvalues(std::span<const double> raw) {
  std::vector<double> clamped(raw.begin(), raw.end());
  double sum = 0.0;
  for (double& v : clamped) {
    if (v < 0.0) {
      if (v < kNegativeTolerance) {
        throw std::runtime_error("eigen_symmetric: eigenvalue " + std::to_string(v) +
                                 " below tolerance -1e-8; input matrix is not PSD");
      }
      v = 0.0;
    }
    sum += v;
  }
  if (!clamped.empty()) {
    if (sum <= 0.0) {
      throw std::runtime_error("eigen_symmetric: eigenvalue sum is not positive");
    }
    for (double& v : clamped) v /= sum;
  }
  return clamped;
}

Spectrum eigen_symmetric(const KernelMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> work(m.entries());
  jacobi_eigenvalues(work.data(), n, nullptr);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = work[i * n + i];
  std::sort(values.begin(), values.end(), std::greater<double>());

  Spectrum spec;
  spec.normalized = normalize_eigenvalues(values);
  for (double& v : values) {
    if (v < 0.0) v = 0.0;  // same clamp as normalize_eigenvalues, already range-checked
  }
  spec.eigenvalues = std::move(values);
  return spec;
}

}  // namespace qvs
