#include "qvs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qvs {

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian-rbf") return KernelFamily::GaussianRbf;
  if (name == "cosine-similarity") return KernelFamily::CosineSimilarity;
  if (name == "distance-derived") return KernelFamily::DistanceDerived;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::GaussianRbf:
      return "gaussian-rbf";
    case KernelFamily::CosineSimilarity:
      return "cosine-similarity";
    case KernelFamily::DistanceDerived:
      return "distance-derived";
  }
  return "?";
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::GaussianRbf:
      if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
        throw std::invalid_argument("KernelSpec: gaussian lengthscale must be positive and finite");
      }
      break;
    case KernelFamily::DistanceDerived:
      if (!(max_distance > 0.0) || !std::isfinite(max_distance)) {
        throw std::invalid_argument("KernelSpec: max_distance must be positive and finite");
      }
      break;
    case KernelFamily::CosineSimilarity:
      break;
  }
}

double kernel_eval(const KernelSpec& spec, const Point& a, const Point& b) {
  spec.validate();
  require_valid_point(a, "kernel_eval");
  require_valid_point(b, "kernel_eval");
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  switch (spec.family) {
    case KernelFamily::GaussianRbf: {
      if (&a == &b || a.coords == b.coords) return 1.0;  // k(x, x) = 1 exactly
      const double d2 = squared_distance(a, b);
      return std::exp(-d2 / (2.0 * spec.lengthscale * spec.lengthscale));
    }
    case KernelFamily::CosineSimilarity: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("kernel_eval: cosine similarity undefined for zero vector");
      }
      const double v = dot / std::sqrt(na * nb);
      return std::clamp(v, -1.0, 1.0);
    }
    case KernelFamily::DistanceDerived: {
      const double v = 1.0 - distance(a, b) / spec.max_distance;
      return std::clamp(v, 0.0, 1.0);
    }
  }
  throw std::logic_error("kernel_eval: unreachable");
}

KernelMatrix KernelMatrix::from_entries(std::size_t n, std::vector<double> entries) {
  if (entries.size() != n * n) {
    throw std::invalid_argument("KernelMatrix: entry count does not match n*n");
  }
  constexpr double tol = 1e-10;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(entries[i * n + i] - 1.0) > tol) {
      throw std::invalid_argument("KernelMatrix: diagonal entry differs from 1");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double v = entries[i * n + j];
      if (!std::isfinite(v) || v < -1.0 - tol || v > 1.0 + tol) {
        throw std::invalid_argument("KernelMatrix: entry outside [-1, 1]");
      }
      if (std::abs(v - entries[j * n + i]) > tol) {
        throw std::invalid_argument("KernelMatrix: matrix not symmetric");
      }
    }
  }
  KernelMatrix m;
  m.n_ = n;
  m.entries_ = std::move(entries);
  return m;
}

KernelMatrix KernelMatrix::principal_submatrix(std::span<const std::size_t> indices) const {
  const std::size_t k = indices.size();
  for (std::size_t a = 0; a < k; ++a) {
    if (indices[a] >= n_) {
      throw std::invalid_argument("KernelMatrix: subset index out of range");
    }
    for (std::size_t b = a + 1; b < k; ++b) {
      if (indices[a] == indices[b]) {
        throw std::invalid_argument("KernelMatrix: duplicate subset index");
      }
    }
  }
  KernelMatrix sub;
  sub.n_ = k;
  sub.entries_.resize(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      sub.entries_[a * k + b] = entries_[indices[a] * n_ + indices[b]];
    }
  }
  return sub;
}

KernelMatrix build_kernel_matrix(const KernelSpec& spec, std::span<const Point> items) {
  if (items.empty()) {
    throw std::invalid_argument("build_kernel_matrix: empty item list");
  }
  const std::size_t n = items.size();
  const std::size_t d = items[0].dim();
  for (const Point& p : items) {
    require_valid_point(p, "build_kernel_matrix");
    if (p.dim() != d) {
      throw std::invalid_argument("build_kernel_matrix: points have mixed dimensions");
    }
  }
  KernelMatrix m;
  m.n_ = n;
  m.entries_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.entries_[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_eval(spec, items[i], items[j]);
      m.entries_[i * n + j] = v;
      m.entries_[j * n + i] = v;
    }
  }
  return m;
}

}  // namespace qvs
