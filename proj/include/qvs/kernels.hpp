#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qvs/geometry.hpp"

namespace qvs {

enum class KernelFamily { GaussianRbf, CosineSimilarity, DistanceDerived };

KernelFamily parse_kernel_family(std::string_view name);
std::string to_string(KernelFamily family);

// Similarity function description. Only the parameter of the chosen family is
// meaningful: lengthscale for gaussian-rbf, max_distance for distance-derived.
struct KernelSpec {
  KernelFamily family = KernelFamily::GaussianRbf;
  double lengthscale = 1.0;
  double max_distance = 1.0;

  static KernelSpec gaussian(double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::GaussianRbf;
    s.lengthscale = lengthscale;
    return s;
  }
  static KernelSpec cosine() {
    KernelSpec s;
    s.family = KernelFamily::CosineSimilarity;
    return s;
  }
  static KernelSpec distance_derived(double max_distance) {
    KernelSpec s;
    s.family = KernelFamily::DistanceDerived;
    s.max_distance = max_distance;
    return s;
  }

  void validate() const;
};

// k(a, b) for the configured family. Gaussian and distance-derived values lie
// in [0, 1]; cosine lies in [-1, 1] and rejects zero vectors (the diagonal
// could not be 1).
double kernel_eval(const KernelSpec& spec, const Point& a, const Point& b);

// Symmetric positive-semidefinite similarity matrix with unit diagonal. A
// default-constructed instance is the empty set (n = 0).
class KernelMatrix {
 public:
  KernelMatrix() = default;

  // Validates symmetry (1e-10), unit diagonal (1e-10) and entry range [-1, 1].
  static KernelMatrix from_entries(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

  // Rows/columns selected by `indices`; throws on out-of-range or duplicates.
  KernelMatrix principal_submatrix(std::span<const std::size_t> indices) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;

  friend KernelMatrix build_kernel_matrix(const KernelSpec&, std::span<const Point>);
};

// Pairwise kernel matrix over a nonempty uniform-dimension point set.
// Symmetric by construction with an exactly unit diagonal.
KernelMatrix build_kernel_matrix(const KernelSpec& spec, std::span<const Point> items);

}  // namespace qvs
