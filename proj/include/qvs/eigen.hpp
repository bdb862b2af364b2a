#pragma once

#include <span>
#include <vector>

#include "qvs/kernels.hpp"
#include "qvs/linalg.hpp"

namespace qvs {

// Eigenvalues of a kernel matrix, sorted descending and clamped at zero,
// together with the normalized vector (divided by the eigenvalue sum, which
// equals the trace n).
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> normalized;
};

// Cyclic Jacobi rotations on a dense symmetric matrix held in `a` (row-major,
// n x n). The matrix is overwritten; on return its diagonal holds the
// eigenvalues. Converges when the off-diagonal Frobenius norm falls below
// 1e-12 * n, capped at 100 sweeps. When `vectors` is non-null it accumulates
// the rotations: column j of `vectors` is the eigenvector for diagonal entry j.
void jacobi_eigenvalues(double* a, std::size_t n, Matrix* vectors);

struct EigenSystem {
  std::vector<double> values;  // unsorted, matching vector columns
  Matrix vectors;
};

// Full eigensystem of a kernel matrix (used where reconstruction matters).
EigenSystem eigen_symmetric_full(const KernelMatrix& m);

// Clamp eigenvalue jitter in [-1e-8, 0) to zero and divide by the sum.
// Anything below -1e-8 signals a non-PSD input and throws with the value.
std::vector<double> normalize_eigenvalues(std::span<const double> raw);

// Sorted, clamped, normalized spectrum of a kernel matrix.
Spectrum eigen_symmetric(const KernelMatrix& m);

}  // namespace qvs
