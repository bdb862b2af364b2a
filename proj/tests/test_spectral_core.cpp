#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qvs/eigen.hpp"
#include "qvs/kernels.hpp"
#include "qvs/rng.hpp"

using namespace qvs;

namespace {

std::vector<Point> random_points(std::size_t n, std::size_t dim, Rng& rng, double half = 2.0) {
  std::vector<Point> pts(n);
  for (Point& p : pts) {
    p.coords.resize(dim);
    for (double& c : p.coords) c = rng.uniform(-half, half);
  }
  return pts;
}

}  // namespace

TEST_CASE("kernel_eval gaussian basics") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  const Point a{0.0, 0.0};
  CHECK(kernel_eval(spec, a, a) == 1.0);

  const Point b{1.0, 1.0};  // squared distance 2 -> exp(-1)
  CHECK(kernel_eval(spec, a, b) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const KernelSpec wide = KernelSpec::gaussian(2.0);
  CHECK(kernel_eval(wide, a, b) == doctest::Approx(std::exp(-2.0 / 8.0)).epsilon(1e-12));
}

TEST_CASE("kernel_eval distance-derived clamps at max distance") {
  const KernelSpec spec = KernelSpec::distance_derived(2.0);
  const Point a{0.0};
  CHECK(kernel_eval(spec, a, Point{2.0}) == 0.0);
  CHECK(kernel_eval(spec, a, Point{5.0}) == 0.0);  // beyond max clamps
  CHECK(kernel_eval(spec, a, Point{1.0}) == doctest::Approx(0.5));
  CHECK(kernel_eval(spec, a, a) == 1.0);
}

TEST_CASE("kernel_eval cosine similarity") {
  const KernelSpec spec = KernelSpec::cosine();
  CHECK(kernel_eval(spec, Point{1.0, 0.0}, Point{0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(kernel_eval(spec, Point{1.0, 0.0}, Point{-2.0, 0.0}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(kernel_eval(spec, Point{0.0, 0.0}, Point{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("kernel_eval rejects bad input") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);
  CHECK_THROWS_AS(kernel_eval(spec, Point{1.0}, Point{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(kernel_eval(spec, Point{std::nan("")}, Point{1.0}), std::invalid_argument);
  KernelSpec bad = KernelSpec::gaussian(0.0);
  CHECK_THROWS_AS(kernel_eval(bad, Point{1.0}, Point{1.0}), std::invalid_argument);
}

TEST_CASE("build_kernel_matrix structure") {
  const KernelSpec spec = KernelSpec::gaussian(1.0);

  SUBCASE("far-apart points approach the identity") {
    const std::vector<Point> pts{{0.0, 0.0}, {100.0, 0.0}, {0.0, 100.0}};
    const KernelMatrix m = build_kernel_matrix(spec, pts);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(m(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-6));
      }
    }
  }

  SUBCASE("identical points give the all-ones matrix") {
    const std::vector<Point> pts{{0.5, -0.5}, {0.5, -0.5}};
    const KernelMatrix m = build_kernel_matrix(spec, pts);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) CHECK(m(i, j) == 1.0);
    }
  }

  SUBCASE("squared distance 2 l^2 gives off-diagonal exp(-1)") {
    const KernelSpec s2 = KernelSpec::gaussian(0.7);
    const double d = 0.7 * std::sqrt(2.0);
    const std::vector<Point> pts{{0.0}, {d}};
    const KernelMatrix m = build_kernel_matrix(s2, pts);
    CHECK(m(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(build_kernel_matrix(spec, std::vector<Point>{}), std::invalid_argument);
    CHECK_THROWS_AS(build_kernel_matrix(spec, std::vector<Point>{{1.0}, {1.0, 2.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("KernelMatrix validation") {
  CHECK_THROWS_AS(KernelMatrix::from_entries(2, {1.0, 0.5, 0.4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(KernelMatrix::from_entries(2, {1.0, 0.5, 0.5, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(KernelMatrix::from_entries(2, {1.0, 1.5, 1.5, 1.0}), std::invalid_argument);
  const KernelMatrix m = KernelMatrix::from_entries(2, {1.0, 0.5, 0.5, 1.0});
  CHECK(m.size() == 2);
  CHECK(m(0, 1) == 0.5);
}

TEST_CASE("eigen_symmetric on closed-form cases") {
  SUBCASE("identity") {
    const KernelMatrix m = KernelMatrix::from_entries(3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const Spectrum s = eigen_symmetric(m);
    for (double v : s.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : s.normalized) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("all-ones rank one") {
    const KernelMatrix m = KernelMatrix::from_entries(4, std::vector<double>(16, 1.0));
    const Spectrum s = eigen_symmetric(m);
    CHECK(s.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-10));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s.eigenvalues[i]) < 1e-10);
    CHECK(s.normalized[0] == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("2x2 with 0.5 coupling") {
    const KernelMatrix m = KernelMatrix::from_entries(2, {1.0, 0.5, 0.5, 1.0});
    const Spectrum s = eigen_symmetric(m);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.normalized[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.normalized[1] == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("non-PSD input is reported") {
    const KernelMatrix boundary = KernelMatrix::from_entries(2, {1.0, 1.0, 1.0, 1.0});
    CHECK_NOTHROW(eigen_symmetric(boundary));  // PSD boundary is fine
    // indefinite: det of [[1, .9, .1], [.9, 1, .9], [.1, .9, 1]] is negative
    const KernelMatrix bad =
        KernelMatrix::from_entries(3, {1.0, 0.9, 0.1, 0.9, 1.0, 0.9, 0.1, 0.9, 1.0});
    CHECK_THROWS_AS(eigen_symmetric(bad), std::runtime_error);
  }
}

TEST_CASE("spectrum invariants on random gaussian kernels") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const std::size_t dim = 1 + rng.index(3);
    const std::vector<Point> pts = random_points(n, dim, rng);
    const KernelMatrix m = build_kernel_matrix(KernelSpec::gaussian(1.0), pts);

    const Spectrum s = eigen_symmetric(m);  // PSD closure: no throw
    double trace = 0.0, norm_sum = 0.0;
    for (double v : s.eigenvalues) trace += v;
    for (double v : s.normalized) norm_sum += v;
    CHECK(trace == doctest::Approx(static_cast<double>(n)).epsilon(1e-8));
    CHECK(norm_sum == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    for (double v : s.normalized) CHECK(v >= 0.0);
  }
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const std::vector<Point> pts = random_points(n, 2, rng);
    const KernelMatrix m = build_kernel_matrix(KernelSpec::gaussian(0.8), pts);
    const EigenSystem sys = eigen_symmetric_full(m);

    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          acc += sys.vectors(i, k) * sys.values[k] * sys.vectors(j, k);
        }
        worst = std::max(worst, std::abs(acc - m(i, j)));
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("permutation invariance of the spectrum") {
  Rng rng(13);
  const std::vector<Point> pts = random_points(6, 2, rng);
  const KernelMatrix m = build_kernel_matrix(KernelSpec::gaussian(1.0), pts);

  std::vector<Point> shuffled = pts;
  std::swap(shuffled[0], shuffled[4]);
  std::swap(shuffled[2], shuffled[5]);
  const KernelMatrix mp = build_kernel_matrix(KernelSpec::gaussian(1.0), shuffled);

  const Spectrum a = eigen_symmetric(m);
  const Spectrum b = eigen_symmetric(mp);
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-10));
  }
}

TEST_CASE("principal submatrix validation") {
  const KernelMatrix m = KernelMatrix::from_entries(2, {1.0, 0.5, 0.5, 1.0});
  const std::vector<std::size_t> dup{0, 0};
  const std::vector<std::size_t> oob{0, 5};
  CHECK_THROWS_AS(m.principal_submatrix(dup), std::invalid_argument);
  CHECK_THROWS_AS(m.principal_submatrix(oob), std::invalid_argument);
  const std::vector<std::size_t> ok{1};
  CHECK(m.principal_submatrix(ok).size() == 1);
}
