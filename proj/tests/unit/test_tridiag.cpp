#include "doctest.h"

#include <cmath>
#include <vector>

#include "lvlab/errors.hpp"
#include "lvlab/rng.hpp"
#include "lvlab/tridiag.hpp"

using namespace lvlab;

namespace {

// Dense Gaussian elimination with partial pivoting, for cross-checks only.
std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
    x[i] = s / A[i][i];
  }
  return x;
}

} // namespace

TEST_CASE("thomas solve matches dense elimination on dominant systems") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform(0.0, 12.0));
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      sub[i] = rng.uniform(-1.0, 1.0);
      sup[i] = rng.uniform(-1.0, 1.0);
      diag[i] = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) *
                (std::abs(sub[i]) + std::abs(sup[i]) + rng.uniform(0.5, 2.0));
      rhs[i] = rng.uniform(-3.0, 3.0);
      A[i][i] = diag[i];
      if (i > 0) A[i][i - 1] = sub[i];
      if (i + 1 < n) A[i][i + 1] = sup[i];
    }
    const std::vector<double> x = solve_tridiag(sub, diag, sup, rhs);
    const std::vector<double> y = dense_solve(A, rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-10));
  }
}

TEST_CASE("banded LU matches dense elimination and detects singularity") {
  Rng rng(12);
  const std::size_t n = 14, kl = 2, ku = 3;
  BandedLU band(n, kl, ku);
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = rng.uniform(-2.0, 2.0);
    for (std::size_t j = (i >= kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
      const double v = rng.uniform(-1.0, 1.0) + (i == j ? 6.0 : 0.0);
      band.set(i, j, v);
      A[i][j] = v;
    }
  }
  band.factor();
  const std::vector<double> x = band.solve(rhs);
  const std::vector<double> y = dense_solve(A, rhs);
  for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-10));

  BandedLU zero(4, 1, 1); // all-zero matrix has no pivot anywhere
  CHECK_THROWS_AS(zero.factor(), Error);
}

TEST_CASE("stencil roots solve the recurrence polynomial") {
  const StencilRoots roots = stencil_char_roots(1.0, -2.6, 1.0);
  for (double rho : {roots.slow, roots.fast})
    CHECK(1.0 * rho * rho - 2.6 * rho + 1.0 == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(std::abs(roots.slow) >= std::abs(roots.fast));
  CHECK(roots.slow * roots.fast == doctest::Approx(1.0).epsilon(1e-13)); // product = sub/sup
  // a ratio rho = e^{-k h} converts back to the continuum rate k
  CHECK(rate_from_ratio(std::exp(-0.35 * 0.05), 0.05) == doctest::Approx(0.35).epsilon(1e-12));
}
