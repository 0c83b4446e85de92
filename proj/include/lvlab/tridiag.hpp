#pragma once

#include <cstddef>
#include <vector>

#include "lvlab/errors.hpp"

namespace lvlab {

// Solves a tridiagonal system in place. sub[0] and sup[n-1] are ignored.
// Plain Thomas elimination; caller guarantees the system is safely pivotable
// (the integrator's implicit matrices are strictly diagonally dominant).
std::vector<double> solve_tridiag(std::vector<double> sub, std::vector<double> diag,
                                  std::vector<double> sup, std::vector<double> rhs);

// General banded matrix with LU factorization under partial pivoting.
// Row i may hold entries in columns [i-kl, i+ku]; factorization fill extends
// the upper bandwidth to kl+ku. Storage follows the classic band layout:
// entry (i, j) lives at ab[(kl + ku + i - j) * n + j].
class BandedLU {
public:
  BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }

  void set(std::size_t i, std::size_t j, double value);
  void add(std::size_t i, std::size_t j, double value);
  double get(std::size_t i, std::size_t j) const;

  // Factors in place; throws SingularSystem on a zero pivot column.
  void factor();

  // Solves A x = rhs using the stored factorization.
  std::vector<double> solve(std::vector<double> rhs) const;

  bool factored() const { return factored_; }

private:
  std::size_t n_, kl_, ku_, rows_;
  std::vector<double> ab_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;

  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;
};

// Roots of the characteristic polynomial sup·ρ² + diag·ρ + sub = 0 of the
// constant-coefficient three-point recurrence sub·w_{i-1} + diag·w_i + sup·w_{i+1} = 0,
// computed cancellation-safely. slow is the root of larger magnitude.
struct StencilRoots {
  double slow;
  double fast;
};
StencilRoots stencil_char_roots(double sub, double diag, double sup);

// Continuum decay rate -ln(rho)/h implied by a grid ratio rho in (0, 1].
double rate_from_ratio(double rho, double h);

} // namespace lvlab
