#include "lvlab/tridiag.hpp"

#include <algorithm>
#include <cmath>

namespace lvlab {

std::vector<double> solve_tridiag(std::vector<double> sub, std::vector<double> diag,
                                  std::vector<double> sup, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  require(n >= 1, Code::InvalidArgument, "solve_tridiag: empty system");
  require(sub.size() == n && sup.size() == n && rhs.size() == n, Code::InvalidArgument,
          "solve_tridiag: band length mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) fail(Code::SingularSystem, "solve_tridiag: zero pivot");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) fail(Code::SingularSystem, "solve_tridiag: zero pivot");
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  }
  return rhs;
}

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), rows_(2 * kl + ku + 1), ab_(rows_ * n, 0.0), piv_(n, 0) {
  require(n >= 1, Code::InvalidArgument, "BandedLU: empty system");
  require(kl < n && ku < n, Code::InvalidArgument, "BandedLU: bandwidth exceeds size");
}

double& BandedLU::at(std::size_t i, std::size_t j) {
  return ab_[(kl_ + ku_ + i - j) * n_ + j];
}

double BandedLU::at(std::size_t i, std::size_t j) const {
  return ab_[(kl_ + ku_ + i - j) * n_ + j];
}

void BandedLU::set(std::size_t i, std::size_t j, double value) {
  require(!factored_, Code::InvalidArgument, "BandedLU: set after factor");
  require(i < n_ && j < n_, Code::InvalidArgument, "BandedLU: index out of range");
  require(j + kl_ >= i && i + ku_ >= j, Code::InvalidArgument, "BandedLU: entry outside band");
  at(i, j) = value;
}

void BandedLU::add(std::size_t i, std::size_t j, double value) {
  require(!factored_, Code::InvalidArgument, "BandedLU: add after factor");
  require(i < n_ && j < n_, Code::InvalidArgument, "BandedLU: index out of range");
  require(j + kl_ >= i && i + ku_ >= j, Code::InvalidArgument, "BandedLU: entry outside band");
  at(i, j) += value;
}

double BandedLU::get(std::size_t i, std::size_t j) const {
  require(i < n_ && j < n_, Code::InvalidArgument, "BandedLU: index out of range");
  if (i > j + kl_) return 0.0;       // below stored band
  if (j > i + ku_ + kl_) return 0.0; // beyond fill band
  return at(i, j);
}

void BandedLU::factor() {
  require(!factored_, Code::InvalidArgument, "BandedLU: already factored");
  const std::size_t ubw = kl_ + ku_; // upper bandwidth after fill
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t pmax = std::min(k + kl_, n_ - 1);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= pmax; ++i) {
      const double cand = std::abs(at(i, k));
      if (cand > best) {
        best = cand;
        p = i;
      }
    }
    if (best == 0.0) fail(Code::SingularSystem, "BandedLU: zero pivot column");
    piv_[k] = p;
    const std::size_t jmax = std::min(k + ubw, n_ - 1);
    if (p != k) {
      for (std::size_t j = k; j <= jmax; ++j) std::swap(at(k, j), at(p, j));
    }
    const double pivot = at(k, k);
    for (std::size_t i = k + 1; i <= pmax; ++i) {
      const double m = at(i, k) / pivot;
      at(i, k) = m; // keep the multiplier where the zero appears
      if (m != 0.0) {
        for (std::size_t j = k + 1; j <= jmax; ++j) at(i, j) -= m * at(k, j);
      }
    }
  }
  factored_ = true;
}

std::vector<double> BandedLU::solve(std::vector<double> rhs) const {
  require(factored_, Code::InvalidArgument, "BandedLU: solve before factor");
  require(rhs.size() == n_, Code::InvalidArgument, "BandedLU: rhs length mismatch");
  const std::size_t ubw = kl_ + ku_;
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(rhs[k], rhs[piv_[k]]);
    const std::size_t imax = std::min(k + kl_, n_ - 1);
    for (std::size_t i = k + 1; i <= imax; ++i) rhs[i] -= at(i, k) * rhs[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t jmax = std::min(k + ubw, n_ - 1);
    double s = rhs[k];
    for (std::size_t j = k + 1; j <= jmax; ++j) s -= at(k, j) * rhs[j];
    rhs[k] = s / at(k, k);
  }
  return rhs;
}

StencilRoots stencil_char_roots(double sub, double diag, double sup) {
  require(sup != 0.0, Code::InvalidArgument, "stencil_char_roots: leading coefficient is zero");
  const double disc = diag * diag - 4.0 * sup * sub;
  require(disc >= 0.0, Code::DomainError, "stencil_char_roots: complex roots");
  const double sq = std::sqrt(disc);
  const double q = (diag >= 0.0) ? -0.5 * (diag + sq) : -0.5 * (diag - sq);
  double r1, r2;
  if (q != 0.0) {
    r1 = q / sup;
    r2 = sub / q;
  } else {
    r1 = 0.0;
    r2 = 0.0;
  }
  if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
  return {r1, r2};
}

double rate_from_ratio(double rho, double h) {
  require(rho > 0.0, Code::DomainError, "rate_from_ratio: nonpositive ratio");
  require(h > 0.0, Code::InvalidArgument, "rate_from_ratio: nonpositive spacing");
  return -std::log(rho) / h;
}

} // namespace lvlab
