#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "lvlab/errors.hpp"

namespace lvlab {

// Competition-diffusion model
//   u_t = u_xx   + u (1 - u - a v)
//   v_t = d v_xx + r v (1 - v - b u)
struct ModelParams {
  double a = 0.5;
  double b = 0.5;
  double d = 1.0;
  double r = 1.0;

  void validate() const {
    require(a > 0.0 && b > 0.0 && d > 0.0 && r > 0.0, Code::InvalidArgument,
            "model parameters must be positive");
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(d) && std::isfinite(r),
            Code::InvalidArgument, "model parameters must be finite");
  }
};

enum class Regime {
  WeakCompetition, // 0 < a, b < 1: coexistence state attracts
  Bistable,        // a, b > 1: both pure states stable
  UWins,           // a < 1 < b
  VWins,           // b < 1 < a
};

inline Regime classify_regime(const ModelParams& p) {
  p.validate();
  require(p.a != 1.0 && p.b != 1.0, Code::RegimeMismatch, "degenerate regime (a = 1 or b = 1)");
  if (p.a < 1.0 && p.b < 1.0) return Regime::WeakCompetition;
  if (p.a > 1.0 && p.b > 1.0) return Regime::Bistable;
  if (p.a < 1.0) return Regime::UWins;
  return Regime::VWins;
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::WeakCompetition: return "weak_competition";
    case Regime::Bistable: return "bistable";
    case Regime::UWins: return "u_wins";
    case Regime::VWins: return "v_wins";
  }
  return "unknown";
}

struct Equilibrium {
  double u = 0.0;
  double v = 0.0;
};

inline Equilibrium e_zero() { return {0.0, 0.0}; }
inline Equilibrium e1() { return {1.0, 0.0}; }
inline Equilibrium e2() { return {0.0, 1.0}; }

// Interior equilibrium ((1-a)/(1-ab), (1-b)/(1-ab)); only meaningful away from ab = 1.
inline Equilibrium e_star(const ModelParams& p) {
  require(p.a != 1.0 && p.b != 1.0, Code::RegimeMismatch,
          "interior equilibrium undefined in degenerate regime");
  const double den = 1.0 - p.a * p.b;
  require(den != 0.0, Code::RegimeMismatch, "interior equilibrium undefined when a*b = 1");
  return {(1.0 - p.a) / den, (1.0 - p.b) / den};
}

// Componentwise competitive order: A <= B iff A.u <= B.u and A.v >= B.v.
inline bool k_leq(const Equilibrium& A, const Equilibrium& B, double tol = 0.0) {
  return A.u <= B.u + tol && A.v >= B.v - tol;
}

inline double norm1(const Equilibrium& w) { return std::abs(w.u) + std::abs(w.v); }

struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n = 3; // node count, nodes x_min + i*h, i = 0..n-1

  void validate() const {
    require(n >= 3, Code::InvalidArgument, "grid needs at least 3 nodes");
    require(x_max > x_min, Code::InvalidArgument, "grid interval is empty");
    require(std::isfinite(x_min) && std::isfinite(x_max), Code::InvalidArgument,
            "grid bounds must be finite");
  }

  double h() const { return (x_max - x_min) / static_cast<double>(n - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * h(); }

  std::vector<double> nodes() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
  }

  bool same(const GridSpec& o) const {
    return x_min == o.x_min && x_max == o.x_max && n == o.n;
  }
};

// Two-component field on a grid, in a frame moving with frame_speed.
struct StatePair {
  GridSpec grid;
  std::vector<double> u;
  std::vector<double> v;
  double frame_speed = 0.0;
  double time = 0.0;
  double u_cap = 0.0; // invariant-region caps; 0 means not yet pinned
  double v_cap = 0.0;

  void validate() const {
    grid.validate();
    require(u.size() == grid.n && v.size() == grid.n, Code::GridMismatch,
            "profile length does not match grid");
  }
};

// True if A <=_K B nodewise within tol: A.u <= B.u + tol and A.v >= B.v - tol.
inline bool k_leq(const StatePair& A, const StatePair& B, double tol) {
  if (!A.grid.same(B.grid)) fail(Code::GridMismatch, "k_leq: grids differ");
  for (std::size_t i = 0; i < A.grid.n; ++i) {
    if (A.u[i] > B.u[i] + tol) return false;
    if (A.v[i] < B.v[i] - tol) return false;
  }
  return true;
}

// Largest violation of A <=_K B over the grid (0 when the order holds exactly),
// together with where it happens.
struct KOrderReport {
  bool ordered = true;
  double violation = 0.0;
  std::size_t node = 0;
};

inline KOrderReport k_order_report(const StatePair& A, const StatePair& B, double tol) {
  if (!A.grid.same(B.grid)) fail(Code::GridMismatch, "k_order_report: grids differ");
  KOrderReport rep;
  for (std::size_t i = 0; i < A.grid.n; ++i) {
    const double w = std::max(A.u[i] - B.u[i], B.v[i] - A.v[i]);
    if (w > rep.violation) {
      rep.violation = w;
      rep.node = i;
    }
  }
  rep.ordered = rep.violation <= tol;
  return rep;
}

inline double k_violation(const StatePair& A, const StatePair& B) {
  return k_order_report(A, B, 0.0).violation;
}

inline double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size(), Code::GridMismatch, "sup_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace lvlab
