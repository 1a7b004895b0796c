#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "rheograph/rng.hpp"

namespace rheo {

// Symmetric 3x3 tensors (stress and symmetric velocity gradient) are stored
// as full Eigen matrices; all operations below assume/maintain symmetry.
using Sym3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// Frobenius norm |A| = sqrt(A:A) = sqrt(tr A^2) for symmetric A.
inline double frob(const Sym3& a) { return a.norm(); }

// Double contraction A:B.
inline double ddot(const Sym3& a, const Sym3& b) {
  return (a.array() * b.array()).sum();
}

inline Sym3 deviator(const Sym3& a) {
  return a - (a.trace() / 3.0) * Sym3::Identity();
}

inline Sym3 symmetrize(const Eigen::Matrix3d& a) {
  return 0.5 * (a + a.transpose());
}

// Random symmetric trace-free unit tensor: Gaussian entries, symmetrized,
// deviatoric part, normalized.  Used as a direction for on-graph sampling.
inline Sym3 random_direction(Rng& rng) {
  for (;;) {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
    Sym3 d = deviator(symmetrize(g));
    double n = frob(d);
    if (n > 1e-8) return d / n;
  }
}

// Random unit vector in R^3 (for boundary graphs: tangential velocity and
// traction directions).
inline Vec3 random_unit_vec(Rng& rng) {
  for (;;) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    double n = v.norm();
    if (n > 1e-8) return v / n;
  }
}

// Positive part (x)+ = max(x, 0), as used throughout activated models.
inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Heaviside step H(x) = 1 for x > 0, else 0 (the subgradient choice used by
// the semismooth Newton solver).
inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace rheo
