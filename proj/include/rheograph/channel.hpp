#pragma once

// Numeric 1D steady and unsteady channel-flow solver for bulk/boundary model
// pairs. The wall-to-wall momentum balance d/dy[tau(u')] + 2*nu_ref*C + b = 0
// is discretized conservatively on a uniform staggered grid (velocity at
// nodes, shear flux at faces) and solved by damped semismooth Newton with an
// epsilon-regularized flux and a continuation schedule. Unsteady runs use
// implicit Euler and keep a per-step discrete energy ledger.

#include <functional>
#include <vector>

#include "rheograph/models.hpp"

namespace rheo {

// Uniform node/face layout on [-L, L].
struct Grid {
  int n = 0;     // cell count; n + 1 nodes
  double L = 0;  // half-width
  double h = 0;  // spacing 2L/n
  std::vector<double> nodes;

  static Grid uniform(double L, int n);
};

enum class ForcingKind { GivenC, GivenQ };

struct ChannelProblem {
  double L = 1.0;
  ForcingKind forcing = ForcingKind::GivenC;
  double C = 0.0;  // prescribed pressure constant (GivenC)
  double Q = 0.0;  // prescribed flux (GivenQ); C becomes an unknown
  BulkModel fluid;
  BoundaryModel bc;
  // Driving data for unsteady runs; null means identically zero.
  std::function<double(double t, double y)> body_force;
  std::function<double(double y)> v0;
  double T = 0.0;  // time horizon
};

struct ChannelOpts {
  double tol = 1e-10;     // residual test is tol * max(1, |2 nu_ref C|)
  int max_iters = 100;    // Newton iterations per stage
  int max_switches = 50;  // wall stick/slide branch changes per stage
  double eps_start = 1.0;
  double eps_factor = 0.1;
  double eps_final = 1e-8;  // regularization retained in the reported answer
  // Optional warm start for steady solves (must match the grid node count).
  std::vector<double> u_init;
  double C_init = 0.0;  // starting C in GivenQ mode
};

struct LedgerRow {
  double t = 0;
  double kinetic = 0;      // integral of u^2/2
  double dissipation = 0;  // integral of tau_eps(u') u' plus wall powers s*u
  double work = 0;         // integral of (2 nu_ref C + b) u
  double slack = 0;        // work - d(kinetic)/dt - dissipation (>= 0)
};

struct SolveReport {
  std::vector<double> y;
  std::vector<double> u;
  double C = 0.0;  // resolved constant (GivenQ) or the prescribed one
  std::vector<int> newton_iters;     // per continuation stage, then per step
  std::vector<double> eps_schedule;  // continuation values actually used
  double residual_norm = 0.0;        // final infinity norm
  // True when the answer is an eps_final > 0 stand-in for a problem whose
  // eps = 0 limit is multivalued in dead zones; refine by extrapolation in
  // eps rather than by trusting the zero-regularization limit pointwise.
  bool richardson_flag = false;
  std::vector<LedgerRow> energy_ledger;  // unsteady runs; row 0 is t = 0
};

// Scalar flux law tau(omega) = g(|omega|/sqrt(2)) * sign(omega) / sqrt(2)
// induced by the fluid's flow curve g. Throws FamilyNotStressExplicit when
// the stress is not a function of the rate.
std::function<double(double)> shear_reduce(const BulkModel& fluid);

// Effective viscosity used by the regularization term and the pressure
// constant: nu_star, or the largest component nu_star for additive mixes,
// falling back to 1 for the frictionless fluid.
double nu_ref(const BulkModel& fluid);

SolveReport steady_solve(const ChannelProblem& prob, const Grid& grid,
                         const ChannelOpts& opts = {});
SolveReport unsteady_solve(const ChannelProblem& prob, const Grid& grid,
                           double dt, const ChannelOpts& opts = {});

struct LedgerCheck {
  bool pass = true;
  int worst_step = 0;       // index into energy_ledger
  double worst_slack = 0;   // most negative scaled slack encountered
};
// Verifies K_{k} - K_{k-1} + dt*diss_k <= dt*work_k + 1e-10*scale per step
// and dissipation >= -1e-12*scale.
LedgerCheck energy_ledger_check(const SolveReport& report);

// Face positions where |u'| crosses `omega_threshold` (linear interpolation
// between face midpoints); used to locate activation interfaces.
std::vector<double> detect_activation_points(const SolveReport& report,
                                             double omega_threshold);

struct ConvergenceStudy {
  std::vector<int> ns;
  std::vector<double> errors;  // infinity-norm nodal errors vs the reference
  std::vector<double> orders;  // log2(errors[k] / errors[k+1])
};
// Runs steady_solve on >= 3 nested grids (each n doubling) and compares the
// nodal profiles against a reference profile y -> u(y).
ConvergenceStudy convergence_study(const ChannelProblem& prob,
                                   const std::vector<int>& ns,
                                   const ChannelOpts& opts,
                                   const std::function<double(double)>& ref);

}  // namespace rheo
