#pragma once

// Closed-form simple-shear solutions for the activated Euler fluid with
// identity activation: whole-space profiles driven by a pressure constant C
// (regularized and limit variants) and flow-rate-normalized channel
// (Poiseuille) solutions with regime classification against the exact
// activation thresholds.

#include <string>
#include <vector>

#include "rheograph/model_io.hpp"
#include "rheograph/models.hpp"

namespace rheo {

// One interval with a quadratic velocity profile u(y) = c0 + c1 y + c2 y^2.
// Whole-space solutions use infinite outer bounds.
struct QuadPiece {
  double y_lo = 0.0;
  double y_hi = 0.0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

enum class ShearKind {
  RegularizedWholeSpace,
  LimitWholeSpace,
  SubthresholdFamily,
  PoiseuilleUnique,
  PoiseuilleFamily
};

// The five boundary-condition blocks of the channel classification.
enum class BcBlock {
  FreeSlipNavierSlip,
  NoSlipNavierSlip,
  FreeSlip,
  NoSlip,
  NavierSlip
};

enum class Branch { Subthreshold, BulkActiveBoundaryStuck, FullyActive };

struct RegimeLabel {
  BcBlock bc_block = BcBlock::NoSlip;
  Branch branch = Branch::Subthreshold;
};

struct ShearSolution {
  ShearKind kind = ShearKind::PoiseuilleUnique;
  std::vector<QuadPiece> u;  // ordered, contiguous intervals
  double C = 0.0;            // pressure constant (p = -2 nu* C x + p0)
  double p0 = 0.0;
  double y0 = 0.0;  // symmetry center (whole-space)
  double u0 = 0.0;  // velocity at the center
  std::vector<double> activation_points;  // where |u'| meets sqrt(2) delta*
  RegimeLabel regime;                     // Poiseuille only
  bool has_regime = false;
  // family descriptor (subthreshold solutions): constraints every member
  // of the solution family satisfies
  double slope_bound = 0.0;  // |u'| <= slope_bound
  double slip_bound = 0.0;   // |u(+-L)| <= slip_bound (inf for free slip)
};

struct PoiseuilleProblem {
  double L = 1.0;
  double Q = 0.0;
  BulkModel fluid;    // identity-activation (regularization must be 0)
  BoundaryModel bc;   // any of the six families
  double nu_star = 1.0;     // mirrored from fluid on validation
  double delta_star = 0.0;  // mirrored from fluid on validation
};

struct Thresholds {
  double Q_low = 0.0;   // activation flux: below it C = 0
  double Q_high = 0.0;  // top of the boundary-stuck band (= Q_low when empty)
};

// Throws UnsupportedFluid unless the fluid is identity-activation (or plain
// NavierStokes, the delta* = 0 member); mirrors nu_star / delta_star.
void validate(PoiseuilleProblem& prob);

// Two-piece regularized whole-space profile: inner parabola with viscosity
// eps* nu* on |y - y0| <= sqrt(2) delta* eps* / (2|C|), activated branch
// outside. Throws DegenerateC when C = 0.
ShearSolution whole_space_regularized(double C, double y0, double u0,
                                      double eps_star, double delta_star,
                                      double nu_star);

// eps* -> 0 limit: kink at y0 with one-sided slopes -+ sqrt(2) delta* sign(C).
ShearSolution whole_space_limit(double C, double y0, double u0,
                                double delta_star, double nu_star);

BcBlock bc_block_of(const BoundaryModel& bc);
Thresholds poiseuille_thresholds(const PoiseuilleProblem& prob);

// The pressure constant of the flux-normalized channel flow, evaluated from
// the closed-form regime branches (ties classify into the active branch,
// where the formula returns exactly 0).
double poiseuille_constant(const PoiseuilleProblem& prob);

// Full solve: unique profile when C != 0; canonical representative plus the
// family constraints when C = 0.
ShearSolution poiseuille_solve(const PoiseuilleProblem& prob);

double eval_profile(const ShearSolution& sol, double y);
double eval_profile_slope(const ShearSolution& sol, double y);

// Exact piecewise-polynomial integral of u over [-L, L]. Throws
// DomainMismatch when the profile does not cover the interval.
double flow_rate(const ShearSolution& sol, double L);

std::string to_string(ShearKind k);
std::string to_string(BcBlock b);
std::string to_string(Branch b);

json to_json(const ShearSolution& sol);

}  // namespace rheo
