#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "rheograph/error.hpp"
#include "rheograph/tensor.hpp"

namespace rheo {

// ---------------------------------------------------------------------------
// Bulk constitutive families.
//
// Each family is a graph of pairs (S, D) — deviatoric stress vs. symmetric
// velocity gradient — reduced by isotropy to a scalar relation between the
// magnitudes s = |S| and d = |D| plus collinearity S ∥ D.  Some families are
// single-valued stress maps S(D), some are single-valued rate maps D(S), and
// some are genuinely multivalued graphs (yield stress dead zones, bounded
// plateaus, rate caps).
// ---------------------------------------------------------------------------

enum class Family {
  Euler,                      // S = O for every D (frictionless)
  RigidOnly,                  // D = O for every S (rigid body)
  NavierStokes,               // S = 2 nu* D
  PowerLaw,                   // S = 2 nu* (|D|/d*)^(r-2) D, r > 1
  GenPowerLaw,                // S = 2 nu* (1/2 + |D|^2/(2 d*^2))^((r-2)/2) D
  StressPowerLaw,             // D = (1/(2 nu*)) (1/2 + |S|^2/(2(2 nu* d*)^2))^((r'-2)/2) S
  AdditiveMix,                // S = sum of component stresses at the same D
  BoundedStress,              // S = 2 nu* D / (1 + (|D|/d*)^a)^(1/a), |S| < 2 nu* d*
  BoundedRate,                // D = S/(2 nu*) / (1 + (|S|/(2 nu* d*))^b)^(1/b), |D| < d*
  Bingham,                    // |S| <= sigma* iff D = O; else S = (sigma* + 2 nu*|D|) D/|D|
  HerschelBulkley,            // as Bingham with post-yield 2 nu* (|D|/d*)^(r-2) |D|
  ActivatedEuler,             // S = 2 nu* (|D|-delta*)+ Sfun(|D|) D/|D| (frictionless below delta*)
  RegularizedActivatedEuler,  // adds 2 nu* eps* D to ActivatedEuler
  RigidFreeFlowLimit,         // D = O while |S| < 2 nu* d*; any rate at |S| = 2 nu* d*
  EulerRigidLimit,            // S = O while |D| < d*/(2 nu*); any stress at the rate cap
};

// Post-activation magnitude factor Sfun(d) of the activated families.
enum class ActivationKind {
  One,              // Sfun = 1
  PowerLaw,         // Sfun = (d/d*)^(r-2), r > 1
  ShiftedPowerLaw,  // Sfun = (A + (d/d*)^2)^((r-2)/2), A > 0, r > 1
  Ladyzhenskaya,    // Sfun = 1 + A (d/d*)^(r-2), A > 0, r > 2
};

struct BulkModel {
  Family family = Family::NavierStokes;
  double nu_star = 1.0;      // viscosity scale, Pa s
  double d_star = 1.0;       // reference shear rate, 1/s
  double r = 2.0;            // rate-side exponent
  double r_prime = 2.0;      // stress-side (dual) exponent, r' = r/(r-1)
  double delta_star = 0.0;   // rate activation threshold, 1/s
  double sigma_star = 0.0;   // yield stress, Pa
  double epsilon_star = 0.0; // regularization viscosity ratio
  double A = 1.0;            // shift / amplitude of the activation factor
  double a_exp = 1.0;        // bounded-stress exponent
  double b_exp = 1.0;        // bounded-rate exponent
  ActivationKind activation_kind = ActivationKind::One;
  std::vector<BulkModel> components;  // AdditiveMix only (flat, >= 2)
};

// Convenience factories (parameters in declaration order of the formulas).
BulkModel make_euler();
BulkModel make_rigid_only();
BulkModel make_navier_stokes(double nu_star);
BulkModel make_power_law(double nu_star, double d_star, double r);
BulkModel make_gen_power_law(double nu_star, double d_star, double r);
BulkModel make_stress_power_law(double nu_star, double d_star, double r_prime);
BulkModel make_bounded_stress(double nu_star, double d_star, double a_exp);
BulkModel make_bounded_rate(double nu_star, double d_star, double b_exp);
BulkModel make_bingham(double nu_star, double sigma_star);
BulkModel make_herschel_bulkley(double nu_star, double d_star, double r,
                                double sigma_star);
BulkModel make_activated_euler(double nu_star, double delta_star,
                               ActivationKind kind = ActivationKind::One,
                               double d_star = 1.0, double r = 2.0,
                               double A = 1.0);
BulkModel make_regularized_activated_euler(
    double nu_star, double delta_star, double epsilon_star,
    ActivationKind kind = ActivationKind::One, double d_star = 1.0,
    double r = 2.0, double A = 1.0);
BulkModel make_additive_mix(std::vector<BulkModel> components);
BulkModel make_rigid_free_flow_limit(double nu_star, double d_star);
BulkModel make_euler_rigid_limit(double nu_star, double d_star);

// Throws Error(InvalidParameters) when a documented invariant is violated.
void validate(const BulkModel& m);

// True when the family has a single-valued stress map S(D) on all rates
// (the graph families and rate-explicit families are excluded).
bool stress_explicit(const BulkModel& m);

// --- Scalar magnitude maps -------------------------------------------------

// s = g(d): stress magnitude on the graph at rate magnitude d >= 0.
// g(0) = 0 always (the zero pair belongs to every graph).  For multivalued
// families this is the canonical single-valued selection: Bingham jumps to
// sigma* + ..., the rigid/free-flow plateau jumps to 2 nu* d*.  Throws
// NotInvertible when the graph has no point at this rate (beyond a rate cap).
double flow_curve(const BulkModel& m, double d);

// d = h(s): rate magnitude on the graph at stress magnitude s >= 0.
// Closed-form where available, bracketing root-find (1e-12 relative in d)
// otherwise.  Throws NotInvertible where the graph is multivalued or empty
// in the rate direction.
double rate_of_stress_mag(const BulkModel& m, double s);

// Least upper bound of on-graph rate magnitudes (+inf when unbounded):
// d* for BoundedRate, d*/(2 nu*) for EulerRigidLimit, 0 for RigidOnly,
// the component-wise minimum for AdditiveMix.
double rate_cap(const BulkModel& m);

// Least upper bound of on-graph stress magnitudes (+inf when unbounded).
double stress_cap(const BulkModel& m);

// Stress magnitude of the dead-zone segment at D = O ([0, cap] is on the
// graph): sigma* for Bingham/HerschelBulkley, 2 nu* d* for RigidFreeFlowLimit,
// +inf for RigidOnly, the component sum for AdditiveMix, 0 otherwise.
double zero_rate_stress_cap(const BulkModel& m);

// Width of the rate interval on which the graph sits at S = O (the
// frictionless dead zone of activated families; +inf for Euler, 0 when the
// stress activates immediately).
double rate_dead_zone(const BulkModel& m);

// nu_g(d) = g(d)/(2d), d > 0.
double generalized_viscosity(const BulkModel& m, double d);

// alpha_g(s) = h(s)/s, s > 0.
double generalized_fluidity(const BulkModel& m, double s);

// --- Tensor operations -----------------------------------------------------

// S = g(|D|) D/|D|; exactly O at D = O (inputs with |D| < 1e-300 count as O).
// Throws FamilyNotStressExplicit for rate-explicit and graph families.
Sym3 stress_of_rate(const BulkModel& m, const Sym3& D);

// D = h(|S|) S/|S|; throws NotInvertible in multivalued directions
// (e.g. the activated dead zone at S = O).
Sym3 rate_of_stress(const BulkModel& m, const Sym3& S);

struct TensorPair {
  Sym3 S;
  Sym3 D;
};

// Distance-like residual, zero iff (S, D) lies on the graph:
//   rigid/free-flow limit:  (|S| - 2 nu* d*)+ + |2 nu* d* D - |D| S|
//   Euler/rigid limit:      (2 nu*|D| - d*)+ + |2 nu*|S| D - d* S|
//   yield families:         |2 nu_g(|D|) D - (|S| - sigma*)+ S/|S||
//   explicit families:      |S - stress_of_rate(D)|
// Defined for every family.
double graph_residual(const BulkModel& m, const Sym3& S, const Sym3& D);
double graph_residual(const BulkModel& m, const TensorPair& pair);

// --- Symbolic zero-shear limits ---------------------------------------------

enum class LimitClass { Zero, Finite, Infinite };

struct LimitValue {
  LimitClass cls = LimitClass::Finite;
  double value = 0.0;  // meaningful only when cls == Finite

  static LimitValue zero() { return {LimitClass::Zero, 0.0}; }
  static LimitValue finite(double v) { return {LimitClass::Finite, v}; }
  static LimitValue infinite() {
    return {LimitClass::Infinite, std::numeric_limits<double>::infinity()};
  }
  bool operator==(const LimitValue& o) const {
    return cls == o.cls && (cls != LimitClass::Finite || value == o.value);
  }
};

std::string to_string(const LimitValue& v);

struct ZeroLimits {
  LimitValue nu0;     // lim d->0+ of nu_g(d) along the graph
  LimitValue alpha0;  // lim s->0+ of alpha_g(s); always the extended 1/(2 nu0)
};

ZeroLimits zero_limits(const BulkModel& m);

// ---------------------------------------------------------------------------
// Boundary constitutive families: graphs between the tangential wall
// traction s and the tangential slip velocity v_tau.
// ---------------------------------------------------------------------------

enum class BoundaryFamily {
  FreeSlip,            // s = 0 (any slip)
  NoSlip,              // v_tau = 0 (any traction)
  NavierSlip,          // s = gamma* v_tau
  NoSlipNavierSlip,    // gamma* v_tau = (|s| - s*)+ s/|s|  (stick-slip)
  FreeSlipNavierSlip,  // s = gamma* (|v_tau| - v*)+ v_tau/|v_tau|
  Combined,            // gamma* (|v|-v*)+ v/|v| = (|s|-s*)+ s/|s|, min(s*,v*)=0
};

struct BoundaryModel {
  BoundaryFamily family = BoundaryFamily::NoSlip;
  double gamma_star = 1.0;  // friction coefficient, Pa s/m
  double s_star = 0.0;      // traction activation threshold, Pa
  double v_star = 0.0;      // slip activation threshold, m/s
};

BoundaryModel make_free_slip();
BoundaryModel make_no_slip();
BoundaryModel make_navier_slip(double gamma_star);
BoundaryModel make_stick_slip(double gamma_star, double s_star);
BoundaryModel make_free_navier_slip(double gamma_star, double v_star);
BoundaryModel make_combined_slip(double gamma_star, double s_star,
                                 double v_star);

void validate(const BoundaryModel& bc);

// s(v): defined for FreeSlip, NavierSlip, FreeSlipNavierSlip; the other
// families are multivalued in this direction (FamilyNotExplicit).
Vec3 traction_of_slip(const BoundaryModel& bc, const Vec3& v_tau);
double traction_of_slip(const BoundaryModel& bc, double v_tau);

// v(s): defined for NavierSlip, NoSlipNavierSlip.
Vec3 slip_of_traction(const BoundaryModel& bc, const Vec3& s);
double slip_of_traction(const BoundaryModel& bc, double s);

// Zero iff (s, v_tau) lies on the boundary graph; defined for all families.
double bc_residual(const BoundaryModel& bc, const Vec3& s, const Vec3& v_tau);
double bc_residual(const BoundaryModel& bc, double s, double v_tau);

// --- Scalar root-finding helper ---------------------------------------------

// Solves f(x) = target for a continuous non-decreasing f with
// f(lo) <= target <= f(hi); bisection to 1e-12 relative (or last-bit) in x.
double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi);

// Enum <-> string (the JSON names).
std::string to_string(Family f);
std::string to_string(ActivationKind k);
std::string to_string(BoundaryFamily f);
Family family_from_string(const std::string& s);
ActivationKind activation_kind_from_string(const std::string& s);
BoundaryFamily boundary_family_from_string(const std::string& s);

}  // namespace rheo
