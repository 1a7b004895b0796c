#include "rheograph/shear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rheograph/tensor.hpp"

namespace rheo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// quadratic in (y - y0) expanded to coefficients in y:
// u = k0 + k1 (y - y0) + k2 (y - y0)^2
QuadPiece shifted_quad(double y_lo, double y_hi, double y0, double k0,
                       double k1, double k2) {
  QuadPiece p;
  p.y_lo = y_lo;
  p.y_hi = y_hi;
  p.c2 = k2;
  p.c1 = k1 - 2.0 * k2 * y0;
  p.c0 = k0 - k1 * y0 + k2 * y0 * y0;
  return p;
}

double wall_slip_cap(const BoundaryModel& bc) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return kInf;
    case BoundaryFamily::FreeSlipNavierSlip:
      return bc.v_star;
    case BoundaryFamily::Combined:
      return bc.v_star;  // zero unless the free-slip-type threshold is set
    default:
      return 0.0;  // stuck walls below activation
  }
}

}  // namespace

ShearSolution whole_space_regularized(double C, double y0, double u0,
                                      double eps_star, double delta_star,
                                      double nu_star) {
  if (!(eps_star > 0.0) || !(nu_star > 0.0) || !(delta_star >= 0.0))
    fail(ErrorCode::InvalidParameters,
         "whole_space_regularized requires eps* > 0, nu* > 0, delta* >= 0");
  if (C == 0.0)
    fail(ErrorCode::DegenerateC,
         "C = 0 selects the subthreshold family, not a unique profile");
  ShearSolution sol;
  sol.kind = ShearKind::RegularizedWholeSpace;
  sol.C = C;
  sol.y0 = y0;
  sol.u0 = u0;
  sol.slope_bound = std::sqrt(2.0) * delta_star;

  double m = sol.slope_bound;
  double sigma = sgn(C);
  double a = eps_star * m / (2.0 * std::abs(C));
  double outer = 1.0 + eps_star;
  double k0_out = u0 + eps_star * m * m / (4.0 * C * outer);

  if (a > 0.0) {
    // outer left, inner parabola, outer right
    sol.u.push_back(shifted_quad(-kInf, y0 - a, y0, k0_out,
                                 m * sigma / outer, -C / outer));
    sol.u.push_back(shifted_quad(y0 - a, y0 + a, y0, u0, 0.0, -C / eps_star));
    sol.u.push_back(shifted_quad(y0 + a, kInf, y0, k0_out,
                                 -m * sigma / outer, -C / outer));
    sol.activation_points = {y0 - a, y0 + a};
  } else {
    sol.u.push_back(shifted_quad(-kInf, kInf, y0, u0, 0.0, -C / outer));
    sol.activation_points = {y0};
  }
  return sol;
}

ShearSolution whole_space_limit(double C, double y0, double u0,
                                double delta_star, double nu_star) {
  if (!(nu_star > 0.0) || !(delta_star >= 0.0))
    fail(ErrorCode::InvalidParameters,
         "whole_space_limit requires nu* > 0, delta* >= 0");
  if (C == 0.0)
    fail(ErrorCode::DegenerateC,
         "C = 0 selects the subthreshold family, not a unique profile");
  ShearSolution sol;
  sol.kind = ShearKind::LimitWholeSpace;
  sol.C = C;
  sol.y0 = y0;
  sol.u0 = u0;
  sol.slope_bound = std::sqrt(2.0) * delta_star;
  double m = sol.slope_bound;
  double sigma = sgn(C);
  if (m > 0.0) {
    sol.u.push_back(shifted_quad(-kInf, y0, y0, u0, m * sigma, -C));
    sol.u.push_back(shifted_quad(y0, kInf, y0, u0, -m * sigma, -C));
  } else {
    sol.u.push_back(shifted_quad(-kInf, kInf, y0, u0, 0.0, -C));
  }
  sol.activation_points = {y0};
  return sol;
}

void validate(PoiseuilleProblem& prob) {
  if (!(prob.L > 0.0) || !std::isfinite(prob.L) || !std::isfinite(prob.Q))
    fail(ErrorCode::InvalidParameters, "channel requires finite Q, L > 0");
  validate(prob.bc);
  validate(prob.fluid);
  const BulkModel& f = prob.fluid;
  bool identity_activation =
      (f.family == Family::NavierStokes) ||
      (f.family == Family::ActivatedEuler &&
       f.activation_kind == ActivationKind::One) ||
      (f.family == Family::RegularizedActivatedEuler &&
       f.activation_kind == ActivationKind::One && f.epsilon_star == 0.0);
  if (!identity_activation)
    fail(ErrorCode::UnsupportedFluid,
         "closed forms exist only for the identity-activation fluid "
         "(unregularized); use the numeric channel solver instead");
  prob.nu_star = f.nu_star;
  prob.delta_star =
      f.family == Family::NavierStokes ? 0.0 : f.delta_star;
}

BcBlock bc_block_of(const BoundaryModel& bc) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return BcBlock::FreeSlip;
    case BoundaryFamily::NoSlip:
      return BcBlock::NoSlip;
    case BoundaryFamily::NavierSlip:
      return BcBlock::NavierSlip;
    case BoundaryFamily::NoSlipNavierSlip:
      return BcBlock::NoSlipNavierSlip;
    case BoundaryFamily::FreeSlipNavierSlip:
      return BcBlock::FreeSlipNavierSlip;
    case BoundaryFamily::Combined:
      if (bc.s_star > 0.0) return BcBlock::NoSlipNavierSlip;
      if (bc.v_star > 0.0) return BcBlock::FreeSlipNavierSlip;
      return BcBlock::NavierSlip;
  }
  fail(ErrorCode::InvalidParameters, "unknown boundary family");
}

Thresholds poiseuille_thresholds(const PoiseuilleProblem& prob) {
  PoiseuilleProblem p = prob;
  validate(p);  // mirrors nu_star / delta_star from the fluid
  double L = p.L;
  double m = std::sqrt(2.0) * p.delta_star;
  BcBlock block = bc_block_of(p.bc);
  Thresholds t;
  switch (block) {
    case BcBlock::FreeSlip:
      t.Q_low = kInf;  // every flux is carried by a frictionless mode
      t.Q_high = kInf;
      return t;
    case BcBlock::FreeSlipNavierSlip:
      t.Q_low = m * L * L + 2.0 * p.bc.v_star * L;
      t.Q_high = t.Q_low;
      return t;
    case BcBlock::NoSlipNavierSlip:
      t.Q_low = m * L * L;
      t.Q_high =
          t.Q_low + 2.0 * p.bc.s_star * L * L / (3.0 * p.nu_star);
      return t;
    case BcBlock::NoSlip:
    case BcBlock::NavierSlip:
      t.Q_low = m * L * L;
      t.Q_high = t.Q_low;
      return t;
  }
  fail(ErrorCode::InvalidParameters, "unknown block");
}

namespace {

RegimeLabel classify(const PoiseuilleProblem& prob, const Thresholds& t) {
  RegimeLabel label;
  label.bc_block = bc_block_of(prob.bc);
  double absQ = std::abs(prob.Q);
  if (label.bc_block == BcBlock::FreeSlip || absQ < t.Q_low)
    label.branch = Branch::Subthreshold;
  else if (label.bc_block == BcBlock::NoSlipNavierSlip && absQ <= t.Q_high)
    label.branch = Branch::BulkActiveBoundaryStuck;
  else
    label.branch = Branch::FullyActive;
  return label;
}

}  // namespace

double poiseuille_constant(const PoiseuilleProblem& prob) {
  PoiseuilleProblem p = prob;
  validate(p);
  double L = p.L, nu = p.nu_star;
  double m = std::sqrt(2.0) * p.delta_star;
  double sigma = sgn(p.Q);
  double absQ = std::abs(p.Q);
  Thresholds t = poiseuille_thresholds(p);
  RegimeLabel label = classify(p, t);
  if (label.branch == Branch::Subthreshold) return 0.0;
  if (label.branch == Branch::BulkActiveBoundaryStuck ||
      label.bc_block == BcBlock::NoSlip)
    return 3.0 * (absQ - m * L * L) / (4.0 * L * L * L) * sigma;
  // fully active with wall slip
  double gamma = p.bc.gamma_star;
  double s_star = label.bc_block == BcBlock::NoSlipNavierSlip ? p.bc.s_star : 0.0;
  double v_star =
      label.bc_block == BcBlock::FreeSlipNavierSlip ? p.bc.v_star : 0.0;
  double num = absQ - m * L * L - 2.0 * v_star * L + 2.0 * s_star * L / gamma;
  double den = (4.0 / 3.0) * L * L * L + 4.0 * nu * L * L / gamma;
  return num / den * sigma;
}

ShearSolution poiseuille_solve(const PoiseuilleProblem& prob) {
  PoiseuilleProblem p = prob;
  validate(p);
  double L = p.L, nu = p.nu_star;
  double m = std::sqrt(2.0) * p.delta_star;
  Thresholds t = poiseuille_thresholds(p);
  RegimeLabel label = classify(p, t);
  double C = poiseuille_constant(p);

  ShearSolution sol;
  sol.C = C;
  sol.y0 = 0.0;
  sol.has_regime = true;
  sol.regime = label;
  sol.slope_bound = m;
  sol.slip_bound = wall_slip_cap(p.bc);

  if (C != 0.0) {
    sol.kind = ShearKind::PoiseuilleUnique;
    double sigma = sgn(C);
    double u_w = 0.0;  // wall velocity
    switch (label.bc_block) {
      case BcBlock::NoSlip:
        u_w = 0.0;
        break;
      case BcBlock::NoSlipNavierSlip:
        u_w = label.branch == Branch::BulkActiveBoundaryStuck
                  ? 0.0
                  : sigma * (2.0 * nu * std::abs(C) * L - p.bc.s_star) /
                        p.bc.gamma_star;
        break;
      case BcBlock::NavierSlip:
        u_w = 2.0 * nu * C * L / p.bc.gamma_star;
        break;
      case BcBlock::FreeSlipNavierSlip:
        u_w = sigma *
              (p.bc.v_star + 2.0 * nu * std::abs(C) * L / p.bc.gamma_star);
        break;
      case BcBlock::FreeSlip:
        break;  // unreachable: free slip never activates
    }
    // u(y) = u_w + sigma m (L - |y|) + C (L^2 - y^2)
    QuadPiece right;
    right.y_lo = 0.0;
    right.y_hi = L;
    right.c0 = u_w + sigma * m * L + C * L * L;
    right.c1 = -sigma * m;
    right.c2 = -C;
    QuadPiece left = right;
    left.y_lo = -L;
    left.y_hi = 0.0;
    left.c1 = -right.c1;
    sol.u = {left, right};
    sol.u0 = right.c0;
    sol.activation_points = {0.0};
    return sol;
  }

  // C = 0: the whole family of subthreshold profiles; build the canonical
  // representative (plug of height min(|Q|/2L, wall cap) plus a tent)
  sol.kind = ShearKind::SubthresholdFamily;
  double sigma = sgn(p.Q);
  double plug = 0.0;
  double cap = sol.slip_bound;
  if (cap > 0.0)
    plug = sigma * std::min(std::abs(p.Q) / (2.0 * L),
                            std::isfinite(cap) ? cap : kInf);
  double tent = (p.Q - 2.0 * L * plug) / (L * L);  // signed tent slope
  QuadPiece right;
  right.y_lo = 0.0;
  right.y_hi = L;
  right.c0 = plug + tent * L;
  right.c1 = -tent;
  right.c2 = 0.0;
  QuadPiece left = right;
  left.y_lo = -L;
  left.y_hi = 0.0;
  left.c1 = -right.c1;
  sol.u = {left, right};
  sol.u0 = right.c0;
  return sol;
}

double eval_profile(const ShearSolution& sol, double y) {
  for (const QuadPiece& p : sol.u)
    if (y >= p.y_lo && y <= p.y_hi) return p.c0 + p.c1 * y + p.c2 * y * y;
  fail(ErrorCode::DomainMismatch, "y outside the profile domain");
}

double eval_profile_slope(const ShearSolution& sol, double y) {
  // at interior breakpoints returns the right-sided slope
  const QuadPiece* hit = nullptr;
  for (const QuadPiece& p : sol.u)
    if (y >= p.y_lo && y <= p.y_hi && (!hit || p.y_lo == y)) hit = &p;
  if (!hit) fail(ErrorCode::DomainMismatch, "y outside the profile domain");
  return hit->c1 + 2.0 * hit->c2 * y;
}

double flow_rate(const ShearSolution& sol, double L) {
  if (sol.u.empty())
    fail(ErrorCode::DomainMismatch, "empty profile");
  double covered_lo = kInf, covered_hi = -kInf;
  double total = 0.0;
  for (const QuadPiece& p : sol.u) {
    covered_lo = std::min(covered_lo, p.y_lo);
    covered_hi = std::max(covered_hi, p.y_hi);
    double a = std::max(p.y_lo, -L);
    double b = std::min(p.y_hi, L);
    if (a >= b) continue;
    auto antider = [&](double y) {
      return p.c0 * y + 0.5 * p.c1 * y * y + p.c2 * y * y * y / 3.0;
    };
    total += antider(b) - antider(a);
  }
  if (covered_lo > -L || covered_hi < L)
    fail(ErrorCode::DomainMismatch, "profile does not cover [-L, L]");
  return total;
}

std::string to_string(ShearKind k) {
  switch (k) {
    case ShearKind::RegularizedWholeSpace: return "RegularizedWholeSpace";
    case ShearKind::LimitWholeSpace: return "LimitWholeSpace";
    case ShearKind::SubthresholdFamily: return "SubthresholdFamily";
    case ShearKind::PoiseuilleUnique: return "PoiseuilleUnique";
    case ShearKind::PoiseuilleFamily: return "PoiseuilleFamily";
  }
  return "?";
}

std::string to_string(BcBlock b) {
  switch (b) {
    case BcBlock::FreeSlipNavierSlip: return "FreeSlipNavierSlip";
    case BcBlock::NoSlipNavierSlip: return "NoSlipNavierSlip";
    case BcBlock::FreeSlip: return "FreeSlip";
    case BcBlock::NoSlip: return "NoSlip";
    case BcBlock::NavierSlip: return "NavierSlip";
  }
  return "?";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Subthreshold: return "Subthreshold";
    case Branch::BulkActiveBoundaryStuck: return "BulkActiveBoundaryStuck";
    case Branch::FullyActive: return "FullyActive";
  }
  return "?";
}

json to_json(const ShearSolution& sol) {
  json j;
  j["kind"] = to_string(sol.kind);
  j["C"] = sol.C;
  j["p0"] = sol.p0;
  j["y0"] = sol.y0;
  j["u0"] = sol.u0;
  json pieces = json::array();
  for (const QuadPiece& p : sol.u) {
    json piece;
    piece["y_lo"] = std::isfinite(p.y_lo) ? json(p.y_lo) : json(nullptr);
    piece["y_hi"] = std::isfinite(p.y_hi) ? json(p.y_hi) : json(nullptr);
    piece["c0"] = p.c0;
    piece["c1"] = p.c1;
    piece["c2"] = p.c2;
    pieces.push_back(piece);
  }
  j["pieces"] = pieces;
  j["activation_points"] = sol.activation_points;
  if (sol.has_regime) {
    j["regime"] = json{{"bc_block", to_string(sol.regime.bc_block)},
                       {"branch", to_string(sol.regime.branch)}};
  }
  if (sol.kind == ShearKind::SubthresholdFamily) {
    j["family_constraints"] =
        json{{"slope_bound", sol.slope_bound},
             {"slip_bound", std::isfinite(sol.slip_bound)
                                ? json(sol.slip_bound)
                                : json(nullptr)}};
  }
  return j;
}

}  // namespace rheo
