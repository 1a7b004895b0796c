#include "rheograph/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rheo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroGuard = 1e-300;  // magnitudes below this count as zero

bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }
bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

// Post-activation magnitude factor Sfun(d), d > 0.
double activation_factor(const BulkModel& m, double d) {
  switch (m.activation_kind) {
    case ActivationKind::One:
      return 1.0;
    case ActivationKind::PowerLaw:
      return std::pow(d / m.d_star, m.r - 2.0);
    case ActivationKind::ShiftedPowerLaw: {
      double x = d / m.d_star;
      return std::pow(m.A + x * x, 0.5 * (m.r - 2.0));
    }
    case ActivationKind::Ladyzhenskaya:
      return 1.0 + m.A * std::pow(d / m.d_star, m.r - 2.0);
  }
  fail(ErrorCode::InvalidParameters, "unknown activation kind");
}

// x / (1 + x^p)^(1/p), stable for large x (tends to 1).
double bounded_ratio(double x, double p) {
  if (x <= 1.0) return x / std::pow(1.0 + std::pow(x, p), 1.0 / p);
  return 1.0 / std::pow(1.0 + std::pow(x, -p), 1.0 / p);
}

// Grows hi from `scale` until f(hi) >= target; throws NotInvertible when the
// map saturates below the target (bounded families).
double expand_upper(const std::function<double(double)>& f, double target,
                    double scale) {
  double hi = std::max(scale, kZeroGuard);
  for (int i = 0; i < 2200; ++i) {
    if (f(hi) >= target) return hi;
    if (hi > 1e290)
      fail(ErrorCode::NotInvertible,
           "magnitude map saturates below the requested value");
    hi *= 2.0;
  }
  fail(ErrorCode::NotInvertible, "bracket expansion failed");
}

}  // namespace

double rate_dead_zone(const BulkModel& m) {
  switch (m.family) {
    case Family::Euler:
      return kInf;
    case Family::ActivatedEuler:
      return m.delta_star;
    case Family::RegularizedActivatedEuler:
      return m.epsilon_star > 0.0 ? 0.0 : m.delta_star;
    case Family::EulerRigidLimit:
      return m.d_star / (2.0 * m.nu_star);
    case Family::AdditiveMix: {
      double w = kInf;
      for (const auto& c : m.components) w = std::min(w, rate_dead_zone(c));
      return w;
    }
    default:
      return 0.0;
  }
}

// --- factories ---------------------------------------------------------------

BulkModel make_euler() {
  BulkModel m;
  m.family = Family::Euler;
  return m;
}
BulkModel make_rigid_only() {
  BulkModel m;
  m.family = Family::RigidOnly;
  return m;
}
BulkModel make_navier_stokes(double nu_star) {
  BulkModel m;
  m.family = Family::NavierStokes;
  m.nu_star = nu_star;
  return m;
}
BulkModel make_power_law(double nu_star, double d_star, double r) {
  BulkModel m;
  m.family = Family::PowerLaw;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.r = r;
  return m;
}
BulkModel make_gen_power_law(double nu_star, double d_star, double r) {
  BulkModel m;
  m.family = Family::GenPowerLaw;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.r = r;
  return m;
}
BulkModel make_stress_power_law(double nu_star, double d_star,
                                double r_prime) {
  BulkModel m;
  m.family = Family::StressPowerLaw;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.r_prime = r_prime;
  return m;
}
BulkModel make_bounded_stress(double nu_star, double d_star, double a_exp) {
  BulkModel m;
  m.family = Family::BoundedStress;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.a_exp = a_exp;
  return m;
}
BulkModel make_bounded_rate(double nu_star, double d_star, double b_exp) {
  BulkModel m;
  m.family = Family::BoundedRate;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.b_exp = b_exp;
  return m;
}
BulkModel make_bingham(double nu_star, double sigma_star) {
  BulkModel m;
  m.family = Family::Bingham;
  m.nu_star = nu_star;
  m.sigma_star = sigma_star;
  return m;
}
BulkModel make_herschel_bulkley(double nu_star, double d_star, double r,
                                double sigma_star) {
  BulkModel m;
  m.family = Family::HerschelBulkley;
  m.nu_star = nu_star;
  m.d_star = d_star;
  m.r = r;
  m.sigma_star = sigma_star;
  return m;
}
BulkModel make_activated_euler(double nu_star, double delta_star,
                               ActivationKind kind, double d_star, double r,
                               double A) {
  BulkModel m;
  m.family = Family::ActivatedEuler;
  m.nu_star = nu_star;
  m.delta_star = delta_star;
  m.activation_kind = kind;
  m.d_star = d_star;
  m.r = r;
  m.A = A;
  return m;
}
BulkModel make_regularized_activated_euler(double nu_star, double delta_star,
                                           double epsilon_star,
                                           ActivationKind kind, double d_star,
                                           double r, double A) {
  BulkModel m = make_activated_euler(nu_star, delta_star, kind, d_star, r, A);
  m.family = Family::RegularizedActivatedEuler;
  m.epsilon_star = epsilon_star;
  return m;
}
BulkModel make_additive_mix(std::vector<BulkModel> components) {
  BulkModel m;
  m.family = Family::AdditiveMix;
  m.components = std::move(components);
  return m;
}
BulkModel make_rigid_free_flow_limit(double nu_star, double d_star) {
  BulkModel m;
  m.family = Family::RigidFreeFlowLimit;
  m.nu_star = nu_star;
  m.d_star = d_star;
  return m;
}
BulkModel make_euler_rigid_limit(double nu_star, double d_star) {
  BulkModel m;
  m.family = Family::EulerRigidLimit;
  m.nu_star = nu_star;
  m.d_star = d_star;
  return m;
}

// --- validation --------------------------------------------------------------

void validate(const BulkModel& m) {
  auto need_nu = [&] {
    if (!finite_pos(m.nu_star))
      fail(ErrorCode::InvalidParameters, "nu_star must be > 0");
  };
  auto need_dstar = [&] {
    if (!finite_pos(m.d_star))
      fail(ErrorCode::InvalidParameters, "d_star must be > 0");
  };
  switch (m.family) {
    case Family::Euler:
    case Family::RigidOnly:
      return;
    case Family::NavierStokes:
      need_nu();
      return;
    case Family::PowerLaw:
      need_nu();
      need_dstar();
      if (!(std::isfinite(m.r) && m.r > 1.0))
        fail(ErrorCode::InvalidParameters, "PowerLaw requires r > 1");
      return;
    case Family::GenPowerLaw:
      need_nu();
      need_dstar();
      if (!(std::isfinite(m.r) && m.r >= 1.0))
        fail(ErrorCode::InvalidParameters,
             "GenPowerLaw requires r >= 1 (monotone magnitude map)");
      return;
    case Family::StressPowerLaw:
      need_nu();
      need_dstar();
      if (!(std::isfinite(m.r_prime) && m.r_prime >= 1.0))
        fail(ErrorCode::InvalidParameters,
             "StressPowerLaw requires r_prime >= 1 (monotone magnitude map)");
      return;
    case Family::BoundedStress:
      need_nu();
      need_dstar();
      if (!finite_pos(m.a_exp))
        fail(ErrorCode::InvalidParameters, "BoundedStress requires a_exp > 0");
      return;
    case Family::BoundedRate:
      need_nu();
      need_dstar();
      if (!finite_pos(m.b_exp))
        fail(ErrorCode::InvalidParameters, "BoundedRate requires b_exp > 0");
      return;
    case Family::Bingham:
      need_nu();
      if (!finite_nonneg(m.sigma_star))
        fail(ErrorCode::InvalidParameters, "Bingham requires sigma_star >= 0");
      return;
    case Family::HerschelBulkley:
      need_nu();
      need_dstar();
      if (!finite_nonneg(m.sigma_star))
        fail(ErrorCode::InvalidParameters,
             "HerschelBulkley requires sigma_star >= 0");
      if (!(std::isfinite(m.r) && m.r > 1.0))
        fail(ErrorCode::InvalidParameters, "HerschelBulkley requires r > 1");
      return;
    case Family::RegularizedActivatedEuler:
      if (!finite_nonneg(m.epsilon_star))
        fail(ErrorCode::InvalidParameters, "epsilon_star must be >= 0");
      [[fallthrough]];
    case Family::ActivatedEuler:
      need_nu();
      if (!finite_nonneg(m.delta_star))
        fail(ErrorCode::InvalidParameters, "delta_star must be >= 0");
      switch (m.activation_kind) {
        case ActivationKind::One:
          break;
        case ActivationKind::PowerLaw:
          need_dstar();
          if (!(std::isfinite(m.r) && m.r > 1.0))
            fail(ErrorCode::InvalidParameters,
                 "PowerLaw activation requires r > 1");
          break;
        case ActivationKind::ShiftedPowerLaw:
          need_dstar();
          if (!finite_pos(m.A))
            fail(ErrorCode::InvalidParameters,
                 "ShiftedPowerLaw activation requires A > 0");
          if (!(std::isfinite(m.r) && m.r > 1.0))
            fail(ErrorCode::InvalidParameters,
                 "ShiftedPowerLaw activation requires r > 1");
          break;
        case ActivationKind::Ladyzhenskaya:
          need_dstar();
          if (!finite_pos(m.A))
            fail(ErrorCode::InvalidParameters,
                 "Ladyzhenskaya activation requires A > 0");
          if (!(std::isfinite(m.r) && m.r > 2.0))
            fail(ErrorCode::InvalidParameters,
                 "Ladyzhenskaya activation requires r > 2");
          break;
      }
      return;
    case Family::AdditiveMix: {
      if (m.components.size() < 2)
        fail(ErrorCode::InvalidParameters,
             "AdditiveMix requires at least 2 components");
      for (const auto& c : m.components) {
        if (c.family == Family::AdditiveMix)
          fail(ErrorCode::InvalidParameters,
               "AdditiveMix components must not be mixtures (flat list)");
        if (c.family == Family::RigidOnly)
          fail(ErrorCode::InvalidParameters,
               "a RigidOnly component would make the whole mixture rigid");
        validate(c);
      }
      return;
    }
    case Family::RigidFreeFlowLimit:
    case Family::EulerRigidLimit:
      need_nu();
      need_dstar();
      return;
  }
  fail(ErrorCode::InvalidParameters, "unknown family");
}

// --- classification helpers ---------------------------------------------------

bool stress_explicit(const BulkModel& m) {
  switch (m.family) {
    case Family::Euler:
    case Family::NavierStokes:
    case Family::PowerLaw:
    case Family::GenPowerLaw:
    case Family::BoundedStress:
    case Family::ActivatedEuler:
    case Family::RegularizedActivatedEuler:
      return true;
    case Family::AdditiveMix:
      // Case (ii): a stress-implicit addend with a strictly increasing rate
      // map is resolved by scalar root-finding, which keeps the total map
      // single-valued; graph-type components (yield/plateau/cap) do not.
      return std::all_of(m.components.begin(), m.components.end(),
                         [](const BulkModel& c) {
                           return stress_explicit(c) ||
                                  c.family == Family::StressPowerLaw ||
                                  c.family == Family::BoundedRate;
                         });
    default:
      return false;
  }
}

double rate_cap(const BulkModel& m) {
  switch (m.family) {
    case Family::RigidOnly:
      return 0.0;
    case Family::BoundedRate:
      return m.d_star;
    case Family::EulerRigidLimit:
      return m.d_star / (2.0 * m.nu_star);
    case Family::StressPowerLaw:
      // strictly below 2: the rate map saturates at sqrt(2) d* when r' = 1
      return m.r_prime > 1.0 ? kInf : std::sqrt(2.0) * m.d_star;
    case Family::GenPowerLaw:
      return kInf;
    case Family::AdditiveMix: {
      double cap = kInf;
      for (const auto& c : m.components) cap = std::min(cap, rate_cap(c));
      return cap;
    }
    default:
      return kInf;
  }
}

double stress_cap(const BulkModel& m) {
  switch (m.family) {
    case Family::Euler:
      return 0.0;
    case Family::BoundedStress:
      return 2.0 * m.nu_star * m.d_star;
    case Family::GenPowerLaw:
      return m.r > 1.0 ? kInf : std::sqrt(2.0) * 2.0 * m.nu_star * m.d_star;
    case Family::AdditiveMix: {
      double cap = 0.0;
      for (const auto& c : m.components) cap += stress_cap(c);
      return cap;
    }
    default:
      return kInf;
  }
}

double zero_rate_stress_cap(const BulkModel& m) {
  switch (m.family) {
    case Family::RigidOnly:
      return kInf;
    case Family::Bingham:
    case Family::HerschelBulkley:
      return m.sigma_star;
    case Family::RigidFreeFlowLimit:
      return 2.0 * m.nu_star * m.d_star;
    case Family::AdditiveMix: {
      double cap = 0.0;
      for (const auto& c : m.components) cap += zero_rate_stress_cap(c);
      return cap;
    }
    default:
      return 0.0;
  }
}

// --- scalar magnitude maps -----------------------------------------------------

double flow_curve(const BulkModel& m, double d) {
  if (!(d >= 0.0))
    fail(ErrorCode::InvalidParameters, "flow_curve requires d >= 0");
  if (d < kZeroGuard) return 0.0;
  switch (m.family) {
    case Family::Euler:
      return 0.0;
    case Family::RigidOnly:
      fail(ErrorCode::NotInvertible,
           "RigidOnly has no on-graph point with a positive rate");
    case Family::NavierStokes:
      return 2.0 * m.nu_star * d;
    case Family::PowerLaw:
      return 2.0 * m.nu_star * std::pow(d / m.d_star, m.r - 2.0) * d;
    case Family::GenPowerLaw: {
      double x = d / m.d_star;
      return 2.0 * m.nu_star * std::pow(0.5 + 0.5 * x * x, 0.5 * (m.r - 2.0)) *
             d;
    }
    case Family::StressPowerLaw: {
      auto h = [&](double s) { return rate_of_stress_mag(m, s); };
      double hi = expand_upper(h, d, 2.0 * m.nu_star * d);
      return invert_increasing(h, d, 0.0, hi);
    }
    case Family::BoundedStress:
      return 2.0 * m.nu_star * m.d_star * bounded_ratio(d / m.d_star, m.a_exp);
    case Family::BoundedRate: {
      double x = d / m.d_star;
      if (x >= 1.0)
        fail(ErrorCode::NotInvertible,
             "BoundedRate has no stress at rates >= d_star");
      return 2.0 * m.nu_star * d /
             std::pow(1.0 - std::pow(x, m.b_exp), 1.0 / m.b_exp);
    }
    case Family::Bingham:
      return m.sigma_star + 2.0 * m.nu_star * d;
    case Family::HerschelBulkley:
      return m.sigma_star +
             2.0 * m.nu_star * std::pow(d / m.d_star, m.r - 2.0) * d;
    case Family::ActivatedEuler: {
      if (d <= m.delta_star) return 0.0;
      return 2.0 * m.nu_star * (d - m.delta_star) * activation_factor(m, d);
    }
    case Family::RegularizedActivatedEuler: {
      double act = d > m.delta_star
                       ? (d - m.delta_star) * activation_factor(m, d)
                       : 0.0;
      return 2.0 * m.nu_star * (m.epsilon_star * d + act);
    }
    case Family::AdditiveMix: {
      double s = 0.0;
      for (const auto& c : m.components) s += flow_curve(c, d);
      return s;
    }
    case Family::RigidFreeFlowLimit:
      return 2.0 * m.nu_star * m.d_star;
    case Family::EulerRigidLimit: {
      if (d > m.d_star / (2.0 * m.nu_star))
        fail(ErrorCode::NotInvertible,
             "EulerRigidLimit has no on-graph point beyond the rate cap");
      return 0.0;
    }
  }
  fail(ErrorCode::InvalidParameters, "unknown family");
}

double rate_of_stress_mag(const BulkModel& m, double s) {
  if (!(s >= 0.0))
    fail(ErrorCode::InvalidParameters, "rate_of_stress requires |S| >= 0");
  if (s < kZeroGuard) {
    switch (m.family) {
      case Family::Euler:
        fail(ErrorCode::NotInvertible,
             "Euler is multivalued at S = O (any rate is frictionless)");
      case Family::EulerRigidLimit:
        fail(ErrorCode::NotInvertible,
             "EulerRigidLimit is multivalued at S = O");
      default:
        if (rate_dead_zone(m) > 0.0)
          fail(ErrorCode::NotInvertible,
               "activated family is multivalued at S = O (dead zone)");
        return 0.0;
    }
  }
  switch (m.family) {
    case Family::Euler:
      fail(ErrorCode::NotInvertible,
           "Euler has no on-graph point with a positive stress");
    case Family::RigidOnly:
      return 0.0;
    case Family::NavierStokes:
      return s / (2.0 * m.nu_star);
    case Family::PowerLaw:
      // exact dual closed form: the magnitude map is d*-scaled monomial
      return m.d_star *
             std::pow(s / (2.0 * m.nu_star * m.d_star), 1.0 / (m.r - 1.0));
    case Family::GenPowerLaw: {
      double cap = stress_cap(m);
      if (s >= cap)
        fail(ErrorCode::NotInvertible,
             "GenPowerLaw r = 1 saturates below this stress");
      auto g = [&](double d) { return flow_curve(m, d); };
      double hi = expand_upper(g, s, s / (2.0 * m.nu_star) + m.d_star);
      return invert_increasing(g, s, 0.0, hi);
    }
    case Family::StressPowerLaw: {
      double x = s / (2.0 * m.nu_star * m.d_star);
      return std::pow(0.5 + 0.5 * x * x, 0.5 * (m.r_prime - 2.0)) * s /
             (2.0 * m.nu_star);
    }
    case Family::BoundedStress: {
      double y = s / (2.0 * m.nu_star * m.d_star);
      if (y >= 1.0)
        fail(ErrorCode::NotInvertible,
             "BoundedStress has no rate at stresses >= 2 nu* d*");
      return s / (2.0 * m.nu_star) /
             std::pow(1.0 - std::pow(y, m.a_exp), 1.0 / m.a_exp);
    }
    case Family::BoundedRate:
      return m.d_star * bounded_ratio(s / (2.0 * m.nu_star * m.d_star), m.b_exp);
    case Family::Bingham:
      if (s <= m.sigma_star) return 0.0;
      return (s - m.sigma_star) / (2.0 * m.nu_star);
    case Family::HerschelBulkley:
      if (s <= m.sigma_star) return 0.0;
      return m.d_star * std::pow((s - m.sigma_star) /
                                     (2.0 * m.nu_star * m.d_star),
                                 1.0 / (m.r - 1.0));
    case Family::ActivatedEuler: {
      if (m.activation_kind == ActivationKind::One)
        return m.delta_star + s / (2.0 * m.nu_star);
      auto g = [&](double d) { return flow_curve(m, d); };
      double hi =
          expand_upper(g, s, m.delta_star + s / (2.0 * m.nu_star) + m.d_star);
      return invert_increasing(g, s, m.delta_star, hi);
    }
    case Family::RegularizedActivatedEuler:
    case Family::AdditiveMix: {
      auto g = [&](double d) { return flow_curve(m, d); };
      double cap = rate_cap(m);
      double scale = s / (2.0 * std::max(m.nu_star, kZeroGuard)) + 1.0;
      double hi;
      if (std::isfinite(cap)) {
        double below = cap * (1.0 - 1e-14);
        if (flow_curve(m, below) < s) {
          // beyond the plateau top: on-graph only via a vertical ray at the cap
          if (stress_cap(m) == kInf) return cap;
          fail(ErrorCode::NotInvertible,
               "mixture magnitude map saturates below this stress");
        }
        hi = below;
      } else {
        hi = expand_upper(g, s, scale);
      }
      double d = invert_increasing(g, s, 0.0, hi);
      // a jump in the selection (yield-type component) means the bisection
      // landed at a discontinuity: the stress then sits on the dead-zone
      // segment (rate 0) or nowhere
      double gd = flow_curve(m, d);
      if (std::abs(gd - s) > 1e-9 * std::max(1.0, s)) {
        if (s <= zero_rate_stress_cap(m)) return 0.0;
        fail(ErrorCode::NotInvertible,
             "stress falls in a jump of the mixture's magnitude map");
      }
      return d;
    }
    case Family::RigidFreeFlowLimit: {
      double plateau = 2.0 * m.nu_star * m.d_star;
      if (s < plateau) return 0.0;
      if (s == plateau)
        fail(ErrorCode::NotInvertible,
             "RigidFreeFlowLimit is multivalued at the plateau stress");
      fail(ErrorCode::NotInvertible,
           "RigidFreeFlowLimit has no on-graph point above the plateau");
    }
    case Family::EulerRigidLimit:
      return m.d_star / (2.0 * m.nu_star);
  }
  fail(ErrorCode::InvalidParameters, "unknown family");
}

double generalized_viscosity(const BulkModel& m, double d) {
  if (!(d > 0.0))
    fail(ErrorCode::InvalidParameters,
         "generalized_viscosity requires d > 0 (use zero_limits at 0)");
  return flow_curve(m, d) / (2.0 * d);
}

double generalized_fluidity(const BulkModel& m, double s) {
  if (!(s > 0.0))
    fail(ErrorCode::InvalidParameters,
         "generalized_fluidity requires s > 0 (use zero_limits at 0)");
  return rate_of_stress_mag(m, s) / s;
}

// --- tensor operations ----------------------------------------------------------

Sym3 stress_of_rate(const BulkModel& m, const Sym3& D) {
  if (!stress_explicit(m))
    fail(ErrorCode::FamilyNotStressExplicit,
         to_string(m.family) +
             " has no single-valued stress map; use rate_of_stress or "
             "graph_residual");
  double d = frob(D);
  if (d < kZeroGuard) return Sym3::Zero();
  return (flow_curve(m, d) / d) * D;
}

Sym3 rate_of_stress(const BulkModel& m, const Sym3& S) {
  double s = frob(S);
  if (s < kZeroGuard) {
    // route through the scalar map so the multivalued cases throw
    rate_of_stress_mag(m, 0.0);
    return Sym3::Zero();
  }
  return (rate_of_stress_mag(m, s) / s) * S;
}

double graph_residual(const BulkModel& m, const Sym3& S, const Sym3& D) {
  double s = frob(S);
  double d = frob(D);
  switch (m.family) {
    case Family::Euler:
      return s;
    case Family::RigidOnly:
      return d;
    case Family::RigidFreeFlowLimit: {
      double plateau = 2.0 * m.nu_star * m.d_star;
      return relu(s - plateau) + frob(plateau * D - d * S);
    }
    case Family::EulerRigidLimit:
      return relu(2.0 * m.nu_star * d - m.d_star) +
             frob(2.0 * m.nu_star * s * D - m.d_star * S);
    case Family::Bingham:
      return frob(2.0 * m.nu_star * D -
                  (s > kZeroGuard ? relu(s - m.sigma_star) / s : 0.0) * S);
    case Family::HerschelBulkley: {
      Sym3 viscous = d < kZeroGuard
                         ? Sym3(Sym3::Zero())
                         : Sym3(2.0 * m.nu_star *
                                std::pow(d / m.d_star, m.r - 2.0) * D);
      return frob(viscous -
                  (s > kZeroGuard ? relu(s - m.sigma_star) / s : 0.0) * S);
    }
    case Family::StressPowerLaw:
    case Family::BoundedRate:
      return frob(D - rate_of_stress(m, S));
    case Family::AdditiveMix: {
      double cap = rate_cap(m);
      if (std::isfinite(cap) && d >= cap) {
        // ray branch at the mixture's rate cap: direction must match and the
        // stress must reach at least the plateau top
        double floor = flow_curve(m, cap * (1.0 - 1e-14));
        return (d - cap) + frob(s * D - d * S) / std::max(d, kZeroGuard) +
               relu(floor - s);
      }
      if (d < kZeroGuard) return relu(s - zero_rate_stress_cap(m));
      return frob(S - (flow_curve(m, d) / d) * D);
    }
    default: {
      if (d < kZeroGuard) return s;
      return frob(S - (flow_curve(m, d) / d) * D);
    }
  }
}

double graph_residual(const BulkModel& m, const TensorPair& pair) {
  return graph_residual(m, pair.S, pair.D);
}

// --- symbolic zero-shear limits ---------------------------------------------------

namespace {

LimitValue nu0_of(const BulkModel& m) {
  switch (m.family) {
    case Family::Euler:
      return LimitValue::zero();
    case Family::RigidOnly:
      return LimitValue::infinite();
    case Family::NavierStokes:
      return LimitValue::finite(m.nu_star);
    case Family::PowerLaw:
      if (m.r < 2.0) return LimitValue::infinite();
      if (m.r == 2.0) return LimitValue::finite(m.nu_star);
      return LimitValue::zero();
    case Family::GenPowerLaw:
      return LimitValue::finite(m.nu_star * std::pow(0.5, 0.5 * (m.r - 2.0)));
    case Family::StressPowerLaw:
      return LimitValue::finite(m.nu_star *
                                std::pow(2.0, 0.5 * (m.r_prime - 2.0)));
    case Family::BoundedStress:
    case Family::BoundedRate:
      return LimitValue::finite(m.nu_star);
    case Family::Bingham:
      if (m.sigma_star > 0.0) return LimitValue::infinite();
      return LimitValue::finite(m.nu_star);
    case Family::HerschelBulkley: {
      if (m.sigma_star > 0.0) return LimitValue::infinite();
      BulkModel p = make_power_law(m.nu_star, m.d_star, m.r);
      return nu0_of(p);
    }
    case Family::ActivatedEuler: {
      if (m.delta_star > 0.0) return LimitValue::zero();
      switch (m.activation_kind) {
        case ActivationKind::One:
          return LimitValue::finite(m.nu_star);
        case ActivationKind::PowerLaw: {
          BulkModel p = make_power_law(m.nu_star, m.d_star, m.r);
          return nu0_of(p);
        }
        case ActivationKind::ShiftedPowerLaw:
          return LimitValue::finite(m.nu_star *
                                    std::pow(m.A, 0.5 * (m.r - 2.0)));
        case ActivationKind::Ladyzhenskaya:
          // r > 2, so the power contribution vanishes at the origin
          return LimitValue::finite(m.nu_star);
      }
      fail(ErrorCode::InvalidParameters, "unknown activation kind");
    }
    case Family::RegularizedActivatedEuler: {
      BulkModel ae = m;
      ae.family = Family::ActivatedEuler;
      LimitValue base = nu0_of(ae);
      double reg = m.epsilon_star * m.nu_star;
      switch (base.cls) {
        case LimitClass::Zero:
          return reg > 0.0 ? LimitValue::finite(reg) : LimitValue::zero();
        case LimitClass::Finite:
          return LimitValue::finite(base.value + reg);
        case LimitClass::Infinite:
          return LimitValue::infinite();
      }
      fail(ErrorCode::InvalidParameters, "unreachable");
    }
    case Family::AdditiveMix: {
      bool infinite = false;
      double sum = 0.0;
      bool any_finite = false;
      for (const auto& c : m.components) {
        LimitValue v = nu0_of(c);
        if (v.cls == LimitClass::Infinite) infinite = true;
        if (v.cls == LimitClass::Finite) {
          sum += v.value;
          any_finite = true;
        }
      }
      if (infinite) return LimitValue::infinite();
      if (any_finite) return LimitValue::finite(sum);
      return LimitValue::zero();
    }
    case Family::RigidFreeFlowLimit:
      return LimitValue::infinite();
    case Family::EulerRigidLimit:
      return LimitValue::zero();
  }
  fail(ErrorCode::InvalidParameters, "unknown family");
}

}  // namespace

ZeroLimits zero_limits(const BulkModel& m) {
  LimitValue nu0 = nu0_of(m);
  LimitValue alpha0;  // extended inverse: alpha0 = 1/(2 nu0)
  switch (nu0.cls) {
    case LimitClass::Zero:
      alpha0 = LimitValue::infinite();
      break;
    case LimitClass::Finite:
      alpha0 = LimitValue::finite(1.0 / (2.0 * nu0.value));
      break;
    case LimitClass::Infinite:
      alpha0 = LimitValue::zero();
      break;
  }
  return {nu0, alpha0};
}

std::string to_string(const LimitValue& v) {
  switch (v.cls) {
    case LimitClass::Zero:
      return "0";
    case LimitClass::Infinite:
      return "inf";
    case LimitClass::Finite: {
      std::ostringstream os;
      os.precision(17);
      os << v.value;
      return os.str();
    }
  }
  return "?";
}

// --- boundary graphs -----------------------------------------------------------

BoundaryModel make_free_slip() { return {BoundaryFamily::FreeSlip, 0, 0, 0}; }
BoundaryModel make_no_slip() { return {BoundaryFamily::NoSlip, 0, 0, 0}; }
BoundaryModel make_navier_slip(double gamma_star) {
  return {BoundaryFamily::NavierSlip, gamma_star, 0, 0};
}
BoundaryModel make_stick_slip(double gamma_star, double s_star) {
  return {BoundaryFamily::NoSlipNavierSlip, gamma_star, s_star, 0};
}
BoundaryModel make_free_navier_slip(double gamma_star, double v_star) {
  return {BoundaryFamily::FreeSlipNavierSlip, gamma_star, 0, v_star};
}
BoundaryModel make_combined_slip(double gamma_star, double s_star,
                                 double v_star) {
  return {BoundaryFamily::Combined, gamma_star, s_star, v_star};
}

void validate(const BoundaryModel& bc) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
    case BoundaryFamily::NoSlip:
      return;
    case BoundaryFamily::NavierSlip:
    case BoundaryFamily::NoSlipNavierSlip:
    case BoundaryFamily::FreeSlipNavierSlip:
    case BoundaryFamily::Combined:
      if (!finite_pos(bc.gamma_star))
        fail(ErrorCode::InvalidParameters,
             "slip families require gamma_star > 0");
      if (!finite_nonneg(bc.s_star) || !finite_nonneg(bc.v_star))
        fail(ErrorCode::InvalidParameters,
             "thresholds s_star, v_star must be >= 0");
      if (bc.family == BoundaryFamily::NoSlipNavierSlip && bc.v_star != 0.0)
        fail(ErrorCode::InvalidParameters,
             "NoSlipNavierSlip requires v_star = 0");
      if (bc.family == BoundaryFamily::FreeSlipNavierSlip && bc.s_star != 0.0)
        fail(ErrorCode::InvalidParameters,
             "FreeSlipNavierSlip requires s_star = 0");
      if (bc.family == BoundaryFamily::Combined &&
          std::min(bc.s_star, bc.v_star) != 0.0)
        fail(ErrorCode::InvalidParameters,
             "Combined requires at least one of s_star, v_star to be 0");
      return;
  }
  fail(ErrorCode::InvalidParameters, "unknown boundary family");
}

double traction_of_slip(const BoundaryModel& bc, double v_tau) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return 0.0;
    case BoundaryFamily::NavierSlip:
      return bc.gamma_star * v_tau;
    case BoundaryFamily::FreeSlipNavierSlip:
      return bc.gamma_star * relu(std::abs(v_tau) - bc.v_star) * sgn(v_tau);
    default:
      fail(ErrorCode::FamilyNotExplicit,
           to_string(bc.family) + " traction is multivalued in the slip");
  }
}

Vec3 traction_of_slip(const BoundaryModel& bc, const Vec3& v_tau) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return Vec3::Zero();
    case BoundaryFamily::NavierSlip:
      return bc.gamma_star * v_tau;
    case BoundaryFamily::FreeSlipNavierSlip: {
      double v = v_tau.norm();
      if (v < kZeroGuard) return Vec3::Zero();
      return (bc.gamma_star * relu(v - bc.v_star) / v) * v_tau;
    }
    default:
      fail(ErrorCode::FamilyNotExplicit,
           to_string(bc.family) + " traction is multivalued in the slip");
  }
}

double slip_of_traction(const BoundaryModel& bc, double s) {
  switch (bc.family) {
    case BoundaryFamily::NavierSlip:
      return s / bc.gamma_star;
    case BoundaryFamily::NoSlipNavierSlip:
      return relu(std::abs(s) - bc.s_star) * sgn(s) / bc.gamma_star;
    default:
      fail(ErrorCode::FamilyNotExplicit,
           to_string(bc.family) + " slip is multivalued in the traction");
  }
}

Vec3 slip_of_traction(const BoundaryModel& bc, const Vec3& s) {
  switch (bc.family) {
    case BoundaryFamily::NavierSlip:
      return s / bc.gamma_star;
    case BoundaryFamily::NoSlipNavierSlip: {
      double sn = s.norm();
      if (sn < kZeroGuard) return Vec3::Zero();
      return (relu(sn - bc.s_star) / (bc.gamma_star * sn)) * s;
    }
    default:
      fail(ErrorCode::FamilyNotExplicit,
           to_string(bc.family) + " slip is multivalued in the traction");
  }
}

double bc_residual(const BoundaryModel& bc, double s, double v_tau) {
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return std::abs(s);
    case BoundaryFamily::NoSlip:
      return std::abs(v_tau);
    case BoundaryFamily::NavierSlip:
      return std::abs(s - bc.gamma_star * v_tau);
    case BoundaryFamily::NoSlipNavierSlip:
      return std::abs(bc.gamma_star * v_tau -
                      relu(std::abs(s) - bc.s_star) * sgn(s));
    case BoundaryFamily::FreeSlipNavierSlip:
      return std::abs(s - bc.gamma_star * relu(std::abs(v_tau) - bc.v_star) *
                              sgn(v_tau));
    case BoundaryFamily::Combined:
      return std::abs(bc.gamma_star * relu(std::abs(v_tau) - bc.v_star) *
                          sgn(v_tau) -
                      relu(std::abs(s) - bc.s_star) * sgn(s));
  }
  fail(ErrorCode::InvalidParameters, "unknown boundary family");
}

double bc_residual(const BoundaryModel& bc, const Vec3& s, const Vec3& v_tau) {
  double sn = s.norm();
  double vn = v_tau.norm();
  Vec3 shat = sn < kZeroGuard ? Vec3(Vec3::Zero()) : Vec3(s / sn);
  Vec3 vhat = vn < kZeroGuard ? Vec3(Vec3::Zero()) : Vec3(v_tau / vn);
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return sn;
    case BoundaryFamily::NoSlip:
      return vn;
    case BoundaryFamily::NavierSlip:
      return (s - bc.gamma_star * v_tau).norm();
    case BoundaryFamily::NoSlipNavierSlip:
      return (bc.gamma_star * v_tau - relu(sn - bc.s_star) * shat).norm();
    case BoundaryFamily::FreeSlipNavierSlip:
      return (s - bc.gamma_star * relu(vn - bc.v_star) * vhat).norm();
    case BoundaryFamily::Combined:
      return (bc.gamma_star * relu(vn - bc.v_star) * vhat -
              relu(sn - bc.s_star) * shat)
          .norm();
  }
  fail(ErrorCode::InvalidParameters, "unknown boundary family");
}

// --- root finding -----------------------------------------------------------------

double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > target || fhi < target)
    fail(ErrorCode::NotInvertible, "target outside the bracketed range");
  if (flo == target) return lo;
  if (fhi == target) return hi;
  for (int i = 0; i < 300; ++i) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // representable numbers exhausted
    double fm = f(mid);
    if (fm < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-13 * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// --- enum names -------------------------------------------------------------------

std::string to_string(Family f) {
  switch (f) {
    case Family::Euler: return "Euler";
    case Family::RigidOnly: return "RigidOnly";
    case Family::NavierStokes: return "NavierStokes";
    case Family::PowerLaw: return "PowerLaw";
    case Family::GenPowerLaw: return "GenPowerLaw";
    case Family::StressPowerLaw: return "StressPowerLaw";
    case Family::AdditiveMix: return "AdditiveMix";
    case Family::BoundedStress: return "BoundedStress";
    case Family::BoundedRate: return "BoundedRate";
    case Family::Bingham: return "Bingham";
    case Family::HerschelBulkley: return "HerschelBulkley";
    case Family::ActivatedEuler: return "ActivatedEuler";
    case Family::RegularizedActivatedEuler: return "RegularizedActivatedEuler";
    case Family::RigidFreeFlowLimit: return "RigidFreeFlowLimit";
    case Family::EulerRigidLimit: return "EulerRigidLimit";
  }
  return "?";
}

std::string to_string(ActivationKind k) {
  switch (k) {
    case ActivationKind::One: return "One";
    case ActivationKind::PowerLaw: return "PowerLaw";
    case ActivationKind::ShiftedPowerLaw: return "ShiftedPowerLaw";
    case ActivationKind::Ladyzhenskaya: return "Ladyzhenskaya";
  }
  return "?";
}

std::string to_string(BoundaryFamily f) {
  switch (f) {
    case BoundaryFamily::FreeSlip: return "FreeSlip";
    case BoundaryFamily::NoSlip: return "NoSlip";
    case BoundaryFamily::NavierSlip: return "NavierSlip";
    case BoundaryFamily::NoSlipNavierSlip: return "NoSlipNavierSlip";
    case BoundaryFamily::FreeSlipNavierSlip: return "FreeSlipNavierSlip";
    case BoundaryFamily::Combined: return "Combined";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  static const std::vector<Family> all = {
      Family::Euler,           Family::RigidOnly,
      Family::NavierStokes,    Family::PowerLaw,
      Family::GenPowerLaw,     Family::StressPowerLaw,
      Family::AdditiveMix,     Family::BoundedStress,
      Family::BoundedRate,     Family::Bingham,
      Family::HerschelBulkley, Family::ActivatedEuler,
      Family::RegularizedActivatedEuler, Family::RigidFreeFlowLimit,
      Family::EulerRigidLimit};
  for (Family f : all)
    if (to_string(f) == s) return f;
  fail(ErrorCode::InvalidConfig, "unknown family name: " + s);
}

ActivationKind activation_kind_from_string(const std::string& s) {
  for (ActivationKind k :
       {ActivationKind::One, ActivationKind::PowerLaw,
        ActivationKind::ShiftedPowerLaw, ActivationKind::Ladyzhenskaya})
    if (to_string(k) == s) return k;
  fail(ErrorCode::InvalidConfig, "unknown activation kind: " + s);
}

BoundaryFamily boundary_family_from_string(const std::string& s) {
  for (BoundaryFamily f :
       {BoundaryFamily::FreeSlip, BoundaryFamily::NoSlip,
        BoundaryFamily::NavierSlip, BoundaryFamily::NoSlipNavierSlip,
        BoundaryFamily::FreeSlipNavierSlip, BoundaryFamily::Combined})
    if (to_string(f) == s) return f;
  fail(ErrorCode::InvalidConfig, "unknown boundary family name: " + s);
}

}  // namespace rheo
