#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rheograph/model_io.hpp"
#include "rheograph/models.hpp"
#include "rheograph/rng.hpp"
#include "rheograph/tensor.hpp"

using namespace rheo;

namespace {

bool close(double x, double ref, double rel) {
  return std::abs(x - ref) <= rel * std::max(1.0, std::abs(ref));
}

// expected error code from a call
template <typename F>
bool throws_code(F&& f, ErrorCode code) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("flow curves match independently computed reference values") {
  // closed forms: tight tolerance
  CHECK(close(flow_curve(make_navier_stokes(1.25), 2.0), 5.0, 1e-15));
  CHECK(close(flow_curve(make_power_law(1.2, 0.7, 1.5), 2.0),
              2.8397182958878157, 1e-14));
  CHECK(close(flow_curve(make_gen_power_law(1.2, 0.7, 1.5), 2.0),
              3.2808484595790227, 1e-14));
  CHECK(close(flow_curve(make_bounded_stress(1.0, 1.0, 4.0), 3.0),
              1.993874353788241, 1e-14));
  CHECK(close(flow_curve(make_bounded_stress(1.0, 1.0, 1.0), 3.0), 1.5,
              1e-15));
  CHECK(close(flow_curve(make_bingham(1.0, 1.5), 2.0), 5.5, 1e-15));
  CHECK(close(flow_curve(make_herschel_bulkley(1.0, 1.0, 1.5, 1.0), 4.0), 5.0,
              1e-14));
  CHECK(close(flow_curve(make_herschel_bulkley(1.0, 1.0, 2.0, 1.0), 3.0), 7.0,
              1e-15));
  CHECK(close(flow_curve(make_activated_euler(1.0, 1.0), 2.0), 2.0, 1e-15));
  CHECK(close(flow_curve(make_activated_euler(1.0, 0.5, ActivationKind::PowerLaw,
                                              1.0, 2.5),
                         2.0),
              4.2426406871192851, 1e-14));
  CHECK(close(
      flow_curve(make_activated_euler(1.0, 0.5, ActivationKind::ShiftedPowerLaw,
                                      1.0, 3.0, 2.0),
                 2.0),
      7.3484692283495343, 1e-14));
  CHECK(close(
      flow_curve(make_activated_euler(1.0, 0.5, ActivationKind::Ladyzhenskaya,
                                      1.0, 2.5, 0.5),
                 2.0),
      5.1213203435596426, 1e-14));
  CHECK(close(
      flow_curve(make_regularized_activated_euler(1.0, 1.0, 0.1), 2.0), 2.4,
      1e-15));
  CHECK(close(flow_curve(make_rigid_free_flow_limit(1.5, 2.0), 1.0), 6.0,
              1e-15));
  CHECK(close(flow_curve(make_rigid_free_flow_limit(1.5, 2.0), 0.25), 6.0,
              1e-15));

  // additive mixtures: (i) two rate-explicit branches, (ii) one implicit
  BulkModel mix_i = make_additive_mix(
      {make_power_law(1.0, 1.0, 1.5), make_gen_power_law(1.0, 1.0, 2.5)});
  CHECK(close(flow_curve(mix_i, 2.0), 7.8581608434779317, 1e-14));
  BulkModel mix_ii = make_additive_mix(
      {make_navier_stokes(1.0), make_stress_power_law(1.0, 1.0, 3.0)});
  CHECK(close(flow_curve(mix_ii, 2.0), 7.0804423859368085, 1e-11));

  // every family returns exactly zero at zero rate (when defined there)
  for (const BulkModel& m :
       {make_euler(), make_navier_stokes(1.0), make_power_law(1, 1, 1.5),
        make_gen_power_law(1, 1, 1.5), make_stress_power_law(1, 1, 3),
        make_bounded_stress(1, 1, 2), make_bounded_rate(1, 1, 2),
        make_bingham(1, 1), make_herschel_bulkley(1, 1, 1.5, 1),
        make_activated_euler(1, 0.5), make_regularized_activated_euler(1, 0.5, 0.1),
        mix_i, make_rigid_free_flow_limit(1, 1), make_euler_rigid_limit(1, 1),
        make_rigid_only()})
    CHECK(flow_curve(m, 0.0) == 0.0);
}

TEST_CASE("rate-of-stress maps match reference values and duals") {
  CHECK(close(rate_of_stress_mag(make_power_law(1.2, 0.7, 1.5), 3.0),
              2.2321428571428571, 1e-14));
  CHECK(close(rate_of_stress_mag(make_stress_power_law(1.2, 0.7, 3.0), 2.0),
              0.9161425698900949, 1e-14));
  CHECK(close(rate_of_stress_mag(make_bounded_stress(1.0, 1.0, 1.0), 1.5), 3.0,
              1e-14));
  CHECK(close(rate_of_stress_mag(make_bounded_rate(1.0, 1.0, 1.0), 4.0),
              0.66666666666666667, 1e-14));
  CHECK(close(rate_of_stress_mag(make_bingham(1.0, 1.5), 4.0), 1.25, 1e-15));
  CHECK(rate_of_stress_mag(make_bingham(1.0, 1.5), 1.5) == 0.0);
  CHECK(close(rate_of_stress_mag(make_herschel_bulkley(1.0, 1.0, 1.5, 1.0), 5.0),
              4.0, 1e-14));
  CHECK(close(rate_of_stress_mag(make_euler_rigid_limit(1.5, 2.0), 7.0),
              0.66666666666666667, 1e-15));
  CHECK(rate_of_stress_mag(make_rigid_free_flow_limit(1.5, 2.0), 5.9) == 0.0);
  // activated Euler with identity activation has the exact shifted-line dual
  CHECK(close(rate_of_stress_mag(make_activated_euler(2.0, 0.75), 3.0),
              0.75 + 3.0 / 4.0, 1e-15));
}

TEST_CASE("forward/inverse maps are mutually inverse on smooth families") {
  Rng rng(2024);
  for (const BulkModel& m :
       {make_navier_stokes(0.8), make_power_law(1.1, 0.9, 2.7),
        make_gen_power_law(1.1, 0.9, 1.4), make_bounded_stress(1.0, 2.0, 3.0),
        make_activated_euler(1.0, 0.4),
        make_activated_euler(1.0, 0.4, ActivationKind::ShiftedPowerLaw, 1.0,
                             2.6, 1.3),
        make_regularized_activated_euler(1.0, 0.4, 0.2),
        make_additive_mix({make_navier_stokes(1.0),
                           make_stress_power_law(1.0, 1.0, 3.0)})}) {
    double cap = stress_cap(m);
    for (int i = 0; i < 25; ++i) {
      double d = rng.log_uniform(1e-5, 1e5);
      double s = flow_curve(m, d);
      if (s <= 0.0) continue;  // dead zone
      // skip near-saturated stresses: inverting there is ill-conditioned
      if (std::isfinite(cap) && s > 0.999999 * cap) continue;
      CHECK(close(rate_of_stress_mag(m, s), d, 1e-10));
    }
  }
}

TEST_CASE("evaluability: stress-implicit families refuse the forward map") {
  Sym3 D = Sym3::Zero();
  D(0, 1) = D(1, 0) = 1.0;
  for (const BulkModel& m :
       {make_stress_power_law(1, 1, 3), make_bounded_rate(1, 1, 2),
        make_bingham(1, 1), make_herschel_bulkley(1, 1, 1.5, 1),
        make_rigid_only(), make_rigid_free_flow_limit(1, 1),
        make_euler_rigid_limit(1, 1),
        make_additive_mix({make_navier_stokes(1.0), make_bingham(1.0, 1.0)})})
    CHECK(throws_code([&] { stress_of_rate(m, D); },
                      ErrorCode::FamilyNotStressExplicit));

  // stress-explicit families return the exact zero tensor at D = O
  for (const BulkModel& m :
       {make_euler(), make_navier_stokes(1.0), make_power_law(1, 1, 1.5),
        make_gen_power_law(1, 1, 3.0), make_bounded_stress(1, 1, 2),
        make_activated_euler(1, 0.5),
        make_regularized_activated_euler(1, 0.5, 0.1)}) {
    Sym3 S = stress_of_rate(m, Sym3::Zero());
    CHECK(S.norm() == 0.0);
  }
}

TEST_CASE("inverse map failure modes") {
  CHECK(throws_code([] { rate_of_stress_mag(make_euler(), 1.0); },
                    ErrorCode::NotInvertible));
  CHECK(throws_code([] { rate_of_stress_mag(make_euler(), 0.0); },
                    ErrorCode::NotInvertible));
  CHECK(rate_of_stress_mag(make_rigid_only(), 123.0) == 0.0);
  // dead zone makes the inverse multivalued at the origin
  CHECK(throws_code([] { rate_of_stress_mag(make_activated_euler(1, 0.5), 0.0); },
                    ErrorCode::NotInvertible));
  CHECK(rate_of_stress_mag(make_regularized_activated_euler(1, 0.5, 0.1), 0.0) ==
        0.0);
  // bounded stress: no rate at or above the supremum 2 nu* d*
  CHECK(throws_code([] { rate_of_stress_mag(make_bounded_stress(1, 1, 2), 2.0); },
                    ErrorCode::NotInvertible));
  CHECK(throws_code([] { rate_of_stress_mag(make_bounded_stress(1, 1, 2), 5.0); },
                    ErrorCode::NotInvertible));
  // bounded rate: no stress at or above the rate cap
  CHECK(throws_code([] { flow_curve(make_bounded_rate(1, 1, 2), 1.0); },
                    ErrorCode::NotInvertible));
  // plateau graph: multivalued at the plateau stress, empty above it
  CHECK(throws_code([] { rate_of_stress_mag(make_rigid_free_flow_limit(1.5, 2), 6.0); },
                    ErrorCode::NotInvertible));
  CHECK(throws_code([] { rate_of_stress_mag(make_rigid_free_flow_limit(1.5, 2), 7.0); },
                    ErrorCode::NotInvertible));
  // rate-cap graph: multivalued at S = O, empty beyond the cap
  CHECK(throws_code([] { rate_of_stress_mag(make_euler_rigid_limit(1.5, 2), 0.0); },
                    ErrorCode::NotInvertible));
  CHECK(throws_code([] { flow_curve(make_euler_rigid_limit(1.5, 2), 0.7); },
                    ErrorCode::NotInvertible));
  CHECK(flow_curve(make_euler_rigid_limit(1.5, 2), 0.5) == 0.0);
  // the GenPowerLaw r = 1 curve saturates at sqrt(2) * 2 nu* d*
  BulkModel gpl1 = make_gen_power_law(1.0, 1.0, 1.0);
  CHECK(close(stress_cap(gpl1), std::sqrt(2.0) * 2.0, 1e-15));
  CHECK(throws_code([&] { rate_of_stress_mag(gpl1, 3.0); },
                    ErrorCode::NotInvertible));
  double d = rate_of_stress_mag(gpl1, 2.0);
  CHECK(close(flow_curve(gpl1, d), 2.0, 1e-11));
}

TEST_CASE("graph residual vanishes on-graph and detects violations") {
  Rng rng(77);
  auto D_of = [&](double mag) { return Sym3((mag * random_direction(rng)).eval()); };

  for (const BulkModel& m :
       {make_navier_stokes(1.5), make_power_law(1, 1, 2.5),
        make_bingham(1.0, 2.0), make_herschel_bulkley(1, 1, 1.5, 1),
        make_activated_euler(1, 0.5), make_stress_power_law(1, 1, 3),
        make_bounded_rate(1, 1, 2)}) {
    for (int i = 0; i < 10; ++i) {
      double mag = rng.log_uniform(1e-3, 1e3);
      if (m.family == Family::BoundedRate && mag >= 0.99) mag = 0.5 * mag / 1e3;
      Sym3 D = D_of(mag);
      double s = flow_curve(m, frob(D));
      Sym3 S = frob(D) > 0 ? Sym3((s / frob(D)) * D) : Sym3(Sym3::Zero());
      CHECK(graph_residual(m, S, D) <= 1e-12 * std::max(1.0, s));
      // perturb the stress off-graph
      Sym3 Sbad = S + D_of(0.3 * (s + 1.0));
      CHECK(graph_residual(m, Sbad, D) > 1e-8);
    }
  }

  // dead zones: (O, S) with |S| under the activation threshold is on-graph
  CHECK(graph_residual(make_bingham(1.0, 2.0), D_of(1.5), Sym3::Zero()) == 0.0);
  CHECK(graph_residual(make_bingham(1.0, 2.0), D_of(2.5), Sym3::Zero()) > 0.4);
  CHECK(graph_residual(make_activated_euler(1, 0.5), Sym3::Zero(), D_of(0.4)) ==
        0.0);

  // plateau graph: segment, plateau, and above-plateau violation
  BulkModel rff = make_rigid_free_flow_limit(1.5, 2.0);
  CHECK(graph_residual(rff, D_of(5.9), Sym3::Zero()) == 0.0);
  Sym3 dir = random_direction(rng);
  CHECK(graph_residual(rff, Sym3((6.0 * dir).eval()), Sym3((0.7 * dir).eval())) <=
        1e-12);
  CHECK(graph_residual(rff, Sym3((6.5 * dir).eval()), Sym3((0.7 * dir).eval())) >
        0.3);

  // rate-cap graph: on the vertical ray and beyond the cap
  BulkModel erl = make_euler_rigid_limit(1.5, 2.0);
  double cap = 2.0 / 3.0;
  CHECK(graph_residual(erl, Sym3((3.0 * dir).eval()), Sym3((cap * dir).eval())) <=
        1e-12);
  CHECK(graph_residual(erl, Sym3::Zero(), D_of(0.5)) == 0.0);
  CHECK(graph_residual(erl, Sym3::Zero(), D_of(0.8)) > 0.1);

  CHECK(graph_residual(make_euler(), D_of(2.0), D_of(1.0)) > 1.0);
  CHECK(graph_residual(make_euler(), Sym3::Zero(), D_of(1.0)) == 0.0);
  CHECK(graph_residual(make_rigid_only(), D_of(2.0), Sym3::Zero()) == 0.0);
}

TEST_CASE("limit-graph residual is continuous approaching the dead zone") {
  Rng rng(5);
  Sym3 dir = random_direction(rng);
  BulkModel rff = make_rigid_free_flow_limit(1.0, 1.0);
  // S fixed on the segment boundary, D shrinking to O: residual -> value at O
  double at_zero = graph_residual(rff, Sym3((2.0 * dir).eval()), Sym3::Zero());
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    double r = graph_residual(rff, Sym3((2.0 * dir).eval()),
                              Sym3((eps * dir).eval()));
    CHECK(std::abs(r - at_zero) <= 10 * eps);
  }
  BulkModel erl = make_euler_rigid_limit(1.0, 1.0);
  double cap = 0.5;
  double base = graph_residual(erl, Sym3((3.0 * dir).eval()),
                               Sym3((cap * dir).eval()));
  CHECK(base <= 1e-12);
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    double r = graph_residual(erl, Sym3((3.0 * dir).eval()),
                              Sym3(((cap - eps) * dir).eval()));
    CHECK(r <= 10 * eps * (1.0 + 3.0));
  }
}

TEST_CASE("zero-shear limits follow the symbolic classification") {
  auto nu0 = [](const BulkModel& m) { return zero_limits(m).nu0; };
  CHECK(nu0(make_euler()) == LimitValue::zero());
  CHECK(nu0(make_rigid_only()) == LimitValue::infinite());
  CHECK(nu0(make_navier_stokes(1.25)) == LimitValue::finite(1.25));
  CHECK(nu0(make_power_law(1, 1, 1.5)) == LimitValue::infinite());
  CHECK(nu0(make_power_law(1.3, 1, 2.0)) == LimitValue::finite(1.3));
  CHECK(nu0(make_power_law(1, 1, 3.0)) == LimitValue::zero());
  CHECK(nu0(make_gen_power_law(1.2, 0.7, 1.5)) ==
        LimitValue::finite(1.2 * std::pow(0.5, -0.25)));
  CHECK(nu0(make_stress_power_law(1.2, 0.7, 3.0)) ==
        LimitValue::finite(1.2 * std::pow(2.0, 0.5)));
  CHECK(nu0(make_bounded_stress(1.1, 1, 2)) == LimitValue::finite(1.1));
  CHECK(nu0(make_bounded_rate(1.1, 1, 2)) == LimitValue::finite(1.1));
  CHECK(nu0(make_bingham(1, 0.5)) == LimitValue::infinite());
  CHECK(nu0(make_bingham(1.4, 0.0)) == LimitValue::finite(1.4));
  CHECK(nu0(make_herschel_bulkley(1, 1, 3.0, 0.0)) == LimitValue::zero());
  CHECK(nu0(make_activated_euler(1, 0.5)) == LimitValue::zero());
  CHECK(nu0(make_activated_euler(1.7, 0.0)) == LimitValue::finite(1.7));
  CHECK(nu0(make_activated_euler(2.0, 0.0, ActivationKind::ShiftedPowerLaw, 1.0,
                                 3.0, 4.0)) == LimitValue::finite(4.0));
  CHECK(nu0(make_activated_euler(2.0, 0.0, ActivationKind::Ladyzhenskaya, 1.0,
                                 2.5, 9.0)) == LimitValue::finite(2.0));
  CHECK(nu0(make_regularized_activated_euler(2.0, 0.5, 0.1)) ==
        LimitValue::finite(0.2));
  CHECK(nu0(make_regularized_activated_euler(2.0, 0.0, 0.1)) ==
        LimitValue::finite(2.2));
  CHECK(nu0(make_rigid_free_flow_limit(1, 1)) == LimitValue::infinite());
  CHECK(nu0(make_euler_rigid_limit(1, 1)) == LimitValue::zero());
  CHECK(nu0(make_additive_mix({make_navier_stokes(1.0), make_navier_stokes(2.0)})) ==
        LimitValue::finite(3.0));
  CHECK(nu0(make_additive_mix({make_navier_stokes(1.0), make_bingham(1.0, 1.0)})) ==
        LimitValue::infinite());
  CHECK(nu0(make_additive_mix({make_euler(), make_activated_euler(1.0, 0.5)})) ==
        LimitValue::zero());

  // extended inverse pairing
  ZeroLimits zl = zero_limits(make_navier_stokes(1.25));
  CHECK(zl.alpha0 == LimitValue::finite(1.0 / 2.5));
  CHECK(zero_limits(make_euler()).alpha0 == LimitValue::infinite());
  CHECK(zero_limits(make_rigid_only()).alpha0 == LimitValue::zero());

  // symbolic finite limits agree with the numeric curve at tiny rates
  for (const BulkModel& m :
       {make_navier_stokes(1.25), make_gen_power_law(1.2, 0.7, 1.5),
        make_bounded_stress(1.1, 1, 2), make_activated_euler(1.7, 0.0),
        make_regularized_activated_euler(2.0, 0.0, 0.1)}) {
    LimitValue v = zero_limits(m).nu0;
    REQUIRE(v.cls == LimitClass::Finite);
    CHECK(close(generalized_viscosity(m, 1e-9), v.value, 1e-6));
  }
}

TEST_CASE("parameter validation enforces the family invariants") {
  auto bad = [&](const BulkModel& m) {
    return throws_code([&] { validate(m); }, ErrorCode::InvalidParameters);
  };
  CHECK(bad(make_navier_stokes(0.0)));
  CHECK(bad(make_navier_stokes(-1.0)));
  CHECK(bad(make_power_law(1, 1, 1.0)));
  CHECK(bad(make_power_law(1, 0.0, 1.5)));
  CHECK(bad(make_gen_power_law(1, 1, 0.9)));
  CHECK(bad(make_stress_power_law(1, 1, 0.9)));
  CHECK(bad(make_bounded_stress(1, 1, 0.0)));
  CHECK(bad(make_bounded_rate(1, 1, -2.0)));
  CHECK(bad(make_bingham(1, -0.5)));
  CHECK(bad(make_herschel_bulkley(1, 1, 1.0, 0.5)));
  CHECK(bad(make_activated_euler(1, -0.1)));
  CHECK(bad(make_activated_euler(1, 0.5, ActivationKind::PowerLaw, 1.0, 1.0)));
  CHECK(bad(make_activated_euler(1, 0.5, ActivationKind::ShiftedPowerLaw, 1.0,
                                 2.5, 0.0)));
  CHECK(bad(make_activated_euler(1, 0.5, ActivationKind::Ladyzhenskaya, 1.0,
                                 2.0, 1.0)));
  CHECK(bad(make_regularized_activated_euler(1, 0.5, -0.1)));
  CHECK(bad(make_additive_mix({make_navier_stokes(1.0)})));
  CHECK(bad(make_additive_mix(
      {make_navier_stokes(1.0),
       make_additive_mix({make_navier_stokes(1.0), make_euler()})})));
  CHECK(bad(make_additive_mix({make_navier_stokes(1.0), make_rigid_only()})));

  // r = 1 boundary cases that the monotone invariant does allow
  validate(make_gen_power_law(1, 1, 1.0));
  validate(make_stress_power_law(1, 1, 1.0));
  validate(make_bingham(1, 0.0));
  validate(make_activated_euler(1, 0.0));

  auto badbc = [&](const BoundaryModel& bc) {
    return throws_code([&] { validate(bc); }, ErrorCode::InvalidParameters);
  };
  CHECK(badbc(make_navier_slip(0.0)));
  CHECK(badbc(make_stick_slip(1.0, -1.0)));
  CHECK(badbc({BoundaryFamily::NoSlipNavierSlip, 1.0, 1.0, 0.5}));
  CHECK(badbc({BoundaryFamily::FreeSlipNavierSlip, 1.0, 0.5, 1.0}));
  CHECK(badbc(make_combined_slip(1.0, 0.5, 0.5)));
  validate(make_combined_slip(1.0, 0.5, 0.0));
  validate(make_combined_slip(1.0, 0.0, 0.5));
  validate(make_free_slip());
}

TEST_CASE("boundary graphs: explicit maps and residuals") {
  // explicit traction maps
  CHECK(traction_of_slip(make_free_slip(), 3.0) == 0.0);
  CHECK(traction_of_slip(make_navier_slip(2.0), 3.0) == 6.0);
  CHECK(traction_of_slip(make_free_navier_slip(2.0, 1.0), 3.0) == 4.0);
  CHECK(traction_of_slip(make_free_navier_slip(2.0, 1.0), 0.5) == 0.0);
  CHECK(traction_of_slip(make_free_navier_slip(2.0, 1.0), -3.0) == -4.0);
  CHECK(throws_code([] { traction_of_slip(make_no_slip(), 1.0); },
                    ErrorCode::FamilyNotExplicit));
  CHECK(throws_code([] { traction_of_slip(make_stick_slip(1, 1), 1.0); },
                    ErrorCode::FamilyNotExplicit));
  CHECK(throws_code([] { traction_of_slip(make_combined_slip(1, 1, 0), 1.0); },
                    ErrorCode::FamilyNotExplicit));

  // explicit slip maps; stick-slip threshold example: gamma*=1, s*=1, |s|=3
  CHECK(slip_of_traction(make_navier_slip(2.0), 3.0) == 1.5);
  CHECK(slip_of_traction(make_stick_slip(1.0, 1.0), 3.0) == 2.0);
  CHECK(slip_of_traction(make_stick_slip(1.0, 1.0), -3.0) == -2.0);
  CHECK(slip_of_traction(make_stick_slip(1.0, 1.0), 0.5) == 0.0);
  CHECK(throws_code([] { slip_of_traction(make_free_slip(), 1.0); },
                    ErrorCode::FamilyNotExplicit));
  CHECK(throws_code([] { slip_of_traction(make_free_navier_slip(1, 1), 1.0); },
                    ErrorCode::FamilyNotExplicit));
  CHECK(throws_code([] { slip_of_traction(make_combined_slip(1, 0, 1), 1.0); },
                    ErrorCode::FamilyNotExplicit));

  // residuals vanish exactly on-graph
  CHECK(bc_residual(make_free_slip(), 0.0, 5.0) == 0.0);
  CHECK(bc_residual(make_no_slip(), 5.0, 0.0) == 0.0);
  CHECK(bc_residual(make_navier_slip(2.0), 6.0, 3.0) == 0.0);
  CHECK(bc_residual(make_stick_slip(1.0, 1.0), 3.0, 2.0) == 0.0);
  CHECK(bc_residual(make_stick_slip(1.0, 1.0), 0.7, 0.0) == 0.0);
  CHECK(bc_residual(make_free_navier_slip(2.0, 1.0), 4.0, 3.0) == 0.0);
  CHECK(bc_residual(make_free_navier_slip(2.0, 1.0), 0.0, 0.5) == 0.0);
  CHECK(bc_residual(make_combined_slip(1.0, 1.0, 0.0), 3.0, 2.0) == 0.0);
  CHECK(bc_residual(make_combined_slip(1.0, 0.0, 1.0), 2.0, 3.0) == 0.0);
  // and detect violations
  CHECK(bc_residual(make_no_slip(), 5.0, 0.3) == 0.3);
  CHECK(bc_residual(make_stick_slip(1.0, 1.0), 0.7, 0.4) == 0.4);

  // vector forms agree with scalars along a fixed direction
  Rng rng(9);
  Vec3 e = random_unit_vec(rng);
  for (const BoundaryModel& bc :
       {make_free_slip(), make_no_slip(), make_navier_slip(2.0),
        make_stick_slip(1.0, 1.0), make_free_navier_slip(2.0, 1.0),
        make_combined_slip(1.0, 1.0, 0.0)}) {
    for (double s : {0.0, 0.4, 3.0})
      for (double v : {0.0, 0.6, 2.0}) {
        double want = bc_residual(bc, s, v);
        double got = bc_residual(bc, Vec3((s * e).eval()), Vec3((v * e).eval()));
        CHECK(close(got, want, 1e-14));
      }
  }
  Vec3 v3 = 3.0 * e;
  CHECK((traction_of_slip(make_free_navier_slip(2.0, 1.0), v3) - 4.0 * e).norm() <=
        1e-15);
  CHECK((slip_of_traction(make_stick_slip(1.0, 1.0), v3) - 2.0 * e).norm() <=
        1e-15);
}

TEST_CASE("generalized viscosity and fluidity") {
  BulkModel pl = make_power_law(1.2, 0.7, 1.5);
  CHECK(close(generalized_viscosity(pl, 2.0), 2.8397182958878157 / 4.0, 1e-14));
  CHECK(close(generalized_fluidity(pl, 3.0), 2.2321428571428571 / 3.0, 1e-14));
  CHECK(throws_code([&] { generalized_viscosity(pl, 0.0); },
                    ErrorCode::InvalidParameters));
}

TEST_CASE("model JSON round trip is strict and canonical") {
  std::vector<BulkModel> models = {
      make_euler(),
      make_rigid_only(),
      make_navier_stokes(1.25),
      make_power_law(1.2, 0.7, 1.5),
      make_gen_power_law(1.2, 0.7, 1.5),
      make_stress_power_law(1.2, 0.7, 3.0),
      make_bounded_stress(1.0, 1.0, 4.0),
      make_bounded_rate(1.0, 1.0, 1.0),
      make_bingham(1.0, 1.5),
      make_herschel_bulkley(1.0, 1.0, 1.5, 1.0),
      make_activated_euler(1.0, 0.5, ActivationKind::Ladyzhenskaya, 1.0, 2.5,
                           0.5),
      make_regularized_activated_euler(1.0, 1.0, 0.1),
      make_additive_mix({make_power_law(1.0, 1.0, 1.5),
                         make_gen_power_law(1.0, 1.0, 2.5)}),
      make_rigid_free_flow_limit(1.5, 2.0),
      make_euler_rigid_limit(1.5, 2.0)};
  for (const BulkModel& m : models) {
    json j = to_json(m);
    BulkModel back = bulk_model_from_json(j);
    CHECK(dump_json(to_json(back)) == dump_json(j));
  }

  // parse with defaults left out
  BulkModel ae = bulk_model_from_json(
      parse_json_text(R"({"family":"ActivatedEuler","params":{"nu_star":2}})"));
  CHECK(ae.delta_star == 0.0);
  CHECK(ae.activation_kind == ActivationKind::One);
  BulkModel sp = bulk_model_from_json(parse_json_text(
      R"({"family":"ActivatedEuler","params":{"nu_star":2,"activation_kind":"ShiftedPowerLaw","d_star":1,"r":2.5}})"));
  CHECK(sp.A == 1.0);

  auto rejects = [&](const std::string& text) {
    return throws_code([&] { bulk_model_from_json(parse_json_text(text)); },
                       ErrorCode::InvalidConfig);
  };
  // unknown family, unused field, missing required field, wrong types
  CHECK(rejects(R"({"family":"Carreau","params":{}})"));
  CHECK(rejects(R"({"family":"NavierStokes","params":{"nu_star":1,"r":2}})"));
  CHECK(rejects(R"({"family":"PowerLaw","params":{"nu_star":1,"d_star":1}})"));
  CHECK(rejects(R"({"family":"NavierStokes","params":{"nu_star":"one"}})"));
  CHECK(rejects(R"({"family":"NavierStokes"," extra":1})"));
  CHECK(rejects(R"({"family":"ActivatedEuler","params":{"nu_star":1,"d_star":1}})"));
  CHECK(rejects(R"({"family":"Euler","params":{"nu_star":1}})"));
  CHECK(rejects("[1,2,3]"));
  // value errors surface as InvalidParameters after structural checks
  CHECK(throws_code(
      [&] {
        bulk_model_from_json(parse_json_text(
            R"({"family":"PowerLaw","params":{"nu_star":1,"d_star":1,"r":1}})"));
      },
      ErrorCode::InvalidParameters));

  std::vector<BoundaryModel> bcs = {
      make_free_slip(),
      make_no_slip(),
      make_navier_slip(2.0),
      make_stick_slip(1.0, 1.0),
      make_free_navier_slip(2.0, 1.0),
      make_combined_slip(1.0, 1.0, 0.0)};
  for (const BoundaryModel& bc : bcs) {
    json j = to_json(bc);
    BoundaryModel back = boundary_model_from_json(j);
    CHECK(dump_json(to_json(back)) == dump_json(j));
  }
  auto bc_rejects = [&](const std::string& text) {
    return throws_code(
        [&] { boundary_model_from_json(parse_json_text(text)); },
        ErrorCode::InvalidConfig);
  };
  CHECK(bc_rejects(R"({"family":"NoSlip","params":{"gamma_star":1}})"));
  CHECK(bc_rejects(R"({"family":"NavierSlip","params":{}})"));
  CHECK(bc_rejects(R"({"family":"Slip","params":{}})"));
  CHECK(bc_rejects(
      R"({"family":"NoSlipNavierSlip","params":{"gamma_star":1,"s_star":1,"v_star":0}})"));
}

TEST_CASE("monotone bisection inverts increasing maps") {
  auto f = [](double x) { return x * x * x + x; };
  double x = invert_increasing(f, 10.0, 0.0, 10.0);
  CHECK(close(f(x), 10.0, 1e-12));
  CHECK(invert_increasing(f, 0.0, 0.0, 10.0) == 0.0);
  CHECK(throws_code([&] { invert_increasing(f, 1e9, 0.0, 10.0); },
                    ErrorCode::NotInvertible));
}
