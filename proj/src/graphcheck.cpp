#include "rheograph/graphcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rheo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json mat_to_json(const Sym3& a) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    json row = json::array();
    for (int j = 0; j < 3; ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

// rate interval glued to S = O (activation dead zones)
double dead_zone_width(const BulkModel& m) {
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
      for (const auto& c : m.components)
        w = std::min(w, dead_zone_width(c));
      return w;
    }
    default:
      return 0.0;
  }
}

TensorPair point_on_graph(const BulkModel& m, const SampleDomain& dom,
                          Rng& rng, const Sym3& dir) {
  auto colinear = [&](double s, double d) {
    return TensorPair{Sym3((s * dir).eval()), Sym3((d * dir).eval())};
  };
  double lo = dom.d_min, hi = dom.d_max;
  switch (m.family) {
    case Family::Euler:
      return colinear(0.0, rng.log_uniform(lo, hi));
    case Family::RigidOnly:
      return colinear(rng.log_uniform(lo, hi), 0.0);
    case Family::Bingham:
    case Family::HerschelBulkley:
      if (m.sigma_star > 0.0 && rng.uniform() < 0.5)
        return colinear(rng.uniform(0.0, m.sigma_star), 0.0);
      break;
    case Family::ActivatedEuler:
    case Family::RegularizedActivatedEuler: {
      double dz = dead_zone_width(m);
      if (dz > 0.0) {
        if (rng.uniform() < 0.5) return colinear(0.0, rng.uniform(0.0, dz));
        double d = dz + rng.log_uniform(lo, hi);
        return colinear(flow_curve(m, d), d);
      }
      break;
    }
    case Family::RigidFreeFlowLimit: {
      double plateau = 2.0 * m.nu_star * m.d_star;
      if (rng.uniform() < 0.5)
        return colinear(rng.uniform(0.0, plateau), 0.0);
      return colinear(plateau, rng.log_uniform(lo, hi));
    }
    case Family::EulerRigidLimit: {
      double cap = m.d_star / (2.0 * m.nu_star);
      if (rng.uniform() < 0.5) return colinear(0.0, rng.uniform(0.0, cap));
      return colinear(rng.log_uniform(lo, hi), cap);
    }
    case Family::StressPowerLaw:
    case Family::BoundedRate: {
      // stress-parametrized branch: the rate map is the closed form
      double s = 2.0 * m.nu_star * rng.log_uniform(lo, hi);
      return colinear(s, rate_of_stress_mag(m, s));
    }
    case Family::AdditiveMix: {
      double dz = dead_zone_width(m);
      double zcap = zero_rate_stress_cap(m);
      if ((dz > 0.0 || zcap > 0.0) && rng.uniform() < 0.5) {
        if (dz > 0.0 && (zcap == 0.0 || rng.uniform() < 0.5))
          return colinear(0.0, rng.uniform(0.0, dz));
        return colinear(rng.uniform(0.0, zcap), 0.0);
      }
      double cap = rate_cap(m);
      if (std::isfinite(cap)) hi = std::min(hi, cap * (1.0 - 1e-9));
      if (hi <= lo) lo = hi * 0.5;
      break;
    }
    default:
      break;
  }
  // rate-parametrized branch for everything that falls through
  double d = rng.log_uniform(lo, hi);
  if (m.family == Family::BoundedRate || rate_cap(m) <= d)
    d = std::min(d, rate_cap(m) * (1.0 - 1e-9));
  return colinear(flow_curve(m, d), d);
}

json pair_to_json(const TensorPair& p) {
  return json{{"S", mat_to_json(p.S)}, {"D", mat_to_json(p.D)}};
}

}  // namespace

void validate(const SampleDomain& dom) {
  if (!(dom.d_min > 0.0) || !(dom.d_max > dom.d_min) ||
      !std::isfinite(dom.d_max))
    fail(ErrorCode::InvalidParameters,
         "sample domain requires 0 < d_min < d_max < inf");
  if (dom.n_directions < 1)
    fail(ErrorCode::InvalidParameters, "n_directions must be >= 1");
}

TensorPair sample_graph_point(const BulkModel& m, const SampleDomain& dom,
                              Rng& rng) {
  Sym3 dir = random_direction(rng);
  return point_on_graph(m, dom, rng, dir);
}

ScalarPair sample_bc_point(const BoundaryModel& bc, const SampleDomain& dom,
                           Rng& rng) {
  double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  double mag = rng.log_uniform(dom.d_min, dom.d_max);
  switch (bc.family) {
    case BoundaryFamily::FreeSlip:
      return {0.0, sign * mag};
    case BoundaryFamily::NoSlip:
      return {sign * mag, 0.0};
    case BoundaryFamily::NavierSlip:
      return {bc.gamma_star * sign * mag, sign * mag};
    case BoundaryFamily::NoSlipNavierSlip:
    case BoundaryFamily::FreeSlipNavierSlip:
    case BoundaryFamily::Combined: {
      double u = rng.uniform();
      if (bc.s_star > 0.0 && u < 1.0 / 3.0)
        return {rng.uniform(-bc.s_star, bc.s_star), 0.0};
      if (bc.v_star > 0.0 && u < 2.0 / 3.0)
        return {0.0, rng.uniform(-bc.v_star, bc.v_star)};
      double v = sign * (bc.v_star + mag);
      double s =
          (bc.gamma_star * (std::abs(v) - bc.v_star) + bc.s_star) * sgn(v);
      return {s, v};
    }
  }
  fail(ErrorCode::InvalidParameters, "unknown boundary family");
}

CertReport check_origin(const BulkModel& m) {
  validate(m);
  CertReport rep;
  rep.axiom = Axiom::G1;
  rep.n_samples = 1;
  rep.worst_violation = graph_residual(m, Sym3::Zero(), Sym3::Zero());
  rep.tolerance = 0.0;
  rep.pass = rep.worst_violation <= rep.tolerance;
  rep.witness = pair_to_json({Sym3::Zero(), Sym3::Zero()});
  return rep;
}

CertReport check_origin(const BoundaryModel& bc) {
  validate(bc);
  CertReport rep;
  rep.axiom = Axiom::B1;
  rep.n_samples = 1;
  rep.worst_violation = bc_residual(bc, 0.0, 0.0);
  rep.tolerance = 0.0;
  rep.pass = rep.worst_violation <= rep.tolerance;
  rep.witness = json{{"s", 0.0}, {"v", 0.0}};
  return rep;
}

CertReport check_monotonicity(const BulkModel& m, const SampleDomain& dom,
                              long n_pairs) {
  validate(m);
  validate(dom);
  Rng rng(dom.seed);
  std::vector<Sym3> pool;
  pool.reserve(dom.n_directions);
  for (int i = 0; i < dom.n_directions; ++i)
    pool.push_back(random_direction(rng));
  auto pick = [&]() -> const Sym3& {
    return pool[static_cast<size_t>(rng.uniform() * pool.size()) %
                pool.size()];
  };

  CertReport rep;
  rep.axiom = Axiom::G2;
  rep.n_samples = n_pairs;
  rep.tolerance = 1e-12;
  double worst = -kInf;
  TensorPair w1, w2;
  bool have_witness = false;
  for (long i = 0; i < n_pairs; ++i) {
    TensorPair p1 = point_on_graph(m, dom, rng, pick());
    TensorPair p2 = point_on_graph(m, dom, rng, pick());
    double inner = ddot(p1.S - p2.S, p1.D - p2.D);
    double scale = frob(p1.S - p2.S) * frob(p1.D - p2.D);
    if (scale <= 0.0) continue;  // degenerate pair counts as pass
    double v = -inner / scale;
    if (v > worst) {
      worst = v;
      w1 = p1;
      w2 = p2;
      have_witness = true;
    }
  }
  rep.worst_violation = have_witness ? worst : 0.0;
  rep.pass = rep.worst_violation <= rep.tolerance;
  if (have_witness)
    rep.witness = json{{"first", pair_to_json(w1)}, {"second", pair_to_json(w2)}};
  return rep;
}

CertReport check_monotonicity(const BoundaryModel& bc, const SampleDomain& dom,
                              long n_pairs) {
  validate(bc);
  validate(dom);
  Rng rng(dom.seed);
  CertReport rep;
  rep.axiom = Axiom::B2;
  rep.n_samples = n_pairs;
  rep.tolerance = 1e-12;
  double worst = -kInf;
  ScalarPair w1, w2;
  bool have_witness = false;
  for (long i = 0; i < n_pairs; ++i) {
    ScalarPair p1 = sample_bc_point(bc, dom, rng);
    ScalarPair p2 = sample_bc_point(bc, dom, rng);
    double inner = (p1.s - p2.s) * (p1.v - p2.v);
    double scale = std::abs(p1.s - p2.s) * std::abs(p1.v - p2.v);
    if (scale <= 0.0) continue;
    double v = -inner / scale;
    if (v > worst) {
      worst = v;
      w1 = p1;
      w2 = p2;
      have_witness = true;
    }
  }
  rep.worst_violation = have_witness ? worst : 0.0;
  rep.pass = rep.worst_violation <= rep.tolerance;
  if (have_witness)
    rep.witness = json{{"first", json{{"s", w1.s}, {"v", w1.v}}},
                       {"second", json{{"s", w2.s}, {"v", w2.v}}}};
  return rep;
}

namespace {

enum class CoerciveForm { ShiftedQuadratic, AdditivePower, None };

// Recognize the two normalized activated forms with closed-form constants:
// g(d) = (d - delta)^+ (1 + d^2)^{(r-2)/2}   (shifted quadratic, q = r)
// g(d) = (d - delta)^+ (1 + d^{r-2})         (additive power, q = max{r,2})
// both with 2 nu* = 1, d* = 1, A = 1.
CoerciveForm detect_form(const BulkModel& m, double r, double* delta) {
  auto normalized = [](const BulkModel& b) {
    return std::abs(2.0 * b.nu_star - 1.0) <= 1e-12 && b.d_star == 1.0;
  };
  if (m.family == Family::ActivatedEuler && m.delta_star > 0.0 &&
      normalized(m) && m.A == 1.0 && m.r == r) {
    if (m.activation_kind == ActivationKind::ShiftedPowerLaw) {
      *delta = m.delta_star;
      return CoerciveForm::ShiftedQuadratic;
    }
    if (m.activation_kind == ActivationKind::Ladyzhenskaya) {
      *delta = m.delta_star;
      return CoerciveForm::AdditivePower;
    }
  }
  if (m.family == Family::AdditiveMix && m.components.size() == 2) {
    const BulkModel& c0 = m.components[0];
    const BulkModel& c1 = m.components[1];
    if (c0.family == Family::ActivatedEuler &&
        c1.family == Family::ActivatedEuler &&
        c0.activation_kind == ActivationKind::One &&
        c1.activation_kind == ActivationKind::PowerLaw && normalized(c0) &&
        normalized(c1) && c1.r == r && c0.delta_star > 0.0 &&
        c0.delta_star == c1.delta_star) {
      *delta = c0.delta_star;
      return CoerciveForm::AdditivePower;
    }
  }
  return CoerciveForm::None;
}

}  // namespace

CertReport check_coercivity(const BulkModel& m, double r,
                            const SampleDomain& dom) {
  validate(m);
  validate(dom);
  if (!(r > 1.0))
    fail(ErrorCode::InvalidParameters, "coercivity exponent requires r > 1");
  Rng rng(dom.seed);
  std::vector<Sym3> pool;
  pool.reserve(dom.n_directions);
  for (int i = 0; i < dom.n_directions; ++i)
    pool.push_back(random_direction(rng));
  auto pick = [&]() -> const Sym3& {
    return pool[static_cast<size_t>(rng.uniform() * pool.size()) %
                pool.size()];
  };

  CertReport rep;
  rep.axiom = Axiom::G4;
  rep.tolerance = 0.0;

  double delta = 0.0;
  CoerciveForm form = detect_form(m, r, &delta);

  const long n = 10000;
  rep.n_samples = n;
  std::vector<TensorPair> pts;
  pts.reserve(n);
  for (long i = 0; i < n; ++i) pts.push_back(point_on_graph(m, dom, rng, pick()));

  double alpha, beta, q;
  if (form != CoerciveForm::None) {
    rep.used_constants_route = true;
    double td = 2.0 * delta;
    double C1, C2;
    if (form == CoerciveForm::ShiftedQuadratic) {
      q = r;
      C1 = std::min(1.0, std::pow(1.0 + td * td, 0.5 * (r - 2.0)) /
                             std::pow(td, r - 2.0));
      C2 = std::pow(1.0 + 1.0 / td, r - 1.0);
    } else {
      q = std::max(r, 2.0);
      C1 = 1.0;
      C2 = std::pow(td, 2.0 - q) + std::pow(td, r - q);
    }
    double qp = q / (q - 1.0);
    double C3 = 1.0 + std::pow(C2, qp);
    alpha = C1 / (2.0 * C3);
    beta = alpha * std::pow(td, q);
  } else {
    // fitted fallback: largest alpha supported by the positive samples,
    // then the smallest beta that absorbs the dead zone
    q = std::max(r, 2.0);
    double qp = q / (q - 1.0);
    double amin = kInf;
    for (const auto& p : pts) {
      double y = ddot(p.S, p.D);
      double x = std::pow(frob(p.S), qp) + std::pow(frob(p.D), q);
      if (y > 0.0 && x > 0.0) amin = std::min(amin, y / x);
    }
    alpha = std::isfinite(amin) ? (1.0 - 1e-12) * amin : 0.0;
    beta = 0.0;
    for (const auto& p : pts) {
      double y = ddot(p.S, p.D);
      double x = std::pow(frob(p.S), qp) + std::pow(frob(p.D), q);
      beta = std::max(beta, alpha * x - y);
    }
  }

  double qp = q / (q - 1.0);
  double worst = -kInf;
  const TensorPair* wp = nullptr;
  for (const auto& p : pts) {
    double slack = ddot(p.S, p.D) -
                   alpha * (std::pow(frob(p.S), qp) + std::pow(frob(p.D), q)) +
                   beta;
    if (-slack > worst) {
      worst = -slack;
      wp = &p;
    }
  }
  rep.fitted_alpha = alpha;
  rep.fitted_beta = beta;
  rep.q = q;
  rep.worst_violation = worst;
  rep.pass = rep.worst_violation <= rep.tolerance;
  if (wp) rep.witness = pair_to_json(*wp);
  return rep;
}

CertReport check_coercivity(const BoundaryModel& bc, const SampleDomain& dom) {
  validate(bc);
  validate(dom);
  Rng rng(dom.seed);
  CertReport rep;
  rep.axiom = Axiom::B4;
  rep.tolerance = 0.0;
  const long n = 10000;
  rep.n_samples = n;
  std::vector<ScalarPair> pts;
  pts.reserve(n);
  for (long i = 0; i < n; ++i) pts.push_back(sample_bc_point(bc, dom, rng));

  double amin = kInf;
  for (const auto& p : pts) {
    double y = p.s * p.v;
    double x = p.s * p.s + p.v * p.v;
    if (y > 0.0 && x > 0.0) amin = std::min(amin, y / x);
  }
  double alpha = std::isfinite(amin) ? (1.0 - 1e-12) * amin : 0.0;
  double beta = 0.0;
  for (const auto& p : pts)
    beta = std::max(beta, alpha * (p.s * p.s + p.v * p.v) - p.s * p.v);

  double worst = -kInf;
  const ScalarPair* wp = nullptr;
  for (const auto& p : pts) {
    double slack = p.s * p.v - alpha * (p.s * p.s + p.v * p.v) + beta;
    if (-slack > worst) {
      worst = -slack;
      wp = &p;
    }
  }
  rep.fitted_alpha = alpha;
  rep.fitted_beta = beta;
  rep.q = 2.0;
  rep.worst_violation = worst;
  rep.pass = rep.worst_violation <= rep.tolerance;
  if (wp) rep.witness = json{{"s", wp->s}, {"v", wp->v}};
  return rep;
}

CertReport check_duality(const BulkModel& forward, const BulkModel& inverse,
                         const SampleDomain& dom, long n_samples,
                         bool expect_inverse) {
  validate(forward);
  validate(inverse);
  validate(dom);
  Rng rng(dom.seed);
  std::vector<Sym3> pool;
  pool.reserve(dom.n_directions);
  for (int i = 0; i < dom.n_directions; ++i)
    pool.push_back(random_direction(rng));

  CertReport rep;
  rep.axiom = expect_inverse ? Axiom::Duality : Axiom::NonInverse;
  rep.n_samples = n_samples;
  double max_err = 0.0;
  json witness;
  for (long i = 0; i < n_samples; ++i) {
    const Sym3& dir = pool[static_cast<size_t>(rng.uniform() * pool.size()) %
                           pool.size()];
    double d = rng.log_uniform(dom.d_min, dom.d_max);
    Sym3 D = d * dir;
    Sym3 S = stress_of_rate(forward, D);
    Sym3 back = rate_of_stress(inverse, S);
    double err = frob(back - D) / d;
    if (err > max_err) {
      max_err = err;
      witness = json{{"D", mat_to_json(D)},
                     {"S", mat_to_json(S)},
                     {"D_back", mat_to_json(back)},
                     {"relative_error", err}};
    }
  }
  rep.witness = witness;
  if (expect_inverse) {
    rep.worst_violation = max_err;
    rep.tolerance = 1e-10;
  } else {
    rep.worst_violation = -max_err;
    rep.tolerance = -1e-2;
  }
  rep.pass = rep.worst_violation <= rep.tolerance;
  return rep;
}

json to_json(const CertReport& rep) {
  json j;
  j["axiom"] = to_string(rep.axiom);
  j["n_samples"] = rep.n_samples;
  j["worst_violation"] = rep.worst_violation;
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.pass;
  j["witness"] = rep.witness;
  if (rep.axiom == Axiom::G4 || rep.axiom == Axiom::B4) {
    j["fitted_alpha"] = rep.fitted_alpha;
    j["fitted_beta"] = rep.fitted_beta;
    j["q"] = rep.q;
    j["used_constants_route"] = rep.used_constants_route;
  }
  return j;
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::G1: return "G1";
    case Axiom::G2: return "G2";
    case Axiom::G4: return "G4";
    case Axiom::B1: return "B1";
    case Axiom::B2: return "B2";
    case Axiom::B4: return "B4";
    case Axiom::Duality: return "Duality";
    case Axiom::NonInverse: return "NonInverse";
  }
  return "?";
}

Axiom axiom_from_string(const std::string& s) {
  for (Axiom a : {Axiom::G1, Axiom::G2, Axiom::G4, Axiom::B1, Axiom::B2,
                  Axiom::B4, Axiom::Duality, Axiom::NonInverse})
    if (to_string(a) == s) return a;
  fail(ErrorCode::InvalidConfig, "unknown axiom: " + s);
}

}  // namespace rheo
