#include "rheograph/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "rheograph/error.hpp"
#include "rheograph/shear.hpp"

namespace rheo {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

double trapz(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

double node_weight(int i, int n, double h) {
  return (i == 0 || i == n) ? 0.5 * h : h;
}

}  // namespace

Grid Grid::uniform(double L, int n) {
  if (!(L > 0.0) || !std::isfinite(L))
    fail(ErrorCode::InvalidParameters, "grid half-width must be positive");
  if (n < 4)
    fail(ErrorCode::InvalidParameters, "grid needs at least 4 cells");
  Grid g;
  g.n = n;
  g.L = L;
  g.h = 2.0 * L / n;
  g.nodes.resize(n + 1);
  for (int i = 0; i <= n; ++i) g.nodes[i] = -L + g.h * i;
  g.nodes[n] = L;
  return g;
}

double nu_ref(const BulkModel& fluid) {
  double nu = 0.0;
  if (fluid.family == Family::AdditiveMix) {
    for (const auto& c : fluid.components) nu = std::max(nu, c.nu_star);
  } else {
    nu = fluid.nu_star;
  }
  return nu > 0.0 ? nu : 1.0;
}

std::function<double(double)> shear_reduce(const BulkModel& fluid) {
  if (!stress_explicit(fluid))
    fail(ErrorCode::FamilyNotStressExplicit,
         "shear reduction needs a fluid whose stress is a function of the "
         "rate");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  BulkModel m = fluid;
  return [m, inv_sqrt2](double omega) {
    if (omega == 0.0) return 0.0;
    return flow_curve(m, std::abs(omega) * inv_sqrt2) * sgn(omega) * inv_sqrt2;
  };
}

namespace {

// One continuation stage (or one implicit time step): the nonlinear system
// for the nodal profile, with C as an extra unknown in GivenQ mode.
struct StageSystem {
  const Grid* grid = nullptr;
  std::function<double(double)> tau;  // regularization already folded in
  const BoundaryModel* bc = nullptr;
  BcBlock block = BcBlock::NoSlip;
  double nu = 1.0;
  ForcingKind forcing = ForcingKind::GivenC;
  double Q = 0.0;
  std::vector<double> b;                       // nodal body force
  const std::vector<double>* u_prev = nullptr;  // null => steady
  double dt = 0.0;

  double time_term(const std::vector<double>& u, int i) const {
    return u_prev ? (u[i] - (*u_prev)[i]) / dt : 0.0;
  }

  // Traction the wall applies for a given slip speed (explicit-graph walls).
  double wall_traction(double v) const {
    switch (block) {
      case BcBlock::FreeSlip:
        return 0.0;
      case BcBlock::NavierSlip:
        return bc->gamma_star * v;
      case BcBlock::FreeSlipNavierSlip:
        return bc->gamma_star * relu(std::abs(v) - bc->v_star) * sgn(v);
      default:
        fail(ErrorCode::InvalidParameters, "wall traction needs a slip wall");
    }
  }

  // Traction required to balance the wall half-cell.
  double balance_traction(const std::vector<double>& u, double C,
                          bool left) const {
    const Grid& g = *grid;
    int n = g.n;
    double h = g.h;
    double G = 2.0 * nu * C;
    if (left) {
      double tf = tau((u[1] - u[0]) / h);
      return tf + 0.5 * h * (G + b[0] - time_term(u, 0));
    }
    double tf = tau((u[n] - u[n - 1]) / h);
    return -tf + 0.5 * h * (G + b[n] - time_term(u, n));
  }

  // Stick/slide branch of a stick-slip wall: 0 stuck, +-1 sliding.
  int wall_branch(const std::vector<double>& u, double C, bool left) const {
    double s = balance_traction(u, C, left);
    return std::abs(s) <= bc->s_star ? 0 : (s > 0.0 ? 1 : -1);
  }

  void residual(const std::vector<double>& u, double C,
                std::vector<double>& R, double& F) const {
    const Grid& g = *grid;
    int n = g.n;
    double h = g.h;
    double G = 2.0 * nu * C;
    double tf_prev = tau((u[1] - u[0]) / h);
    double tf_first = tf_prev;
    for (int i = 1; i < n; ++i) {
      double tf = tau((u[i + 1] - u[i]) / h);
      R[i] = (tf - tf_prev) / h + G + b[i] - time_term(u, i);
      tf_prev = tf;
    }
    double tf_last = tf_prev;
    switch (block) {
      case BcBlock::NoSlip:
        R[0] = u[0];
        R[n] = u[n];
        break;
      case BcBlock::NoSlipNavierSlip: {
        // complementarity form of the stuck/sliding case analysis
        double sL = balance_traction(u, C, true);
        double sR = balance_traction(u, C, false);
        double slipL = relu(std::abs(sL) - bc->s_star) * sgn(sL);
        double slipR = relu(std::abs(sR) - bc->s_star) * sgn(sR);
        R[0] = (bc->gamma_star * u[0] - slipL) * (2.0 / h);
        R[n] = (bc->gamma_star * u[n] - slipR) * (2.0 / h);
        break;
      }
      default: {
        R[0] = (tf_first - wall_traction(u[0])) / (0.5 * h) + G + b[0] -
               time_term(u, 0);
        R[n] = (-wall_traction(u[n]) - tf_last) / (0.5 * h) + G + b[n] -
               time_term(u, n);
        break;
      }
    }
    F = forcing == ForcingKind::GivenQ ? trapz(u, h) - Q : 0.0;
  }
};

// A contiguous run of vanishing Jacobian rows marks nodes whose flux
// derivative is identically zero (dead zone at eps = 0); name them so the
// caller can suggest the fix.  Empty result means no such rows.
std::string mask_message(const std::vector<double>& lo,
                         const std::vector<double>& di,
                         const std::vector<double>& up) {
  int mask_lo = -1, mask_hi = -1;
  for (size_t i = 0; i < di.size(); ++i) {
    double rowmag =
        std::max({std::abs(lo[i]), std::abs(di[i]), std::abs(up[i])});
    if (rowmag < 1e-300) {
      if (mask_lo < 0) mask_lo = static_cast<int>(i);
      mask_hi = static_cast<int>(i);
    }
  }
  if (mask_lo < 0) return {};
  return "degenerate zone mask: nodes " + std::to_string(mask_lo) + ".." +
         std::to_string(mask_hi) +
         " have zero flux derivative (below activation with eps = 0); "
         "keep eps_final > 0 or solve unsteadily";
}

// Tridiagonal solve with explicit singularity reporting.
std::vector<double> solve_tridiagonal(std::vector<double> lo,
                                      std::vector<double> di,
                                      std::vector<double> up,
                                      std::vector<double> rhs) {
  size_t n = di.size();
  std::string mask = mask_message(lo, di, up);
  if (!mask.empty()) fail(ErrorCode::SingularJacobian, mask);
  for (size_t i = 1; i < n; ++i) {
    if (std::abs(di[i - 1]) < 1e-300)
      fail(ErrorCode::SingularJacobian,
           "zero pivot at row " + std::to_string(i - 1));
    double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (std::abs(di[n - 1]) < 1e-300)
    fail(ErrorCode::SingularJacobian, "zero pivot at last row");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / di[n - 1];
  for (size_t i = n - 1; i-- > 0;)
    x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
  return x;
}

struct StageOutcome {
  int iters = 0;
  double resnorm = 0.0;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

StageOutcome newton_stage(const StageSystem& sys, const ChannelOpts& opts,
                          std::vector<double>& u, double& C,
                          const std::string& tag) {
  const Grid& g = *sys.grid;
  int n = g.n;
  size_t rows = static_cast<size_t>(n) + 1;
  std::vector<double> R(rows), Rp(rows), lo(rows), di(rows), up(rows),
      du(rows), ut(rows), upert(rows), steps(rows);
  double F = 0.0, Fp = 0.0;
  sys.residual(u, C, R, F);
  // weight converting the flux mismatch into row units for the merit value
  double kappa =
      2.0 * sys.nu / (g.h * g.h) + (sys.u_prev ? 1.0 / sys.dt : 0.0);
  auto merit = [&](const std::vector<double>& RR, double FF) {
    double v = inf_norm(RR);
    if (sys.forcing == ForcingKind::GivenQ)
      v = std::max(v, kappa * std::abs(FF));
    return v;
  };
  auto converged = [&](const std::vector<double>& RR, double FF, double CC) {
    bool ok =
        inf_norm(RR) <= opts.tol * std::max(1.0, std::abs(2.0 * sys.nu * CC));
    if (sys.forcing == ForcingKind::GivenQ)
      ok = ok && std::abs(FF) <= opts.tol * std::max(1.0, std::abs(sys.Q));
    return ok;
  };
  bool sticky = sys.block == BcBlock::NoSlipNavierSlip;
  int brL = sticky ? sys.wall_branch(u, C, true) : 0;
  int brR = sticky ? sys.wall_branch(u, C, false) : 0;
  int switches = 0;
  // Full semismooth steps: for a monotone piecewise-linear flux the undamped
  // Newton map is a policy iteration on the activation pattern and terminates
  // finitely, whereas merit line searches stall at the kinks (the active set
  // then moves one face per iteration).  The step is shortened only when it
  // leaves the floating-point domain; a best-merit stall counter aborts
  // cycles and genuine divergence.
  double best = merit(R, F);
  int stall = 0;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (converged(R, F, C)) return {iter, inf_norm(R)};
    // Jacobian bands by three-color differencing (stencil width <= 3)
    std::fill(lo.begin(), lo.end(), 0.0);
    std::fill(di.begin(), di.end(), 0.0);
    std::fill(up.begin(), up.end(), 0.0);
    for (int color = 0; color < 3; ++color) {
      upert = u;
      for (int i = color; i <= n; i += 3) {
        steps[i] = 1.5e-8 * std::max(1.0, std::abs(u[i]));
        upert[i] += steps[i];
      }
      sys.residual(upert, C, Rp, Fp);
      for (int j = 0; j <= n; ++j) {
        for (int k = j - 1; k <= j + 1; ++k) {
          if (k < 0 || k > n || k % 3 != color) continue;
          double d = (Rp[j] - R[j]) / steps[k];
          if (k == j - 1)
            lo[j] = d;
          else if (k == j)
            di[j] = d;
          else
            up[j] = d;
        }
      }
    }
    double dC = 0.0;
    if (sys.forcing == ForcingKind::GivenQ) {
      // Bordered (arrowhead) system: the tridiagonal block alone may be a
      // singular Neumann operator (for instance both walls sitting on a
      // zero-slope stick branch), while the full matrix with the C column
      // and the flux row is invertible, so factor it as a whole.
      double stC = 1.5e-8 * std::max(1.0, std::abs(C));
      sys.residual(u, C + stC, Rp, Fp);
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows + 1, rows + 1);
      Eigen::VectorXd rhs(rows + 1);
      for (size_t j = 0; j < rows; ++j) {
        Eigen::Index ej = static_cast<Eigen::Index>(j);
        if (j > 0) M(ej, ej - 1) = lo[j];
        M(ej, ej) = di[j];
        if (j + 1 < rows) M(ej, ej + 1) = up[j];
        M(ej, rows) = (Rp[j] - R[j]) / stC;
        M(rows, ej) = node_weight(static_cast<int>(j), n, g.h);
        rhs[ej] = -R[j];
      }
      M(rows, rows) = (Fp - F) / stC;
      rhs[static_cast<Eigen::Index>(rows)] = -F;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (!lu.isInvertible()) {
        std::string mask = mask_message(lo, di, up);
        fail(ErrorCode::SingularJacobian,
             mask.empty() ? "bordered flux system is singular: the profile "
                            "does not respond to C"
                          : mask);
      }
      Eigen::VectorXd delta = lu.solve(rhs);
      for (size_t j = 0; j < rows; ++j)
        du[j] = delta[static_cast<Eigen::Index>(j)];
      dC = delta[static_cast<Eigen::Index>(rows)];
    } else {
      std::vector<double> a = solve_tridiagonal(lo, di, up, R);
      for (size_t j = 0; j < rows; ++j) du[j] = -a[j];
    }
    double t = 1.0;
    bool finite = false;
    double Ct = C;
    for (int bs = 0; bs < 30; ++bs) {
      for (size_t j = 0; j < rows; ++j) ut[j] = u[j] + t * du[j];
      Ct = C + t * dC;
      sys.residual(ut, Ct, Rp, Fp);
      if (std::isfinite(merit(Rp, Fp))) {
        finite = true;
        break;
      }
      t *= 0.5;
    }
    if (!finite) break;  // hopeless direction; fall through to the final check
    double phit = merit(Rp, Fp);
    if (phit < best) {
      best = phit;
      stall = 0;
    } else if (++stall >= 30) {
      break;  // no progress over many full steps; report the residual
    }
    u.swap(ut);
    C = Ct;
    R.swap(Rp);
    F = Fp;
    if (sticky) {
      int nbL = sys.wall_branch(u, C, true);
      int nbR = sys.wall_branch(u, C, false);
      if (nbL != brL) ++switches;
      if (nbR != brR) ++switches;
      brL = nbL;
      brR = nbR;
      if (switches > opts.max_switches)
        fail(ErrorCode::NoConvergence,
             tag + ": wall stick/slide branch cycled " +
                 std::to_string(switches) + " times");
    }
  }
  if (converged(R, F, C)) return {opts.max_iters, inf_norm(R)};
  fail(ErrorCode::NoConvergence,
       tag + ": residual " + std::to_string(inf_norm(R)) + " after " +
           std::to_string(opts.max_iters) + " iterations");
}

void check_opts(const ChannelOpts& o) {
  if (!(o.tol > 0.0) || o.max_iters < 1 || o.max_switches < 1 ||
      !(o.eps_factor > 0.0) || !(o.eps_factor < 1.0) || !(o.eps_start >= 0.0) ||
      !(o.eps_final >= 0.0))
    fail(ErrorCode::InvalidParameters, "invalid solver options");
}

std::vector<double> make_eps_schedule(const ChannelOpts& o) {
  std::vector<double> sched;
  double e = std::max(o.eps_start, o.eps_final);
  for (;;) {
    sched.push_back(e);
    if (e <= o.eps_final) break;
    double next = e * o.eps_factor;
    if (next <= 1e-14 || next <= o.eps_final * (1.0 + 1e-9)) next = o.eps_final;
    e = next;
  }
  return sched;
}

void check_grid(const ChannelProblem& prob, const Grid& grid) {
  if (grid.n < 4 || grid.nodes.size() != static_cast<size_t>(grid.n) + 1)
    fail(ErrorCode::InvalidParameters, "grid is not initialized");
  if (std::abs(grid.L - prob.L) > 1e-12 * std::max(1.0, std::abs(prob.L)))
    fail(ErrorCode::DomainMismatch,
         "grid half-width does not match the problem half-width");
}

StageSystem make_system(const ChannelProblem& prob, const Grid& grid,
                        const BoundaryModel& bc, double t_body) {
  StageSystem sys;
  sys.grid = &grid;
  sys.bc = &bc;
  sys.block = bc_block_of(bc);
  sys.nu = nu_ref(prob.fluid);
  sys.forcing = prob.forcing;
  sys.Q = prob.Q;
  sys.b.assign(grid.nodes.size(), 0.0);
  if (prob.body_force)
    for (size_t i = 0; i < grid.nodes.size(); ++i)
      sys.b[i] = prob.body_force(t_body, grid.nodes[i]);
  return sys;
}

LedgerRow make_ledger_row(const StageSystem& sys, const std::vector<double>& u,
                          double C, double t, double kin_prev) {
  const Grid& g = *sys.grid;
  int n = g.n;
  double h = g.h;
  double G = 2.0 * sys.nu * C;
  LedgerRow row;
  row.t = t;
  double diss = 0.0;
  for (int f = 0; f < n; ++f) {
    double w = (u[f + 1] - u[f]) / h;
    diss += h * sys.tau(w) * w;
  }
  diss += sys.balance_traction(u, C, true) * u[0] +
          sys.balance_traction(u, C, false) * u[n];
  double kin = 0.0, work = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = node_weight(i, n, h);
    kin += 0.5 * w * u[i] * u[i];
    work += w * (G + sys.b[i]) * u[i];
  }
  row.kinetic = kin;
  row.dissipation = diss;
  row.work = work;
  row.slack = sys.dt > 0.0 ? work - (kin - kin_prev) / sys.dt - diss : 0.0;
  return row;
}

}  // namespace

SolveReport steady_solve(const ChannelProblem& prob, const Grid& grid,
                         const ChannelOpts& opts) {
  check_opts(opts);
  check_grid(prob, grid);
  BulkModel fluid = prob.fluid;
  validate(fluid);
  BoundaryModel bc = prob.bc;
  validate(bc);
  auto tau0 = shear_reduce(fluid);
  double nu = nu_ref(fluid);

  StageSystem sys = make_system(prob, grid, bc, 0.0);
  std::vector<double> u(grid.nodes.size(), 0.0);
  if (!opts.u_init.empty()) {
    if (opts.u_init.size() != grid.nodes.size())
      fail(ErrorCode::InvalidParameters,
           "warm-start profile does not match the grid");
    u = opts.u_init;
  }
  double C = prob.forcing == ForcingKind::GivenC ? prob.C : opts.C_init;

  SolveReport rep;
  rep.y = grid.nodes;
  std::vector<double> sched = make_eps_schedule(opts);
  for (size_t k = 0; k < sched.size(); ++k) {
    double eps = sched[k];
    sys.tau = [tau0, nu, eps](double w) { return eps * nu * w + tau0(w); };
    StageOutcome out = newton_stage(
        sys, opts, u, C,
        "stage " + std::to_string(k) + " (eps=" + std::to_string(eps) + ")");
    rep.newton_iters.push_back(out.iters);
    rep.eps_schedule.push_back(eps);
    rep.residual_norm = out.resnorm;
  }
  rep.u = u;
  rep.C = C;
  rep.richardson_flag = opts.eps_final > 0.0 && rate_dead_zone(fluid) > 0.0;
  return rep;
}

SolveReport unsteady_solve(const ChannelProblem& prob, const Grid& grid,
                           double dt, const ChannelOpts& opts) {
  check_opts(opts);
  check_grid(prob, grid);
  if (!(dt > 0.0) || !std::isfinite(dt))
    fail(ErrorCode::InvalidParameters, "time step must be positive");
  if (!(prob.T > 0.0) || !std::isfinite(prob.T))
    fail(ErrorCode::InvalidParameters, "time horizon must be positive");
  BulkModel fluid = prob.fluid;
  validate(fluid);
  BoundaryModel bc = prob.bc;
  validate(bc);
  auto tau0 = shear_reduce(fluid);
  double nu = nu_ref(fluid);
  long steps = std::llround(prob.T / dt);
  if (steps < 1) steps = 1;

  std::vector<double> u(grid.nodes.size(), 0.0);
  if (prob.v0)
    for (size_t i = 0; i < grid.nodes.size(); ++i)
      u[i] = prob.v0(grid.nodes[i]);
  std::vector<double> u_prev = u;

  SolveReport rep;
  rep.y = grid.nodes;
  rep.eps_schedule.push_back(opts.eps_final);
  rep.C = prob.forcing == ForcingKind::GivenC ? prob.C : 0.0;
  double C = rep.C;

  double eps = opts.eps_final;
  auto tau = [tau0, nu, eps](double w) { return eps * nu * w + tau0(w); };
  StageSystem sys = make_system(prob, grid, bc, 0.0);
  sys.tau = tau;
  sys.u_prev = &u_prev;
  sys.dt = dt;

  double kin0 = 0.0;
  for (int i = 0; i <= grid.n; ++i)
    kin0 += 0.5 * node_weight(i, grid.n, grid.h) * u[i] * u[i];
  LedgerRow first;
  first.t = 0.0;
  first.kinetic = kin0;
  rep.energy_ledger.push_back(first);

  for (long k = 1; k <= steps; ++k) {
    double t = k * dt;
    if (prob.body_force)
      for (size_t i = 0; i < grid.nodes.size(); ++i)
        sys.b[i] = prob.body_force(t, grid.nodes[i]);
    StageOutcome out;
    try {
      out = newton_stage(sys, opts, u, C, "step " + std::to_string(k));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoConvergence)
        fail(ErrorCode::NoConvergence,
             "time step " + std::to_string(k) + " of " +
                 std::to_string(steps) + ": " + e.what());
      throw;
    }
    rep.newton_iters.push_back(out.iters);
    rep.residual_norm = out.resnorm;
    rep.energy_ledger.push_back(make_ledger_row(
        sys, u, C, t, rep.energy_ledger.back().kinetic));
    u_prev = u;
  }
  rep.u = u;
  rep.C = C;
  rep.richardson_flag = opts.eps_final > 0.0 && rate_dead_zone(fluid) > 0.0;
  return rep;
}

LedgerCheck energy_ledger_check(const SolveReport& report) {
  LedgerCheck out;
  const auto& rows = report.energy_ledger;
  for (size_t k = 1; k < rows.size(); ++k) {
    double dt = rows[k].t - rows[k - 1].t;
    double scale =
        std::max({1.0, rows[k - 1].kinetic, rows[k].kinetic,
                  dt * std::abs(rows[k].work),
                  dt * std::abs(rows[k].dissipation)});
    double viol = rows[k].kinetic - rows[k - 1].kinetic +
                  dt * rows[k].dissipation - dt * rows[k].work;
    double scaled_slack = -viol / scale;
    if (scaled_slack < out.worst_slack) {
      out.worst_slack = scaled_slack;
      out.worst_step = static_cast<int>(k);
    }
    if (viol > 1e-10 * scale) out.pass = false;
    if (rows[k].dissipation < -1e-12 * scale / std::max(dt, 1e-300))
      out.pass = false;
  }
  return out;
}

std::vector<double> detect_activation_points(const SolveReport& report,
                                             double omega_threshold) {
  std::vector<double> pts;
  size_t nn = report.u.size();
  if (nn < 3) return pts;
  std::vector<double> ym(nn - 1), phi(nn - 1);
  for (size_t f = 0; f + 1 < nn; ++f) {
    double h = report.y[f + 1] - report.y[f];
    ym[f] = 0.5 * (report.y[f] + report.y[f + 1]);
    phi[f] = std::abs((report.u[f + 1] - report.u[f]) / h) - omega_threshold;
  }
  for (size_t f = 0; f + 1 < phi.size(); ++f) {
    if (phi[f] == 0.0) {
      pts.push_back(ym[f]);
    } else if (phi[f] * phi[f + 1] < 0.0) {
      pts.push_back(ym[f] +
                    (ym[f + 1] - ym[f]) * phi[f] / (phi[f] - phi[f + 1]));
    }
  }
  return pts;
}

ConvergenceStudy convergence_study(const ChannelProblem& prob,
                                   const std::vector<int>& ns,
                                   const ChannelOpts& opts,
                                   const std::function<double(double)>& ref) {
  if (ns.size() < 3)
    fail(ErrorCode::InvalidParameters, "study needs at least 3 grids");
  for (size_t k = 0; k + 1 < ns.size(); ++k)
    if (ns[k + 1] != 2 * ns[k])
      fail(ErrorCode::InvalidParameters, "study grids must be nested (n, 2n)");
  if (!ref) fail(ErrorCode::InvalidParameters, "study needs a reference");
  ConvergenceStudy study;
  study.ns = ns;
  for (int n : ns) {
    Grid g = Grid::uniform(prob.L, n);
    SolveReport rep = steady_solve(prob, g, opts);
    double err = 0.0;
    for (size_t i = 0; i < rep.u.size(); ++i)
      err = std::max(err, std::abs(rep.u[i] - ref(rep.y[i])));
    study.errors.push_back(err);
  }
  for (size_t k = 0; k + 1 < study.errors.size(); ++k)
    study.orders.push_back(
        std::log2(study.errors[k] / std::max(study.errors[k + 1], 1e-300)));
  return study;
}

}  // namespace rheo
