#include "pfr/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pfr/errors.hpp"

namespace pfr {

namespace {

constexpr double kFloor = 1e-300;
constexpr double kLogFloor = -690.7755278982137;  // ln(1e-300)
constexpr double kLogCeil = 690.0;
constexpr double kArmijo = 1e-4;
constexpr double kMaxPseudoLogStep = 8.0;

void check_size(const OccupationVector& n, const RateSchedule& sched) {
  if (static_cast<int>(n.size()) != sched.k_max()) {
    throw std::invalid_argument("occupation vector length " + std::to_string(n.size()) +
                                " does not match k_max " + std::to_string(sched.k_max()));
  }
}

// Residual of the stationary problem at one iterate.
struct Evaluation {
  OccupationVector f;
  std::vector<double> scale;
  double energy_mismatch = 0.0;  // E(n) - E_th
  double residual = 0.0;         // max of scaled rows and relative energy mismatch
};

class Solver {
 public:
  Solver(const ModelSpec& spec, const SolverOptions& opts)
      : opts_(opts), sched_(make_schedule(spec)), k_max_(spec.k_max) {
    e_th_ = total_energy(sched_.n_th, opts.precision);
  }

  const RateSchedule& schedule() const { return sched_; }
  double thermal_energy() const { return e_th_; }

  Evaluation evaluate(const OccupationVector& n) const {
    Evaluation ev;
    ev.f = rhs(n, sched_);
    ev.scale = residual_scale(n, sched_);
    ev.energy_mismatch = total_energy(n, opts_.precision) - e_th_;
    double res = std::abs(ev.energy_mismatch) / e_th_;
    for (int i = 0; i < k_max_; ++i) res = std::max(res, std::abs(ev.f[i]) / ev.scale[i]);
    ev.residual = std::isfinite(res) ? res : std::numeric_limits<double>::infinity();
    return ev;
  }

  // Newton merit with row weights frozen at the base iterate. Row 1 is
  // replaced by the energy constraint, which the stationary equations imply
  // for an Ohmic bath; it keeps the system well conditioned as G -> 0.
  double merit(const Evaluation& ev, const std::vector<double>& weight_scale) const {
    const double e = ev.energy_mismatch / e_th_;
    double m = e * e;
    for (int i = 1; i < k_max_; ++i) {
      const double r = ev.f[i] / weight_scale[i];
      m += r * r;
    }
    return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
  }

  // Newton direction in log coordinates y = ln n, with the energy row in
  // place of mode 1.
  bool newton_direction(const OccupationVector& n, const Evaluation& ev,
                        std::vector<double>& dy) const {
    const Tridiagonal jn = jacobian(n, sched_);
    const int m = k_max_ - 1;
    Tridiagonal t(m);
    for (int r = 0; r < m; ++r) {
      const int i = r + 1;
      const double w = 1.0 / ev.scale[i];
      t.diag[r] = jn.diag[i] * n[i] * w;
      if (r + 1 < m) t.upper[r] = jn.upper[i] * n[i + 1] * w;
      if (r > 0) t.lower[r - 1] = jn.lower[i - 1] * n[i - 1] * w;
    }
    const double coupling = jn.lower[0] * n[0] / ev.scale[1];

    TridiagonalLU lu;
    if (!lu.factor(t)) return false;
    std::vector<double> u(m), v(m, 0.0);
    for (int r = 0; r < m; ++r) u[r] = -ev.f[r + 1] / ev.scale[r + 1];
    v[0] = -coupling;
    lu.solve(u);
    lu.solve(v);

    double num = -ev.energy_mismatch;
    double den = n[0];
    for (int r = 0; r < m; ++r) {
      const double weight = static_cast<double>(r + 2) * n[r + 1];
      num -= weight * u[r];
      den += weight * v[r];
    }
    if (den == 0.0 || !std::isfinite(den) || !std::isfinite(num)) return false;
    const double s = num / den;
    dy.assign(k_max_, 0.0);
    dy[0] = s;
    for (int r = 0; r < m; ++r) dy[r + 1] = u[r] + s * v[r];
    for (double d : dy) {
      if (!std::isfinite(d)) return false;
    }
    return true;
  }

  // Linearized implicit Euler step (diag(n)/dt - J diag(n)) dy = f.
  bool pseudo_time_direction(const OccupationVector& n, const Evaluation& ev, double dt,
                             std::vector<double>& dy) const {
    Tridiagonal a = jacobian(n, sched_);
    const int K = k_max_;
    for (int i = 0; i < K; ++i) {
      const double w = 1.0 / ev.scale[i];
      a.diag[i] = (n[i] / dt - a.diag[i] * n[i]) * w;
      if (i + 1 < K) a.upper[i] = -a.upper[i] * n[i + 1] * w;
      if (i > 0) a.lower[i - 1] = -a.lower[i - 1] * n[i - 1] * w;
    }
    TridiagonalLU lu;
    if (!lu.factor(a)) return false;
    dy.resize(K);
    for (int i = 0; i < K; ++i) dy[i] = ev.f[i] / ev.scale[i];
    lu.solve(dy);
    for (double d : dy) {
      if (!std::isfinite(d)) return false;
    }
    return true;
  }

  static void apply(const std::vector<double>& y, const std::vector<double>& dy, double lambda,
                    std::vector<double>& y_out, OccupationVector& n_out) {
    const std::size_t K = y.size();
    y_out.resize(K);
    n_out.resize(K);
    for (std::size_t i = 0; i < K; ++i) {
      y_out[i] = std::clamp(y[i] + lambda * dy[i], kLogFloor, kLogCeil);
      n_out[i] = std::exp(y_out[i]);
    }
  }

 private:
  SolverOptions opts_;
  RateSchedule sched_;
  int k_max_;
  double e_th_ = 0.0;
};

}  // namespace

double current(int k, const OccupationVector& n, const RateSchedule& sched) {
  if (k < 1 || k > sched.k_max() - 1) {
    throw std::out_of_range("current: mode index " + std::to_string(k) +
                            " outside 1.." + std::to_string(sched.k_max() - 1));
  }
  check_size(n, sched);
  const double nk = n[k - 1];
  const double nk1 = n[k];
  return sched.kappa[k - 1] * (sched.n_w * (nk1 - nk) + (nk + 1.0) * nk1);
}

std::vector<double> currents(const OccupationVector& n, const RateSchedule& sched) {
  check_size(n, sched);
  const int K = sched.k_max();
  std::vector<double> j(K - 1);
  for (int k = 1; k < K; ++k) {
    const double nk = n[k - 1];
    const double nk1 = n[k];
    j[k - 1] = sched.kappa[k - 1] * (sched.n_w * (nk1 - nk) + (nk + 1.0) * nk1);
  }
  return j;
}

OccupationVector rhs(const OccupationVector& n, const RateSchedule& sched) {
  const std::vector<double> j = currents(n, sched);
  const int K = sched.k_max();
  OccupationVector out(K);
  for (int k = 1; k <= K; ++k) {
    const double j_up = k < K ? j[k - 1] : 0.0;
    const double j_down = k > 1 ? j[k - 2] : 0.0;
    out[k - 1] = (j_up - j_down) - sched.gamma[k - 1] * (n[k - 1] - sched.n_th[k - 1]);
  }
  return out;
}

Tridiagonal jacobian(const OccupationVector& n, const RateSchedule& sched) {
  check_size(n, sched);
  const int K = sched.k_max();
  const double nw = sched.n_w;
  Tridiagonal a(K);
  for (int k = 1; k <= K; ++k) {
    const int i = k - 1;
    double d = -sched.gamma[i];
    if (k < K) {
      const double kap = sched.kappa[i];
      d += kap * (n[i + 1] - nw);
      a.upper[i] = kap * (nw + n[i] + 1.0);
    }
    if (k > 1) {
      const double kap = sched.kappa[i - 1];
      d -= kap * (nw + n[i - 1] + 1.0);
      a.lower[i - 1] = kap * (nw - n[i]);
    }
    a.diag[i] = d;
  }
  return a;
}

std::vector<double> residual_scale(const OccupationVector& n, const RateSchedule& sched) {
  check_size(n, sched);
  const int K = sched.k_max();
  const double nw = sched.n_w;
  std::vector<double> s(K);
  for (int k = 1; k <= K; ++k) {
    const int i = k - 1;
    double rho = sched.gamma[i];
    if (k > 1) rho += sched.kappa[i - 1] * (nw + n[i - 1] + 1.0);
    if (k < K) rho += sched.kappa[i] * (nw + n[i + 1] + 1.0);
    s[i] = std::max(n[i], 1.0) * rho;
  }
  return s;
}

double scaled_residual(const OccupationVector& n, const RateSchedule& sched) {
  const OccupationVector f = rhs(n, sched);
  const std::vector<double> s = residual_scale(n, sched);
  double res = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) res = std::max(res, std::abs(f[i]) / s[i]);
  return res;
}

OccupationVector resize_warm_start(const OccupationVector& n, const ModelSpec& spec) {
  OccupationVector out = thermal_occupations(spec);
  const std::size_t keep = std::min(n.size(), out.size());
  std::copy_n(n.begin(), keep, out.begin());
  return out;
}

SteadyStateReport steady_state(const ModelSpec& spec, const SolverOptions& opts,
                               const std::optional<OccupationVector>& init) {
  spec.validate();
  if (spec.big_g == 0.0) {
    throw DegenerateSteadyState(
        "steady_state: G = 0 leaves the photon number undetermined; use "
        "engineered_distribution with an explicit photon number");
  }
  if (!(opts.residual_tol > 0.0) || opts.max_newton_iters < 1) {
    throw DomainError("steady_state: invalid solver options");
  }

  const Solver solver(spec, opts);
  const int K = spec.k_max;

  OccupationVector n = init ? *init : solver.schedule().n_th;
  if (static_cast<int>(n.size()) != K) {
    throw DomainError("steady_state: initial vector length does not match k_max");
  }
  std::vector<double> y(K);
  for (int i = 0; i < K; ++i) {
    if (!(n[i] >= 0.0) || !std::isfinite(n[i])) {
      throw DomainError("steady_state: initial occupations must be finite and >= 0");
    }
    y[i] = std::clamp(std::log(std::max(n[i], kFloor)), kLogFloor, kLogCeil);
    n[i] = std::exp(y[i]);
  }

  Evaluation ev = solver.evaluate(n);
  int newton_iters = 0;
  int pseudo_steps = 0;
  bool newton_mode = true;
  double dt = opts.pseudo_time_step;
  double merit_at_switch = std::numeric_limits<double>::infinity();
  int accepted_since_switch = 0;

  std::vector<double> dy, y_trial;
  OccupationVector n_trial;

  while (ev.residual > opts.residual_tol) {
    if (newton_mode) {
      if (newton_iters >= opts.max_newton_iters) break;
      ++newton_iters;
      bool accepted = false;
      if (solver.newton_direction(n, ev, dy)) {
        const std::vector<double> frozen = ev.scale;
        const double phi0 = solver.merit(ev, frozen);
        for (double lambda = 1.0; lambda >= opts.damping_min; lambda *= 0.5) {
          Solver::apply(y, dy, lambda, y_trial, n_trial);
          Evaluation trial = solver.evaluate(n_trial);
          const double phi = solver.merit(trial, frozen);
          if (phi <= (1.0 - kArmijo * lambda) * phi0) {
            y.swap(y_trial);
            n.swap(n_trial);
            ev = std::move(trial);
            accepted = true;
            break;
          }
        }
      }
      if (!accepted) {
        newton_mode = false;
        merit_at_switch = ev.residual;
        accepted_since_switch = 0;
      }
      continue;
    }

    if (pseudo_steps >= opts.max_pseudo_steps) break;
    ++pseudo_steps;
    bool ok = solver.pseudo_time_direction(n, ev, dt, dy);
    if (ok) {
      double biggest = 0.0;
      for (double d : dy) biggest = std::max(biggest, std::abs(d));
      ok = biggest <= kMaxPseudoLogStep;
    }
    if (ok) {
      Solver::apply(y, dy, 1.0, y_trial, n_trial);
      Evaluation trial = solver.evaluate(n_trial);
      ok = std::isfinite(trial.residual);
      if (ok) {
        y.swap(y_trial);
        n.swap(n_trial);
        ev = std::move(trial);
      }
    }
    if (!ok) {
      dt *= 0.25;
      if (dt < 1e-300) break;
      continue;
    }
    dt *= 2.0;
    ++accepted_since_switch;
    if (ev.residual < 0.1 * merit_at_switch || accepted_since_switch >= 10) {
      newton_mode = true;
    }
  }

  SteadyStateReport report;
  report.converged = ev.residual <= opts.residual_tol;
  report.residual = ev.residual;
  report.newton_iterations = newton_iters;
  report.pseudo_steps = pseudo_steps;
  report.iterations = newton_iters + pseudo_steps;
  if (!report.converged) {
    throw NotConverged("steady_state: residual " + std::to_string(ev.residual) + " after " +
                           std::to_string(newton_iters) + " Newton iterations and " +
                           std::to_string(pseudo_steps) + " pseudo-time steps",
                       ev.residual, report.iterations);
  }
  report.k_max = K;
  report.thermal_energy = solver.thermal_energy();
  report.currents = currents(n, solver.schedule());
  report.total_number = total_number(n);
  report.total_energy = total_energy(n);
  report.condensate_fraction = n[0] / report.total_number;
  report.occupations = std::move(n);
  return report;
}

namespace {

double relative_change(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

}  // namespace

CutoffResult adapt_cutoff_solve(const ModelSpec& spec, const SolverOptions& opts,
                                double observable_tol,
                                const std::optional<OccupationVector>& init) {
  if (!(observable_tol > 0.0)) throw DomainError("adapt_cutoff: tolerance must be > 0");
  ModelSpec current_spec = spec;
  current_spec.k_max = default_cutoff(spec.x);
  std::optional<OccupationVector> start;
  if (init) start = resize_warm_start(*init, current_spec);
  SteadyStateReport report = steady_state(current_spec, opts, start);

  for (int doublings = 0;; ++doublings) {
    ModelSpec next = current_spec;
    next.k_max = current_spec.k_max * 2;
    if (next.k_max > kMaxCutoff) {
      throw CutoffNotConverged("adapt_cutoff: observables still moving at k_max = " +
                                   std::to_string(current_spec.k_max),
                               current_spec.k_max);
    }
    SteadyStateReport next_report =
        steady_state(next, opts, resize_warm_start(report.occupations, next));
    const bool stable =
        relative_change(report.total_number, next_report.total_number) < observable_tol &&
        relative_change(report.total_energy, next_report.total_energy) < observable_tol &&
        relative_change(report.occupations[0], next_report.occupations[0]) < observable_tol;
    if (stable) return CutoffResult{current_spec, std::move(report), doublings};
    current_spec = next;
    report = std::move(next_report);
  }
}

ModelSpec adapt_cutoff(const ModelSpec& spec, const SolverOptions& opts, double observable_tol) {
  return adapt_cutoff_solve(spec, opts, observable_tol).spec;
}

StaggeringDiagnostic staggering(const OccupationVector& n) {
  StaggeringDiagnostic d;
  if (n.size() < 3) return d;
  double alt = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) norm += n[i] * n[i];
  int last_sign = 0;
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    if (i >= 1) {
      const double a = 0.25 * (n[i - 1] - 2.0 * n[i] + n[i + 1]);
      alt += a * a;
    }
    const double diff = n[i + 1] - n[i];
    const int sign = (diff > 0.0) - (diff < 0.0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++d.sign_changes;
      last_sign = sign;
    }
  }
  d.alternating_norm = norm > 0.0 ? std::sqrt(alt / norm) : 0.0;
  return d;
}

}  // namespace pfr
