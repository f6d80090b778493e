#include "model.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace wci {

namespace {

constexpr double kExpClamp = 500.0;

double logistic(double z) {
  z = std::clamp(z, -kExpClamp, kExpClamp);
  return 1.0 / (1.0 + std::exp(-z));
}

bool finite(State2 s) { return std::isfinite(s.E) && std::isfinite(s.I); }

}  // namespace

void SigmoidParams::validate() const {
  if (!(slope > 0) || !std::isfinite(slope) || !std::isfinite(threshold))
    throw Error(ErrorCode::Config, "sigmoid slope must be positive and finite");
}

void PopulationParams::validate() const {
  for (double c : {c1, c2, c3, c4})
    if (!(c >= 0) || !std::isfinite(c))
      throw Error(ErrorCode::Config,
                  "connectivity coefficients must be non-negative");
  for (double v : {ke, ki, re, ri, P, Q})
    if (!std::isfinite(v))
      throw Error(ErrorCode::Config, "population parameters must be finite");
  if (!(mu_e > 0) || !(mu_i > 0) || !std::isfinite(mu_e) ||
      !std::isfinite(mu_i))
    throw Error(ErrorCode::Config, "membrane time constants must be positive");
  sig_e.validate();
  sig_i.validate();
}

PopulationParams PopulationParams::with_time_constants(double e,
                                                       double i) const {
  PopulationParams out = *this;
  out.mu_e = e;
  out.mu_i = i;
  return out;
}

double norm(State2 s) { return std::hypot(s.E, s.I); }

double EigenPair::max_real() const {
  return std::max(first.real(), second.real());
}

double sigmoid(const SigmoidParams &p, double x) {
  return logistic(p.slope * (x - p.threshold)) -
         logistic(p.slope * (0.0 - p.threshold));
}

double sigmoid_derivative(const SigmoidParams &p, double x) {
  const double s = logistic(p.slope * (x - p.threshold));
  return p.slope * s * (1.0 - s);
}

State2 unscaled_field(const PopulationParams &p, State2 s) {
  const double ue = p.c1 * s.E - p.c2 * s.I + p.P;
  const double ui = p.c3 * s.E - p.c4 * s.I + p.Q;
  return {-s.E + (p.ke - p.re * s.E) * sigmoid(p.sig_e, ue),
          -s.I + (p.ki - p.ri * s.I) * sigmoid(p.sig_i, ui)};
}

State2 vector_field(const PopulationParams &p, State2 s) {
  const State2 f = unscaled_field(p, s);
  return {f.E / p.mu_e, f.I / p.mu_i};
}

Matrix2 jacobian(const PopulationParams &p, State2 s) {
  const double ue = p.c1 * s.E - p.c2 * s.I + p.P;
  const double ui = p.c3 * s.E - p.c4 * s.I + p.Q;
  const double se = sigmoid(p.sig_e, ue), dse = sigmoid_derivative(p.sig_e, ue);
  const double si = sigmoid(p.sig_i, ui), dsi = sigmoid_derivative(p.sig_i, ui);
  const double ge = p.ke - p.re * s.E;
  const double gi = p.ki - p.ri * s.I;
  Matrix2 j;
  j[0][0] = -1.0 - p.re * se + ge * dse * p.c1;
  j[0][1] = -ge * dse * p.c2;
  j[1][0] = gi * dsi * p.c3;
  j[1][1] = -1.0 - p.ri * si - gi * dsi * p.c4;
  return j;
}

EigenPair eigenvalues(const Matrix2 &m) {
  const double half_tr = 0.5 * (m[0][0] + m[1][1]);
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = half_tr * half_tr - det;
  if (disc < 0) {
    const double im = std::sqrt(-disc);
    return {{half_tr, im}, {half_tr, -im}};
  }
  // Larger-magnitude root first, the other from det / root (no cancellation).
  const double big = half_tr + std::copysign(std::sqrt(disc), half_tr);
  const double small = big != 0.0 ? det / big : 0.0;
  return {{big, 0.0}, {small, 0.0}};
}

bool is_hurwitz(const Matrix2 &m) { return eigenvalues(m).max_real() < 0.0; }

std::vector<std::size_t> SteadyStateReport::stable_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < points.size(); ++k)
    if (points[k].hurwitz) out.push_back(k);
  return out;
}

namespace {

// Damped Newton from one seed; returns true with the root in `x`.
bool newton(const PopulationParams &p, State2 &x, const NewtonOptions &opts) {
  State2 f = unscaled_field(p, x);
  double fn = norm(f);
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (!finite(x) || !std::isfinite(fn)) return false;
    if (fn < opts.residual_tol) {
      // A couple of extra steps pull the root to working precision so that
      // duplicates from different seeds agree far below merge_tol.
      for (int polish = 0; polish < 2; ++polish) {
        const Matrix2 j = jacobian(p, x);
        const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (det == 0.0) break;
        const double dE = (j[1][1] * f.E - j[0][1] * f.I) / det;
        const double dI = (-j[1][0] * f.E + j[0][0] * f.I) / det;
        const State2 trial{x.E - dE, x.I - dI};
        const State2 ft = unscaled_field(p, trial);
        if (!(norm(ft) <= fn)) break;
        x = trial;
        f = ft;
        fn = norm(ft);
      }
      return true;
    }
    const Matrix2 j = jacobian(p, x);
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if (std::abs(det) < 1e-300) return false;
    const double dE = (j[1][1] * f.E - j[0][1] * f.I) / det;
    const double dI = (-j[1][0] * f.E + j[0][0] * f.I) / det;
    // Armijo backtracking on ||F||.
    double lambda = 1.0;
    State2 trial;
    State2 ft;
    double ftn = 0;
    for (;;) {
      trial = {x.E - lambda * dE, x.I - lambda * dI};
      ft = unscaled_field(p, trial);
      ftn = norm(ft);
      if (std::isfinite(ftn) && ftn <= (1.0 - 1e-4 * lambda) * fn) break;
      lambda *= 0.5;
      if (lambda < 1.0 / 1024.0) break;
    }
    x = trial;
    f = ft;
    fn = ftn;
  }
  return finite(x) && fn < opts.residual_tol;
}

}  // namespace

SteadyStateReport find_steady_states(const PopulationParams &p, double bound,
                                     int grid_n, const NewtonOptions &opts) {
  if (!(bound > 0)) throw Error(ErrorCode::InvalidArgument, "bound must be > 0");
  if (grid_n < 16) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 16");
  p.validate();

  std::vector<State2> roots;
  bool any = false;
  const double h = 2.0 * bound / (grid_n - 1);
  for (int a = 0; a < grid_n; ++a) {
    for (int b = 0; b < grid_n; ++b) {
      State2 x{-bound + a * h, -bound + b * h};
      if (!newton(p, x, opts)) continue;
      any = true;
      if (std::abs(x.E) > bound || std::abs(x.I) > bound) continue;
      const bool dup = std::any_of(roots.begin(), roots.end(), [&](State2 r) {
        return norm(r - x) <= opts.merge_tol;
      });
      if (!dup) roots.push_back(x);
    }
  }
  if (!any)
    throw Error(ErrorCode::NoConvergence,
                "no Newton seed converged; parameters look degenerate");

  std::sort(roots.begin(), roots.end(), [](State2 l, State2 r) {
    return l.E != r.E ? l.E < r.E : l.I < r.I;
  });

  SteadyStateReport report;
  report.domain_bound = bound;
  report.grid_n = grid_n;
  for (State2 r : roots) {
    SteadyState s;
    s.point = r;
    s.jacobian = jacobian(p, r);
    s.eigen = eigenvalues(s.jacobian);
    s.hurwitz = s.eigen.max_real() < 0.0;
    report.points.push_back(s);
  }
  return report;
}

}  // namespace wci
