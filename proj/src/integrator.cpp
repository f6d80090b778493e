#include "integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wci {

void SolverConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0))
    throw Error(ErrorCode::Config, "solver tolerances must be positive");
  if (!(min_step > 0) || !(min_step < max_step))
    throw Error(ErrorCode::Config, "solver requires 0 < min_step < max_step");
  if (!(sample_stride > 0))
    throw Error(ErrorCode::Config, "sample_stride must be positive");
}

SolverConfig SolverConfig::for_time_constant(double mu_min) const {
  SolverConfig out = *this;
  if (mu_min < 0.05) out.max_step = std::min(max_step, 0.5 * mu_min);
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

double rms_scaled(const Vec &v, const Vec &scale) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = v[i] / scale[i];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

class Stepper {
 public:
  Stepper(const Field &f, std::size_t n, const SolverConfig &cfg)
      : f_(f), cfg_(cfg), n_(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n),
        k7(n), tmp(n), y1(n), err(n), scale(n), r1(n), r2(n), r3(n), r4(n),
        r5(n) {}

  void eval(double t, const Vec &x, Vec &out) { f_(t, x, out); }

  double initial_step(double t, const Vec &y, double span) {
    eval(t, y, k1);
    for (std::size_t i = 0; i < n_; ++i)
      scale[i] = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
    const double dy0 = rms_scaled(y, scale);
    const double df0 = rms_scaled(k1, scale);
    double h0 = (dy0 < 1e-5 || df0 < 1e-5) ? 1e-6 : 0.01 * dy0 / df0;
    h0 = std::min(h0, span);
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h0 * k1[i];
    eval(t + h0, tmp, k2);
    for (std::size_t i = 0; i < n_; ++i) err[i] = k2[i] - k1[i];
    const double ddf = rms_scaled(err, scale) / h0;
    const double m = std::max(df0, ddf);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                 : std::pow(0.01 / m, 1.0 / 5.0);
    return std::min({100 * h0, h1, cfg_.max_step, span});
  }

  // One trial step from (t, y) with k1 = f(t, y) already set. Returns the
  // scaled error norm; the candidate solution is left in y1 and k7.
  double attempt(double t, const Vec &y, double h) {
    for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                           a54 * k4[i]);
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n_; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    eval(t + h, tmp, k6);
    for (std::size_t i = 0; i < n_; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                          a75 * k5[i] + a76 * k6[i]);
    eval(t + h, y1, k7);
    for (std::size_t i = 0; i < n_; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
      scale[i] = cfg_.abs_tol +
                 cfg_.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
    }
    const double e = rms_scaled(err, scale);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  }

  void prepare_dense(const Vec &y, double h) {
    for (std::size_t i = 0; i < n_; ++i) {
      r1[i] = y[i];
      r2[i] = y1[i] - y[i];
      r3[i] = h * k1[i] - r2[i];
      r4[i] = r2[i] - h * k7[i] - r3[i];
      r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                   d6 * k6[i] + d7 * k7[i]);
    }
  }

  void dense(double theta, Vec &out) const {
    const double om = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = r1[i] +
               theta * (r2[i] + om * (r3[i] + theta * (r4[i] + om * r5[i])));
  }

 private:
  const Field &f_;
  const SolverConfig &cfg_;
  std::size_t n_;

 public:
  Vec k1, k2, k3, k4, k5, k6, k7, tmp, y1, err, scale;
  Vec r1, r2, r3, r4, r5;
};

}  // namespace

Arc integrate_segment(const Field &field, double t0, double t1,
                      std::span<const double> x0, const SolverConfig &cfg) {
  if (!(t0 < t1))
    throw Error(ErrorCode::InvalidArgument, "integrate_segment needs t0 < t1");
  cfg.validate();
  const std::size_t n = x0.size();
  Arc arc;
  arc.dim = n;
  arc.push(t0, x0);

  Vec y(x0.begin(), x0.end());
  Vec out(n);
  Stepper st(field, n, cfg);

  // Next grid multiple strictly beyond t0 (with a small guard so rounding
  // never produces a sample indistinguishable from an endpoint).
  const double stride = cfg.sample_stride;
  const double guard = 1e-9 * stride;
  long long m = static_cast<long long>(std::floor(t0 / stride)) + 1;
  while (m * stride <= t0 + guard) ++m;

  double t = t0;
  double h = st.initial_step(t, y, t1 - t0);
  st.eval(t, y, st.k1);
  while (t < t1) {
    const double remaining = t1 - t;
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    if (h < cfg.min_step && !last) {
      throw StepUnderflowError(
          t, "step size underflow at t=" + std::to_string(t), std::move(arc));
    }
    const double err = st.attempt(t, y, h);
    if (err > 1.0) {
      ++arc.rejected_steps;
      const double fac = std::isfinite(err)
                             ? std::max(0.2, 0.9 * std::pow(err, -0.2))
                             : 0.2;
      h *= fac;
      if (last && h < cfg.min_step)
        throw StepUnderflowError(
            t, "step size underflow at t=" + std::to_string(t), std::move(arc));
      continue;
    }
    ++arc.accepted_steps;
    const double t_new = last ? t1 : t + h;
    st.prepare_dense(y, h);
    for (; m * stride < t_new - guard && m * stride < t1 - guard; ++m) {
      const double ts = m * stride;
      st.dense((ts - t) / h, out);
      arc.push(ts, out);
    }
    t = t_new;
    y = st.y1;
    st.k1 = st.k7;  // FSAL
    const double fac =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(h * fac, cfg.max_step);
  }
  arc.push(t1, y);
  return arc;
}

}  // namespace wci
