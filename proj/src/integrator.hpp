#pragma once

// Adaptive Dormand-Prince 5(4) integration over one impulse-free interval,
// with dense output onto a fixed sampling grid.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "error.hpp"

namespace wci {

using Field = std::function<void(double t, std::span<const double> x,
                                 std::span<double> dxdt)>;

struct SolverConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.1;
  double min_step = 1e-12;
  double sample_stride = 1e-3;

  void validate() const;
  /// max_step capped at mu_min / 2 when mu_min < 0.05.
  SolverConfig for_time_constant(double mu_min) const;
  bool operator==(const SolverConfig &) const = default;
};

/// Samples of one continuous arc. States are stored row-major.
struct Arc {
  std::size_t dim = 0;
  std::vector<double> t;
  std::vector<double> x;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  std::span<const double> state(std::size_t k) const {
    return {x.data() + k * dim, dim};
  }
  std::span<const double> back() const { return state(size() - 1); }
  void push(double time, std::span<const double> s) {
    t.push_back(time);
    x.insert(x.end(), s.begin(), s.end());
  }
};

class StepUnderflowError : public TimedError {
 public:
  StepUnderflowError(double t, const std::string &what, Arc partial)
      : TimedError(ErrorCode::StepUnderflow, t, what),
        partial_(std::move(partial)) {}

  const Arc &partial() const noexcept { return partial_; }

 private:
  Arc partial_;
};

/// Integrates from t0 to t1 (landing exactly on t1). Samples: t0, every
/// multiple of sample_stride strictly inside (t0, t1), and t1.
/// Throws StepUnderflowError when the controller needs a step < min_step.
Arc integrate_segment(const Field &field, double t0, double t1,
                      std::span<const double> x0, const SolverConfig &cfg);

}  // namespace wci
