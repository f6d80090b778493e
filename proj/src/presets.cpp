#include "presets.hpp"

#include <cmath>

#include "error.hpp"

namespace wci {

std::vector<double> InstantGenerator::expand() const {
  if (!(divisor != 0) || !std::isfinite(slope) || !std::isfinite(offset) ||
      !std::isfinite(divisor))
    throw Error(ErrorCode::Config, "instant generator needs finite terms, divisor != 0");
  std::vector<double> out;
  for (int i = first; i <= last; ++i) out.push_back((slope * i + offset) / divisor);
  return out;
}

namespace presets {

namespace {

PopulationParams pair(double c1, double c2, double c3, double c4,
                      SigmoidParams se, SigmoidParams si, double P = 0) {
  PopulationParams p;
  p.c1 = c1; p.c2 = c2; p.c3 = c3; p.c4 = c4;
  p.ke = 0.97; p.ki = 0.98;
  p.re = 1; p.ri = 1;
  p.P = P;
  p.sig_e = se;
  p.sig_i = si;
  return p;
}

}  // namespace

PopulationParams model0() { return pair(12, 4, 13, 11, {1.2, 2.8}, {1.0, 4.0}); }
PopulationParams three_states() { return pair(13, 4, 22, 2, {1.5, 2.5}, {6.0, 4.3}); }
PopulationParams oscillator() {
  return pair(16, 12, 15, 3, {1.3, 4.0}, {2.0, 3.7}, 1.25);
}

InstantGenerator model0_theta() { return {2, 0, 3, 1, 20}; }
InstantGenerator model0_eta() { return {2, -1, 3, 1, 20}; }
InstantGenerator coupled_theta() { return {2, 4.95, 1, 1, 50}; }
InstantGenerator coupled_eta() { return {2, 3.95, 1, 1, 50}; }

ImpulseSchedule model0_schedule() {
  ImpulseSchedule s;
  s.theta_instants = model0_theta().expand();
  s.eta_instants = model0_eta().expand();
  s.regular_jump = jump_preset("swap-model0");
  s.singular_jump = jump_preset("singular-model0");
  return s;
}

ImpulseSchedule three_state_schedule() {
  ImpulseSchedule s;
  s.theta_instants = coupled_theta().expand();
  s.eta_instants = coupled_eta().expand();
  s.regular_jump = jump_preset("quadratic-3states");
  s.singular_jump = jump_preset("singular-model0");
  return s;
}

}  // namespace presets

CoupledModel coupled_system(double mu) {
  if (!(mu > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");
  return {System::coupled(presets::three_states().with_time_constants(mu, mu),
                          presets::oscillator()),
          presets::three_state_schedule()};
}

}  // namespace wci
