#pragma once

// Coefficient sets and impulse instant generators shared by the builtin
// scenarios and the coupled attractor model.

#include <vector>

#include "hybrid.hpp"
#include "model.hpp"

namespace wci {

/// t_i = (slope * i + offset) / divisor for i = first..last.
struct InstantGenerator {
  double slope = 1;
  double offset = 0;
  double divisor = 1;
  int first = 1;
  int last = 0;

  std::vector<double> expand() const;
  bool operator==(const InstantGenerator &) const = default;
};

namespace presets {

PopulationParams model0();
PopulationParams three_states();
PopulationParams oscillator();

InstantGenerator model0_theta();
InstantGenerator model0_eta();
InstantGenerator coupled_theta();
InstantGenerator coupled_eta();

ImpulseSchedule model0_schedule();
ImpulseSchedule three_state_schedule();

}  // namespace presets

struct CoupledModel {
  System system;
  ImpulseSchedule schedule;
};

/// Three-state pair with mu_e = mu_i = mu and its impulses, concatenated
/// with the unimpulsed oscillator pair (unit time constants).
CoupledModel coupled_system(double mu);

}  // namespace wci
