#pragma once

// Parameter sets transcribed independently of the builtin scenario registry.

#include "model.hpp"

namespace fx {

inline wci::PopulationParams model0(double mu = 1.0) {
  wci::PopulationParams p;
  p.c1 = 12; p.c2 = 4; p.c3 = 13; p.c4 = 11;
  p.ke = 0.97; p.ki = 0.98; p.re = 1; p.ri = 1;
  p.sig_e = {1.2, 2.8};
  p.sig_i = {1.0, 4.0};
  p.mu_e = p.mu_i = mu;
  return p;
}

inline wci::PopulationParams three_states(double mu = 1.0) {
  wci::PopulationParams p;
  p.c1 = 13; p.c2 = 4; p.c3 = 22; p.c4 = 2;
  p.ke = 0.97; p.ki = 0.98; p.re = 1; p.ri = 1;
  p.sig_e = {1.5, 2.5};
  p.sig_i = {6.0, 4.3};
  p.mu_e = p.mu_i = mu;
  return p;
}

inline wci::PopulationParams oscillator() {
  wci::PopulationParams p;
  p.c1 = 16; p.c2 = 12; p.c3 = 15; p.c4 = 3;
  p.ke = 0.97; p.ki = 0.98; p.re = 1; p.ri = 1;
  p.P = 1.25;
  p.sig_e = {1.3, 4.0};
  p.sig_i = {2.0, 3.7};
  return p;
}

}  // namespace fx
