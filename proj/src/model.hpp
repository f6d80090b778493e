#pragma once

// Wilson-Cowan excitatory/inhibitory pair: sigmoid, vector field, analytic
// Jacobian, equilibrium search and Hurwitz classification.

#include <array>
#include <complex>
#include <vector>

namespace wci {

struct SigmoidParams {
  double slope = 1.0;      // a
  double threshold = 0.0;  // position of maximum slope

  void validate() const;
  bool operator==(const SigmoidParams &) const = default;
};

struct PopulationParams {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double ke = 0, ki = 0, re = 0, ri = 0;
  double P = 0, Q = 0;
  double mu_e = 1, mu_i = 1;
  SigmoidParams sig_e, sig_i;

  void validate() const;
  PopulationParams with_time_constants(double mu_e, double mu_i) const;
  bool operator==(const PopulationParams &) const = default;
};

struct State2 {
  double E = 0;
  double I = 0;

  bool operator==(const State2 &) const = default;
};

inline State2 operator+(State2 a, State2 b) { return {a.E + b.E, a.I + b.I}; }
inline State2 operator-(State2 a, State2 b) { return {a.E - b.E, a.I - b.I}; }
double norm(State2 s);

/// Row-major 2x2 matrix.
using Matrix2 = std::array<std::array<double, 2>, 2>;

struct EigenPair {
  std::complex<double> first;
  std::complex<double> second;

  double max_real() const;
};

/// S(x) = 1/(1+exp(-a(x-theta))) - 1/(1+exp(a theta)); S(0) = 0.
double sigmoid(const SigmoidParams &p, double x);
double sigmoid_derivative(const SigmoidParams &p, double x);

/// Numerators of the rate equations (the mu-free F(E, I)).
State2 unscaled_field(const PopulationParams &p, State2 s);
/// F divided componentwise by (mu_e, mu_i).
State2 vector_field(const PopulationParams &p, State2 s);
/// Analytic Jacobian of the unscaled field.
Matrix2 jacobian(const PopulationParams &p, State2 s);

EigenPair eigenvalues(const Matrix2 &m);
bool is_hurwitz(const Matrix2 &m);

struct SteadyState {
  State2 point;
  Matrix2 jacobian{};
  EigenPair eigen;
  bool hurwitz = false;
};

struct SteadyStateReport {
  std::vector<SteadyState> points;
  double domain_bound = 1.0;
  int grid_n = 64;

  std::vector<std::size_t> stable_indices() const;
};

struct NewtonOptions {
  int max_iterations = 50;
  double residual_tol = 1e-10;
  double merge_tol = 1e-6;
};

/// Newton iterations seeded from a grid_n x grid_n grid over [-bound, bound]^2.
/// Roots are sorted by (E, I). Throws NoConvergence if no seed converges.
SteadyStateReport find_steady_states(const PopulationParams &p,
                                     double bound = 1.0, int grid_n = 64,
                                     const NewtonOptions &opts = {});

}  // namespace wci
