#include "jump_map.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace wci {

namespace {

constexpr double kNegativeSlack = 1e-9;

double int_pow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

TermValue rational_pow(double x, int num, int den, NegativeBasePolicy policy) {
  if (num == 0) return {1.0, false};
  if (x >= 0) return {std::pow(x, static_cast<double>(num) / den), false};
  if (den % 2 != 0) {
    // Real root of a negative base; sign follows the numerator's parity.
    const double root = den == 3 ? std::cbrt(x) : -std::pow(-x, 1.0 / den);
    return {int_pow(root, num), false};
  }
  if (policy == NegativeBasePolicy::Reject)
    throw Error(ErrorCode::Domain, "even root of a negative activity");
  return {0.0, x < -kNegativeSlack};
}

}  // namespace

void JumpTerm::validate() const {
  if (power_den <= 0 || power_num < 0)
    throw Error(ErrorCode::Config, "jump power must be a non-negative rational");
  if (shift_power < 0 || mu_power < 0 || mu_power > 1)
    throw Error(ErrorCode::Config, "jump shift_power must be >= 0, mu_power 0 or 1");
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(alpha) || bad(shift) || bad(gamma) ||
      std::any_of(poly.begin(), poly.end(), bad))
    throw Error(ErrorCode::Config, "jump coefficients must be finite");
}

bool JumpTerm::is_zero() const {
  return alpha == 0 && gamma == 0 &&
         std::all_of(poly.begin(), poly.end(), [](double c) { return c == 0; });
}

TermValue evaluate(const JumpTerm &term, double own, double other, double mu,
                   NegativeBasePolicy policy) {
  TermValue out;
  if (term.alpha != 0) {
    const TermValue base =
        rational_pow(own, term.power_num, term.power_den, policy);
    out.clamped = base.clamped;
    out.value = int_pow(mu, term.mu_power) * term.alpha * base.value *
                int_pow(own - term.shift, term.shift_power);
  }
  if (term.gamma != 0) out.value += term.gamma * std::sin(mu * mu) * other;
  // Horner
  double p = 0;
  for (auto it = term.poly.rbegin(); it != term.poly.rend(); ++it)
    p = p * own + *it;
  out.value += p;
  return out;
}

JumpMap jump_preset(std::string_view name) {
  JumpMap m;
  m.preset = std::string(name);
  if (name == "identity") return m;
  if (name == "swap-model0") {
    m.E.poly = {0.44234, -2.0};
    m.I.poly = {0.22751, -2.0};
    return m;
  }
  if (name == "singular-model0") {
    m.E = {.alpha = -1.0, .power_num = 1, .power_den = 2, .shift = 0.44234,
           .shift_power = 2, .mu_power = 1, .gamma = -1.0, .poly = {}};
    m.I = {.alpha = -1.0, .power_num = 1, .power_den = 3, .shift = 0.22751,
           .shift_power = 3, .mu_power = 1, .gamma = -1.0, .poly = {}};
    return m;
  }
  if (name == "quadratic-3states") {
    m.E.poly = {0.45064, -3.58612, 6.741};
    m.I.poly = {0.49, -3.85682, 6.6087};
    return m;
  }
  throw Error(ErrorCode::Config, "unknown jump map preset '" + std::string(name) + "'");
}

std::vector<std::string> jump_preset_names() {
  return {"identity", "swap-model0", "singular-model0", "quadratic-3states"};
}

}  // namespace wci
