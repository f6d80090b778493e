#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"

namespace wci {

/// One component of a jump map, as a coefficient table:
///
///   mu^mu_power * alpha * x^(power_num/power_den) * (x - shift)^shift_power
///     + gamma * sin(mu^2) * y + sum_k poly[k] * x^k
///
/// where x is the component's own activity and y the partner activity
/// (x = E, y = I for the excitatory component and vice versa).
struct JumpTerm {
  double alpha = 0;
  int power_num = 0;
  int power_den = 1;
  double shift = 0;
  int shift_power = 0;
  int mu_power = 0;
  double gamma = 0;
  std::vector<double> poly;

  void validate() const;
  bool depends_on_mu() const { return gamma != 0 || (alpha != 0 && mu_power != 0); }
  bool is_zero() const;
  bool operator==(const JumpTerm &) const = default;
};

enum class NegativeBasePolicy { Clamp, Reject };

/// Result of evaluating a term. `clamped` is set when an even root saw a base
/// below -1e-9 and clamped it to zero.
struct TermValue {
  double value = 0;
  bool clamped = false;
};

TermValue evaluate(const JumpTerm &term, double own, double other, double mu,
                   NegativeBasePolicy policy = NegativeBasePolicy::Clamp);

struct JumpMap {
  std::string preset;  // registry label; informational once expanded
  JumpTerm E;
  JumpTerm I;

  bool is_identity() const { return E.is_zero() && I.is_zero(); }
  bool operator==(const JumpMap &) const = default;
};

/// Built-in maps: "identity", "swap-model0", "singular-model0",
/// "quadratic-3states". Throws Config for unknown names.
JumpMap jump_preset(std::string_view name);
std::vector<std::string> jump_preset_names();

}  // namespace wci
