#pragma once

// Built-in property suite behind `so3seek validate`.

#include <cstdint>
#include <string>
#include <vector>

#include "so3seek/sim.hpp"

namespace so3seek {

struct PropertyResult {
  std::string name;
  int samples = 0;
  double worst = 0.0;      // worst observed value of the checked quantity
  double tolerance = 0.0;  // pass iff worst <= tolerance
  bool passed = false;
};

struct ValidateOptions {
  int samples = 2000;
  std::uint64_t seed = 20240601;
};

PropertyResult check_exp_log_roundtrip(const ValidateOptions& opt);
PropertyResult check_metric_ordering(const ValidateOptions& opt);
PropertyResult check_ad_invariance(const ValidateOptions& opt);
PropertyResult check_bracket_skew_identity(const ValidateOptions& opt);
PropertyResult check_exp_coord_derivative(const ValidateOptions& opt);
PropertyResult check_field_gradients(const ValidateOptions& opt);
PropertyResult check_weyl_chain(const ValidateOptions& opt);
PropertyResult check_pair_displacement(const ValidateOptions& opt);
/// Single agent tracking a rotating R_d with full feed-forward; worst value
/// is the relative error of the fitted log-decay slope against -k_w.
/// `law` replaces the controller (fault injection).
PropertyResult check_decay_slope(const ValidateOptions& opt, const ControlLaw& law = {});

std::vector<PropertyResult> run_validation(const ValidateOptions& opt);

}  // namespace so3seek
