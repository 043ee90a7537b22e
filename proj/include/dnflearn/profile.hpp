#pragma once

#include <string>

namespace dnflearn {

// Scale constants that drive the length classes, the noise rate and the growth caps.
// The "paper" preset keeps the asymptotic constants (tau = 1000k); "desk" shrinks
// them so that instances with genuinely long terms fit in small dimensions.
struct ScaleProfile {
  std::string name = "desk";
  int k = 1;
  int tau = 4;             // short terms have length <= tau
  double rho = 0.975;      // 1 - 1/(10 tau)
  int medium_cutoff = 8;   // long terms have length > medium_cutoff
  int stem_slack = 2;      // 2k
  int r_max = 8;           // medium_cutoff * k
  double gap = 1.0 / 16;   // noised-value jump that marks a relevant flip

  static ScaleProfile paper(int k);
  static ScaleProfile desk(int k);
  // Derives rho, stem_slack, r_max and gap = 1/(2 r_max) from tau and medium_cutoff.
  static ScaleProfile custom(int k, int tau, int medium_cutoff);

  // Throws ConfigError when the derived-field relations do not hold.
  void validate() const;

  bool is_short(int len) const { return len <= tau; }
  bool is_long(int len) const { return len > medium_cutoff; }

  std::string to_json() const;
};

// Parses "paper", "desk", or a path to a key=value file with keys
// tau, medium_cutoff (and optionally name).
ScaleProfile load_profile(const std::string& spec, int k);

}  // namespace dnflearn
