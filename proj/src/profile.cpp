#include "dnflearn/profile.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dnflearn/config_file.hpp"
#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

int ceil_log2(int x) {
  int e = 0;
  while ((1LL << e) < x) ++e;
  return e;
}

ScaleProfile derive(std::string name, int k, int tau, int medium_cutoff) {
  if (k < 1) throw ConfigError("profile needs k >= 1");
  ScaleProfile p;
  p.name = std::move(name);
  p.k = k;
  p.tau = tau;
  p.rho = 1.0 - 1.0 / (10.0 * tau);
  p.medium_cutoff = medium_cutoff;
  p.stem_slack = 2 * k;
  p.r_max = medium_cutoff * k;
  p.gap = 1.0 / (2.0 * p.r_max);
  return p;
}

}  // namespace

ScaleProfile ScaleProfile::paper(int k) {
  const int tau = 1000 * k;
  // log k vanishes at k = 1; the cutoff never drops below tau.
  const double raw = 1000.0 * tau * std::log2(static_cast<double>(k));
  const int cutoff = std::max(tau, static_cast<int>(std::ceil(raw)));
  ScaleProfile p = derive("paper", k, tau, cutoff);
  p.gap = 1.0 / (static_cast<double>(k) * k * k);
  return p;
}

ScaleProfile ScaleProfile::desk(int k) {
  return derive("desk", k, 4 * k, 8 * k * ceil_log2(k + 1));
}

ScaleProfile ScaleProfile::custom(int k, int tau, int medium_cutoff) {
  ScaleProfile p = derive("custom", k, tau, medium_cutoff);
  p.validate();
  return p;
}

void ScaleProfile::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid scale profile: " + what); };
  if (k < 1) fail("k < 1");
  if (tau < k) fail("tau < k");
  if (medium_cutoff < tau) fail("medium_cutoff < tau");
  if (stem_slack != 2 * k) fail("stem_slack != 2k");
  if (r_max != medium_cutoff * k) fail("r_max != medium_cutoff * k");
  if (std::abs(rho - (1.0 - 1.0 / (10.0 * tau))) > 1e-15) fail("rho != 1 - 1/(10 tau)");
  if (!(gap > 0.0 && gap <= 1.0)) fail("gap outside (0, 1]");
}

std::string ScaleProfile::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["k"] = k;
  j["tau"] = tau;
  j["rho"] = rho;
  j["medium_cutoff"] = medium_cutoff;
  j["stem_slack"] = stem_slack;
  j["r_max"] = r_max;
  j["gap"] = gap;
  return j.dump();
}

ScaleProfile load_profile(const std::string& spec, int k) {
  if (spec == "paper") return ScaleProfile::paper(k);
  if (spec == "desk") return ScaleProfile::desk(k);
  const KeyValues kv = read_key_values(spec);
  const int tau = kv.get_int("tau", 4 * k);
  const int cutoff = kv.get_int("medium_cutoff", 2 * tau);
  ScaleProfile p = ScaleProfile::custom(k, tau, cutoff);
  p.name = kv.get_string("name", "custom");
  return p;
}

}  // namespace dnflearn
