#include "dnflearn/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

int ceil_log2(std::uint64_t x) {
  int e = 0;
  while (e < 63 && (std::uint64_t{1} << e) < x) ++e;
  return e;
}

std::uint64_t saturate(double v) {
  if (!(v < static_cast<double>(kCapCeiling))) return kCapCeiling;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(v)));
}

}  // namespace

std::string CapPolicy::name() const {
  switch (kind) {
    case Kind::kExplicit:
      return "explicit";
    case Kind::kPaper:
      return "paper";
    case Kind::kLinear:
      return "linear";
    case Kind::kQuadLog:
      return "quadlog";
  }
  return "?";
}

CapPolicy::Kind parse_cap_kind(const std::string& s) {
  if (s == "explicit") return CapPolicy::Kind::kExplicit;
  if (s == "paper") return CapPolicy::Kind::kPaper;
  if (s == "linear") return CapPolicy::Kind::kLinear;
  if (s == "quadlog") return CapPolicy::Kind::kQuadLog;
  throw ConfigError("unknown cap policy '" + s + "' (explicit|paper|linear|quadlog)");
}

std::uint64_t mmax(const CapPolicy& policy, std::uint64_t fcs_bound, int n, int k, std::uint64_t feature_count) {
  if (fcs_bound == 0) throw ConfigError("candidate-stem bound must be positive");
  const int log_n = std::max(ceil_log2(static_cast<std::uint64_t>(n)), 1);
  switch (policy.kind) {
    case CapPolicy::Kind::kExplicit:
      if (policy.cap < 1) throw ConfigError("explicit cap must be at least 1");
      return std::min(policy.cap, kCapCeiling);
    case CapPolicy::Kind::kPaper: {
      const double base = static_cast<double>(fcs_bound) / (static_cast<double>(n) * log_n);
      const int lk = ceil_log2(static_cast<std::uint64_t>(std::max(k, 1)));
      return saturate(std::pow(base, lk * lk * lk) * log_n);
    }
    case CapPolicy::Kind::kLinear:
      return saturate(policy.c0 * static_cast<double>(n + feature_count) * policy.w_est);
    case CapPolicy::Kind::kQuadLog:
      return saturate(policy.c * policy.w_est * policy.w_est * std::max(ceil_log2(feature_count), 1));
  }
  return 1;
}

double kappa_schedule(double kappa, std::uint64_t expected_calls) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0, 1)");
  if (expected_calls < 1) throw ConfigError("expected call count must be at least 1");
  return kappa / static_cast<double>(expected_calls);
}

const char* run_status_name(RunStatus s) { return s == RunStatus::kLearned ? "learned" : "incomplete"; }

std::string RunReport::to_json(bool include_wall_time) const {
  nlohmann::ordered_json j;
  j["status"] = run_status_name(status);
  if (!reason.empty()) j["reason"] = reason;
  j["queries"] = nlohmann::ordered_json::parse(queries.to_json());
  j["winnow_runs"] = winnow_runs;
  j["mistakes"] = mistakes;
  j["magic_moments"] = magic_moments;
  j["relevant_updates"] = relevant_updates;
  j["frv_calls"] = frv_calls;
  j["skipped_pairs"] = skipped_pairs;
  j["allpos"] = allpos;
  j["stem_reps"] = stem_reps;
  j["last_cap"] = last_cap;
  j["catalog_pairs"] = catalog_pairs;
  j["feature_count"] = feature_count;
  j["max_r"] = max_r;
  j["per_call_kappa"] = per_call_kappa;
  j["noise_samples"] = noise_samples;
  nlohmann::ordered_json mm = nlohmann::ordered_json::array();
  for (const MagicMomentRecord& r : magic) {
    mm.push_back({{"restart", r.restart},
                  {"positives", r.positives},
                  {"new_pairs", r.new_pairs},
                  {"newly_witnessed", r.newly_witnessed}});
  }
  j["magic"] = mm;
  j["warnings"] = warnings;
  j["violations"] = violations;
  if (rechecked) j["recheck_ok"] = recheck_ok;
  if (include_wall_time) j["wall_seconds"] = wall_seconds;
  return j.dump();
}

namespace {

class Learner {
 public:
  Learner(Teacher& teacher, const LearnerConfig& cfg)
      : teacher_(teacher),
        cfg_(cfg),
        n_(teacher.n()),
        k_(cfg.profile.k),
        catalog_(default_d_max(cfg.profile.k)),
        start_(std::chrono::steady_clock::now()) {
    cfg_.profile.validate();
    if (cfg_.stem.reps <= 0) cfg_.stem.reps = StemFinderConfig::default_reps(k_, n_);
    if (cfg_.max_magic_moments <= 0) cfg_.max_magic_moments = 2 * k_ + 2;
    report_.stem_reps = cfg_.stem.reps;
    noise_ = cfg_.noise;
  }

  RunReport run() {
    try {
      body();
    } catch (const ConfigError& e) {
      finish(RunStatus::kIncomplete, std::string("configuration limit: ") + e.what());
    }
    report_.queries = teacher_.stats();
    report_.catalog_pairs = catalog_.size();
    report_.feature_count = catalog_.feature_count();
    report_.max_r = catalog_.max_r();
    report_.catalog = catalog_;
    report_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (cfg_.audit && report_.learned()) {
      report_.rechecked = true;
      report_.recheck_ok = exhaustively_equal(teacher_.white_box_target(), LearnedHypothesis(report_.winnow));
      if (!report_.recheck_ok) report_.violations.push_back("learned hypothesis fails the exhaustive recheck");
      if (report_.magic_moments > k_) {
        report_.violations.push_back("learned after " + std::to_string(report_.magic_moments) +
                                     " magic moments, more than k");
      }
    }
    return std::move(report_);
  }

 private:
  void finish(RunStatus s, std::string reason) {
    report_.status = s;
    report_.reason = std::move(reason);
  }

  bool out_of_budget(std::uint64_t restarts) {
    const std::uint64_t restart_limit =
        cfg_.max_restarts > 0 ? cfg_.max_restarts
                              : static_cast<std::uint64_t>(k_) * static_cast<std::uint64_t>(cfg_.profile.r_max) *
                                        static_cast<std::uint64_t>(catalog_.size()) +
                                    static_cast<std::uint64_t>(k_) + 1;
    if (restarts > restart_limit) {
      finish(RunStatus::kIncomplete, "restart limit " + std::to_string(restart_limit) + " reached");
      return true;
    }
    if (report_.magic_moments > cfg_.max_magic_moments) {
      finish(RunStatus::kIncomplete, "magic-moment limit " + std::to_string(cfg_.max_magic_moments) + " reached");
      return true;
    }
    if (cfg_.max_pairs > 0 && catalog_.size() > cfg_.max_pairs) {
      finish(RunStatus::kIncomplete, "catalog exceeded " + std::to_string(cfg_.max_pairs) + " pairs");
      return true;
    }
    if (cfg_.max_eqs > 0 && teacher_.stats().eq_count > cfg_.max_eqs) {
      finish(RunStatus::kIncomplete, "equivalence-query limit reached");
      return true;
    }
    if (cfg_.max_seconds > 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > cfg_.max_seconds) {
      finish(RunStatus::kIncomplete, "wall-time limit reached");
      return true;
    }
    return false;
  }

  // Sets the sampled oracle's per-evaluation budget for the coming run.
  void schedule_noise(std::uint64_t cap, std::uint64_t restart_limit) {
    if (cfg_.noise.mode != NoiseMode::kSampled) return;
    // Noised evaluations per run: every mistake may walk every pair, n + 1 points each.
    const double calls = static_cast<double>(restart_limit) * static_cast<double>(cap + 1) *
                         static_cast<double>(catalog_.size()) * static_cast<double>(n_ + 1);
    const std::uint64_t expected =
        calls >= 1e18 ? std::uint64_t{1'000'000'000'000'000'000} : static_cast<std::uint64_t>(std::max(calls, 1.0));
    const double per_call = kappa_schedule(cfg_.kappa, expected);
    noise_.samples = hoeffding_samples(cfg_.profile.gap, per_call);
    noise_.seed = derive_seed(cfg_.seed, 0x6e6f697365ULL);
    if (report_.per_call_kappa == 0.0 || per_call < report_.per_call_kappa) report_.per_call_kappa = per_call;
    report_.noise_samples = std::max(report_.noise_samples, noise_.samples);
  }

  std::vector<bool> witnessed() const {
    const Dnf& f = teacher_.white_box_target();
    std::vector<bool> w(static_cast<std::size_t>(f.k()), false);
    for (int i = 0; i < f.k(); ++i) {
      for (const EligiblePair& p : catalog_.pairs()) {
        if (is_valid_stem(p.stem, f.term(i), cfg_.profile.stem_slack)) {
          w[static_cast<std::size_t>(i)] = true;
          break;
        }
      }
    }
    return w;
  }

  void audit_restart(const std::vector<Assignment>& pos) {
    if (catalog_.max_r() > cfg_.profile.r_max) {
      report_.violations.push_back("auxiliary set larger than r_max");
    }
    for (const Assignment& y : pos) {
      if (std::find(allpos_.begin(), allpos_.end(), y) == allpos_.end()) {
        report_.violations.push_back("positive counterexample missing from ALLPOS");
        break;
      }
    }
    if (static_cast<std::uint64_t>(catalog_.size()) > pair_bound_) {
      report_.violations.push_back("catalog size " + std::to_string(catalog_.size()) + " above the bound " +
                                   std::to_string(pair_bound_));
    }
  }

  // Negative counterexample hook. Returns true when some R grew.
  bool grow_relevant(const Assignment& z) {
    for (int j = 0; j < catalog_.size(); ++j) {
      const EligiblePair& p = catalog_.pair(j);
      if (!p.stem.eval(z) || p.r.count() >= cfg_.profile.r_max) continue;
      const Assignment* y = nullptr;
      for (const Assignment& cand : allpos_) {
        if (p.stem.eval(cand)) {
          y = &cand;
          break;
        }
      }
      if (y == nullptr) {
        ++report_.skipped_pairs;
        if (report_.warnings.size() < 20) {
          report_.warnings.push_back("no positive example satisfies stem " + p.stem.to_string() + "; pair skipped");
        }
        continue;
      }
      ++report_.frv_calls;
      const FrvOutcome out = find_relevant_variable(teacher_, p.stem, p.r, *y, z, cfg_.profile, noise_,
                                                    frv_index_++, cfg_.frv);
      if (const auto* up = std::get_if<FrvUpdated>(&out)) {
        catalog_.add_to_r(j, up->var);
        ++report_.relevant_updates;
        return true;
      }
    }
    return false;
  }

  void magic_moment(const std::vector<Assignment>& pos, int restart) {
    MagicMomentRecord rec;
    rec.restart = restart;
    rec.positives = pos.size();
    const std::vector<bool> before = cfg_.audit ? witnessed() : std::vector<bool>{};
    for (std::size_t i = 0; i < pos.size(); ++i) {
      StemFinderConfig sc = cfg_.stem;
      sc.seed = derive_seed(cfg_.stem.seed, stem_calls_++);
      const StemSearchResult found = find_candidate_stems(teacher_, pos[i], sc);
      for (const EligiblePair& p : found.pairs) {
        if (catalog_.find_stem(p.stem) >= 0) continue;
        catalog_.add(p);
        ++rec.new_pairs;
      }
    }
    pair_bound_ += static_cast<std::uint64_t>(pos.size()) * stem_output_cap(cfg_.stem, n_);
    ++report_.magic_moments;
    if (cfg_.audit) {
      const std::vector<bool> after = witnessed();
      for (std::size_t i = 0; i < after.size(); ++i)
        if (after[i] && !before[i]) rec.newly_witnessed.push_back(static_cast<int>(i));
      if (rec.newly_witnessed.empty()) {
        report_.violations.push_back("magic moment " + std::to_string(report_.magic_moments) +
                                     " found no stem for an unwitnessed term");
      }
    }
    report_.magic.push_back(std::move(rec));
  }

  void body() {
    {
      const EqResult first = teacher_.eq(ConstantHypothesis(false));
      if (first.correct) {
        finish(RunStatus::kLearned, "");
        return;
      }
      allpos_.push_back(first.counterexample);
    }
    const std::uint64_t fcs = stem_output_cap(cfg_.stem, n_);
    for (std::uint64_t restart = 0;; ++restart) {
      if (out_of_budget(restart)) return;
      const std::uint64_t cap = mmax(cfg_.cap, fcs, n_, k_, catalog_.feature_count());
      report_.last_cap = cap;
      const std::uint64_t restart_limit =
          cfg_.max_restarts > 0 ? cfg_.max_restarts
                                : static_cast<std::uint64_t>(k_) * static_cast<std::uint64_t>(cfg_.profile.r_max) *
                                          static_cast<std::uint64_t>(catalog_.size()) +
                                      static_cast<std::uint64_t>(k_) + 1;
      schedule_noise(cap, restart_limit);

      auto w = std::make_shared<CatalogWinnow>(catalog_, n_, cfg_.alpha, 0.0, cfg_.max_dense_r);
      ++report_.winnow_runs;
      WinnowHooks hooks;
      hooks.on_positive = [&](const Assignment& y) { allpos_.push_back(y); };
      hooks.on_negative = [&](const Assignment& z) { return grow_relevant(z); };
      const WinnowExit exit = winnow_run(teacher_, *w, cap, hooks);
      report_.mistakes += exit.mistakes;
      report_.allpos = allpos_.size();
      if (cfg_.audit) audit_restart(exit.pos);

      switch (exit.kind) {
        case WinnowExitKind::kLearned:
          report_.winnow = std::move(w);
          finish(RunStatus::kLearned, "");
          return;
        case WinnowExitKind::kAborted:
          break;
        case WinnowExitKind::kCapExceeded:
          magic_moment(exit.pos, static_cast<int>(restart));
          break;
      }
    }
  }

  Teacher& teacher_;
  LearnerConfig cfg_;
  int n_;
  int k_;
  FeatureCatalog catalog_;
  NoiseOracle noise_;
  std::vector<Assignment> allpos_;
  std::uint64_t frv_index_ = 0;
  std::uint64_t stem_calls_ = 0;
  std::uint64_t pair_bound_ = 1;
  RunReport report_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

RunReport learn_dnf(Teacher& teacher, const LearnerConfig& cfg) {
  if (cfg.profile.k < 1) throw ConfigError("learner needs profile k >= 1");
  Learner learner(teacher, cfg);
  return learner.run();
}

}  // namespace dnflearn
