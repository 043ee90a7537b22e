#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dnflearn/config_file.hpp"
#include "dnflearn/generate.hpp"
#include "dnflearn/learner.hpp"

namespace dnflearn {

// A grid of learning trials. Cells run in the order n, k, lengths, profile (outermost
// first); every cell runs `trials` trials and trial t of the whole experiment uses
// derive_seed(seed, t).
struct ExperimentSpec {
  std::string name = "experiment";
  std::vector<int> ns{10};
  std::vector<int> ks{2};
  std::vector<LengthProfile> lengths{LengthProfile::uniform(1, 4)};
  std::vector<std::string> profiles{"desk"};
  int trials = 10;
  std::uint64_t seed = 1;
  NoiseMode noise = NoiseMode::kExactIe;
  CapPolicy cap;
  int reps = 0;  // 0: default for (k, n)
  bool audit = true;
  bool wall_time = false;  // wall time makes records machine dependent

  void validate() const;
  int cells() const;
  // Keys: name, n, k, lengths (';'-separated), profile, trials, seed, oracle, cap_policy,
  // cap, cap_c0, cap_c, cap_w, reps, audit, wall_time. Lists are comma-separated.
  static ExperimentSpec from_key_values(const KeyValues& kv);
};

inline constexpr int kResultSchema = 1;

struct ResultRecord {
  int schema = kResultSchema;
  std::string experiment;
  int cell = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int k = 0;
  std::string lengths;
  std::string profile;
  std::string noise;
  std::string cap_policy;
  int reps = 0;
  std::string target;  // DNF text format

  std::string status;  // learned | incomplete | error | violation
  std::string reason;
  std::uint64_t mistakes = 0;
  std::uint64_t mq = 0;
  std::uint64_t eq = 0;
  int magic_moments = 0;
  std::uint64_t winnow_runs = 0;
  std::uint64_t relevant_updates = 0;
  int catalog_pairs = 0;
  std::uint64_t feature_count = 0;

  bool audited = false;
  bool recheck_ok = false;
  int violations = 0;
  bool magic_within_k = true;
  std::optional<double> wall_seconds;

  std::string to_json() const;
  static ResultRecord from_json(const std::string& line);
  static std::string csv_header();
  std::string csv_row() const;
};

// One trial of one grid cell; never throws for per-trial failures (they become
// "error" or "violation" records).
ResultRecord run_trial(const ExperimentSpec& spec, int cell, int trial);

// Runs the grid, writing one JSON line per trial to `jsonl` (and a CSV projection
// when `csv` is non-null). Returns the records.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec, std::ostream* jsonl = nullptr,
                                         std::ostream* csv = nullptr);

struct CellSummary {
  int cell = 0;
  int n = 0;
  int k = 0;
  std::string lengths;
  std::string profile;
  int trials = 0;
  int learned = 0;
  double median_mistakes = 0;
  double median_mq = 0;
  double median_eq = 0;
  int max_magic = 0;
};

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records);
std::string format_summary(const std::vector<CellSummary>& cells);

}  // namespace dnflearn
