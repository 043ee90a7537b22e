// dnflearn: generate targets, run the learner, audit invariants, check PTFs and noise
// bounds, and run experiment grids.
//
// Exit codes: 0 learned / pass, 1 usage or input error, 2 incomplete, 3 invariant
// violation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dnflearn/audit_suite.hpp"
#include "dnflearn/aug_ptf.hpp"
#include "dnflearn/config_file.hpp"
#include "dnflearn/dnf_text.hpp"
#include "dnflearn/errors.hpp"
#include "dnflearn/experiment.hpp"
#include "dnflearn/generate.hpp"
#include "dnflearn/learner.hpp"
#include "dnflearn/noise.hpp"

using namespace dnflearn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIncomplete = 2;
constexpr int kExitViolation = 3;

// Relative output paths land in $DNFLEARN_OUT_DIR when it is set.
std::string output_path(const std::string& p) {
  if (p.empty() || p == "-") return p;
  const char* dir = std::getenv("DNFLEARN_OUT_DIR");
  if (dir == nullptr || std::filesystem::path(p).is_absolute()) return p;
  return (std::filesystem::path(dir) / p).string();
}

struct TargetOptions {
  std::string file;
  int n = 12;
  int k = 2;
  std::string lengths = "uniform:1,4";
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--target", file, "DNF text file (otherwise a random target is generated)");
    app->add_option("--n", n, "number of variables");
    app->add_option("--k", k, "number of terms");
    app->add_option("--lengths", lengths, "length profile: fixed:L | mixed:S,L[,num_long] | uniform:LO,HI | explicit:L1,...");
    app->add_option("--seed", seed, "master seed");
  }

  Dnf load() const {
    if (!file.empty()) return read_dnf_file(file);
    Rng rng(seed);
    return gen_random_dnf(n, k, parse_length_profile(lengths), rng);
  }
};

void write_or_print(const std::string& path, const std::string& text, bool append) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path(path), append ? std::ios::app : std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int cmd_gen(const TargetOptions& t, const std::string& out) {
  write_or_print(out, format_dnf(t.load()), false);
  return kExitOk;
}

struct LearnOptions {
  TargetOptions target;
  std::string config;
  std::string profile = "desk";
  int reps = 0;
  std::uint64_t cap = 0;
  std::string cap_policy;
  std::string oracle;
  std::string policy = "lex_min";
  std::string out;
  std::string transcript;
  bool audit = false;
  bool wall_time = false;
};

int cmd_learn(const LearnOptions& o) {
  const Dnf f = o.target.load();
  const KeyValues kv = o.config.empty() ? KeyValues{} : read_key_values(o.config);

  const int k = std::max(f.k(), 1);
  LearnerConfig cfg;
  cfg.profile = load_profile(kv.get_string("profile", o.profile), k);
  cfg.stem.reps = kv.get_int("reps", o.reps);
  cfg.stem.seed = derive_seed(o.target.seed, 1);
  cfg.seed = static_cast<std::uint64_t>(kv.get_int64("seed", static_cast<long long>(derive_seed(o.target.seed, 2))));
  if (o.reps > 0) cfg.stem.reps = o.reps;
  const std::string oracle = !o.oracle.empty() ? o.oracle : kv.get_string("oracle", "ie");
  cfg.noise.mode = parse_noise_mode(oracle);
  cfg.cap.kind = parse_cap_kind(kv.get_string("cap_policy", "quadlog"));
  if (kv.has("cap")) {
    cfg.cap.cap = static_cast<std::uint64_t>(kv.get_int64("cap", 1));
    if (!kv.has("cap_policy")) cfg.cap.kind = CapPolicy::Kind::kExplicit;
  }
  cfg.cap.c0 = kv.get_double("cap_c0", cfg.cap.c0);
  cfg.cap.c = kv.get_double("cap_c", cfg.cap.c);
  cfg.cap.w_est = kv.get_double("cap_w", cfg.cap.w_est);
  if (!o.cap_policy.empty()) cfg.cap.kind = parse_cap_kind(o.cap_policy);
  if (o.cap > 0) {
    cfg.cap.cap = o.cap;
    if (o.cap_policy.empty()) cfg.cap.kind = CapPolicy::Kind::kExplicit;
  }
  cfg.kappa = kv.get_double("kappa", cfg.kappa);
  cfg.alpha = kv.get_double("alpha", cfg.alpha);
  cfg.max_restarts = static_cast<std::uint64_t>(kv.get_int64("max_restarts", 0));
  cfg.max_seconds = kv.get_double("max_seconds", 0.0);
  cfg.frv.bisection = kv.get_bool("bisection", false);
  cfg.audit = o.audit || kv.get_bool("audit", false);

  CexPolicy policy;
  if (o.policy == "lex_min") {
    policy = CexPolicy::lex_min();
  } else if (o.policy == "positive_first") {
    policy = CexPolicy::positive_first_lex();
  } else if (o.policy == "random") {
    policy = CexPolicy::uniform_random(derive_seed(o.target.seed, 3));
  } else {
    throw ConfigError("unknown counterexample policy '" + o.policy + "'");
  }

  Teacher teacher(f, policy);
  std::ofstream transcript;
  if (!o.transcript.empty()) {
    transcript.open(output_path(o.transcript));
    if (!transcript) throw ConfigError("cannot write " + o.transcript);
    teacher.set_transcript(&transcript);
  }
  const RunReport rep = learn_dnf(teacher, cfg);
  const std::string line = rep.to_json(o.wall_time) + "\n";
  if (o.out.empty()) {
    std::cout << line;
  } else {
    write_or_print(o.out, line, true);
    std::cerr << run_status_name(rep.status) << ": " << rep.queries.eq_count << " EQs, " << rep.queries.mq_count
              << " MQs, " << rep.magic_moments << " magic moments\n";
  }
  if (!rep.violations.empty()) return kExitViolation;
  return rep.learned() ? kExitOk : kExitIncomplete;
}

int cmd_audit(std::uint64_t seed, const std::string& out) {
  AuditConfig cfg;
  if (seed != 0) cfg.seed = seed;
  std::ostringstream text;
  bool ok = true;
  for (const SuiteResult& r : run_audit_suite(cfg)) {
    text << r.to_json() << '\n';
    ok = ok && r.pass();
    std::cerr << (r.pass() ? "pass " : "FAIL ") << r.name << " (" << r.checked << " checks)\n";
    for (const std::string& a : r.failures) std::cerr << "  " << a << '\n';
  }
  write_or_print(out, text.str(), false);
  return ok ? kExitOk : kExitViolation;
}

// A fully expressive catalog: each term's stem drops its last min(|T|, 2k) literals
// into R.
FeatureCatalog canonical_catalog(const Dnf& f, int k) {
  FeatureCatalog catalog(default_d_max(k));
  for (const Term& t : f.terms()) {
    const std::vector<Literal> lits = t.literals();
    const int keep = std::max(0, static_cast<int>(lits.size()) - 2 * k);
    Term stem;
    VarSet r;
    for (int i = 0; i < static_cast<int>(lits.size()); ++i) {
      if (i < keep) {
        stem.add(lits[static_cast<std::size_t>(i)]);
      } else {
        r.set(lits[static_cast<std::size_t>(i)].var - 1);
      }
    }
    const int j = catalog.find_stem(stem);
    if (j < 0) {
      catalog.add({stem, r});
    } else {
      r.for_each_set([&](int b) { catalog.add_to_r(j, b + 1); });
    }
  }
  return catalog;
}

int cmd_verify_ptf(const TargetOptions& t, const std::string& out) {
  const Dnf f = t.load();
  const int k = std::max(f.k(), 1);
  const ScaleProfile profile = ScaleProfile::desk(k);
  const FeatureCatalog catalog = canonical_catalog(f, k);
  const AugPtf p = build_aug_ptf(f, catalog, profile);
  const bool ok = verify_ptf(f, p);
  if (!out.empty()) write_or_print(out, p.to_json() + "\n", false);
  std::cout << "{\"verified\":" << (ok ? "true" : "false") << ",\"monomials\":" << p.monomials.size()
            << ",\"degree\":" << p.degree << ",\"denominator\":\"" << p.denominator.get_str()
            << "\",\"total_weight\":\"" << p.total_weight.get_str() << "\"}\n";
  return ok ? kExitOk : kExitViolation;
}

int cmd_noise_check(const TargetOptions& t, const std::string& profile_spec, const std::string& out) {
  const Dnf f = t.load();
  const ScaleProfile profile = load_profile(profile_spec, std::max(f.k(), 1));
  const NoiseClaimsReport rep = check_noise_claims(f, profile, t.seed);
  write_or_print(out, rep.to_json() + "\n", false);
  return rep.pass() ? kExitOk : kExitViolation;
}

struct BenchOptions {
  std::string config;
  std::string n = "10";
  std::string k = "2";
  std::string lengths = "uniform:1,4";
  std::string profile = "desk";
  int trials = 5;
  std::uint64_t seed = 1;
  std::string oracle = "ie";
  std::string out;
  std::string csv;
  bool wall_time = false;
};

int cmd_bench(const BenchOptions& o) {
  ExperimentSpec spec;
  if (!o.config.empty()) {
    spec = ExperimentSpec::from_key_values(read_key_values(o.config));
  } else {
    std::ostringstream text;
    text << "name = bench\nn = " << o.n << "\nk = " << o.k << "\nlengths = " << o.lengths
         << "\nprofile = " << o.profile << "\ntrials = " << o.trials << "\nseed = " << o.seed
         << "\noracle = " << o.oracle << '\n';
    spec = ExperimentSpec::from_key_values(KeyValues::parse(text.str()));
  }
  if (o.wall_time) spec.wall_time = true;

  std::ofstream jsonl;
  std::ofstream csv;
  if (!o.out.empty()) {
    jsonl.open(output_path(o.out));
    if (!jsonl) throw ConfigError("cannot write " + o.out);
  }
  if (!o.csv.empty()) {
    csv.open(output_path(o.csv));
    if (!csv) throw ConfigError("cannot write " + o.csv);
  }
  const auto records = run_experiment(spec, o.out.empty() ? nullptr : &jsonl, o.csv.empty() ? nullptr : &csv);
  std::cout << format_summary(summarize(records));
  int code = kExitOk;
  for (const ResultRecord& r : records) {
    if (r.status == "violation" || r.violations > 0) return kExitViolation;
    if (r.status != "learned") code = kExitIncomplete;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact learning of k-term DNF with membership and equivalence queries"};
  app.require_subcommand(1);

  TargetOptions gen_target;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random target DNF");
  gen_target.add(gen);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  LearnOptions lo;
  auto* learn = app.add_subcommand("learn", "learn a target and print the run report");
  lo.target.add(learn);
  learn->add_option("--config", lo.config, "key = value learner config file");
  learn->add_option("--profile", lo.profile, "paper | desk | path to a profile file");
  learn->add_option("--reps", lo.reps, "stem-search repetitions (default from k and n)");
  learn->add_option("--cap", lo.cap, "explicit Winnow mistake cap");
  learn->add_option("--cap-policy", lo.cap_policy, "explicit | paper | linear | quadlog");
  learn->add_option("--oracle", lo.oracle, "noise oracle: enum | ie | sampled");
  learn->add_option("--policy", lo.policy, "counterexample policy: lex_min | positive_first | random");
  learn->add_option("--out", lo.out, "append the JSON report to this file");
  learn->add_option("--transcript", lo.transcript, "write the query transcript (JSON lines)");
  learn->add_flag("--audit", lo.audit, "check run invariants against the hidden target");
  learn->add_flag("--wall-time", lo.wall_time, "include wall time in the report");

  std::uint64_t audit_seed = 0;
  std::string audit_out;
  auto* audit = app.add_subcommand("audit", "run every invariant and bound suite");
  audit->add_option("--seed", audit_seed, "suite seed");
  audit->add_option("--out", audit_out, "write suite results (JSON lines)");

  TargetOptions ptf_target;
  std::string ptf_out;
  auto* ptf = app.add_subcommand("verify-ptf", "build the augmented PTF for a target and verify it exhaustively");
  ptf_target.add(ptf);
  ptf->add_option("--out", ptf_out, "write the PTF as JSON");

  TargetOptions noise_target;
  std::string noise_profile = "desk";
  std::string noise_out;
  auto* noise = app.add_subcommand("noise-check", "check the noise-operator bounds on a target");
  noise_target.add(noise);
  noise->add_option("--profile", noise_profile, "paper | desk | path to a profile file");
  noise->add_option("--out", noise_out, "write the report");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "run an experiment grid and print a summary table");
  bench->add_option("--config", bo.config, "experiment spec file (key = value)");
  bench->add_option("--n", bo.n, "comma-separated dimensions");
  bench->add_option("--k", bo.k, "comma-separated term counts");
  bench->add_option("--lengths", bo.lengths, "';'-separated length profiles");
  bench->add_option("--profile", bo.profile, "comma-separated profiles");
  bench->add_option("--trials", bo.trials, "trials per cell");
  bench->add_option("--seed", bo.seed, "master seed");
  bench->add_option("--oracle", bo.oracle, "noise oracle: enum | ie | sampled");
  bench->add_option("--out", bo.out, "JSONL results");
  bench->add_option("--csv", bo.csv, "CSV projection of the results");
  bench->add_flag("--wall-time", bo.wall_time, "record wall time per trial");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_target, gen_out);
    if (learn->parsed()) return cmd_learn(lo);
    if (audit->parsed()) return cmd_audit(audit_seed, audit_out);
    if (ptf->parsed()) return cmd_verify_ptf(ptf_target, ptf_out);
    if (noise->parsed()) return cmd_noise_check(noise_target, noise_profile, noise_out);
    if (bench->parsed()) return cmd_bench(bo);
  } catch (const ContractViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
