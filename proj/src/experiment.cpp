#include "dnflearn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dnflearn/dnf_text.hpp"
#include "dnflearn/errors.hpp"

namespace dnflearn {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> int_list(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (const std::string& item : split(s, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + item + "' for key " + key);
    }
  }
  return out;
}

struct Cell {
  int n;
  int k;
  const LengthProfile* lengths;
  const std::string* profile;
};

Cell cell_at(const ExperimentSpec& spec, int cell) {
  int c = cell;
  const int np = static_cast<int>(spec.profiles.size());
  const int nl = static_cast<int>(spec.lengths.size());
  const int nk = static_cast<int>(spec.ks.size());
  const int p = c % np;
  c /= np;
  const int l = c % nl;
  c /= nl;
  const int k = c % nk;
  c /= nk;
  return {spec.ns.at(static_cast<std::size_t>(c)), spec.ks[static_cast<std::size_t>(k)],
          &spec.lengths[static_cast<std::size_t>(l)], &spec.profiles[static_cast<std::size_t>(p)]};
}

}  // namespace

void ExperimentSpec::validate() const {
  if (ns.empty() || ks.empty() || lengths.empty() || profiles.empty()) {
    throw ConfigError("experiment grid has an empty axis");
  }
  if (trials < 1) throw ConfigError("experiment needs trials >= 1");
  for (int n : ns)
    if (n < 1 || n > Teacher::kDefaultNCap) throw ConfigError("grid dimension outside 1..26");
  for (int k : ks)
    if (k < 1) throw ConfigError("grid k must be at least 1");
  if (reps < 0) throw ConfigError("reps must be nonnegative");
}

int ExperimentSpec::cells() const {
  return static_cast<int>(ns.size() * ks.size() * lengths.size() * profiles.size());
}

ExperimentSpec ExperimentSpec::from_key_values(const KeyValues& kv) {
  ExperimentSpec s;
  s.name = kv.get_string("name", s.name);
  if (kv.has("n")) s.ns = int_list(kv.get_string("n", ""), "n");
  if (kv.has("k")) s.ks = int_list(kv.get_string("k", ""), "k");
  if (kv.has("lengths")) {
    s.lengths.clear();
    for (const std::string& item : split(kv.get_string("lengths", ""), ';')) {
      try {
        s.lengths.push_back(parse_length_profile(item));
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (kv.has("profile")) s.profiles = split(kv.get_string("profile", ""), ',');
  s.trials = kv.get_int("trials", s.trials);
  s.seed = static_cast<std::uint64_t>(kv.get_int64("seed", static_cast<long long>(s.seed)));
  if (kv.has("oracle")) s.noise = parse_noise_mode(kv.get_string("oracle", ""));
  if (kv.has("cap_policy")) s.cap.kind = parse_cap_kind(kv.get_string("cap_policy", ""));
  if (kv.has("cap")) {
    s.cap.cap = static_cast<std::uint64_t>(kv.get_int64("cap", 1));
    if (!kv.has("cap_policy")) s.cap.kind = CapPolicy::Kind::kExplicit;
  }
  s.cap.c0 = kv.get_double("cap_c0", s.cap.c0);
  s.cap.c = kv.get_double("cap_c", s.cap.c);
  s.cap.w_est = kv.get_double("cap_w", s.cap.w_est);
  s.reps = kv.get_int("reps", s.reps);
  s.audit = kv.get_bool("audit", s.audit);
  s.wall_time = kv.get_bool("wall_time", s.wall_time);
  s.validate();
  return s;
}

std::string ResultRecord::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = schema;
  j["experiment"] = experiment;
  j["cell"] = cell;
  j["trial"] = trial;
  j["seed"] = seed;
  j["config"] = {{"n", n},           {"k", k},           {"lengths", lengths}, {"profile", profile},
                 {"noise", noise},   {"cap_policy", cap_policy}, {"reps", reps}};
  j["target"] = target;
  j["status"] = status;
  j["reason"] = reason;
  j["mistakes"] = mistakes;
  j["mq"] = mq;
  j["eq"] = eq;
  j["magic_moments"] = magic_moments;
  j["winnow_runs"] = winnow_runs;
  j["relevant_updates"] = relevant_updates;
  j["catalog_pairs"] = catalog_pairs;
  j["feature_count"] = feature_count;
  j["audit"] = {{"audited", audited},
                {"recheck_ok", recheck_ok},
                {"violations", violations},
                {"magic_within_k", magic_within_k}};
  if (wall_seconds) j["wall_seconds"] = *wall_seconds;
  return j.dump();
}

ResultRecord ResultRecord::from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("result record is not JSON: ") + e.what());
  }
  ResultRecord r;
  try {
    r.schema = j.at("schema").get<int>();
    if (r.schema != kResultSchema) throw InputError("unsupported result schema " + std::to_string(r.schema));
    r.experiment = j.at("experiment").get<std::string>();
    r.cell = j.at("cell").get<int>();
    r.trial = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& c = j.at("config");
    r.n = c.at("n").get<int>();
    r.k = c.at("k").get<int>();
    r.lengths = c.at("lengths").get<std::string>();
    r.profile = c.at("profile").get<std::string>();
    r.noise = c.at("noise").get<std::string>();
    r.cap_policy = c.at("cap_policy").get<std::string>();
    r.reps = c.at("reps").get<int>();
    r.target = j.at("target").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.reason = j.at("reason").get<std::string>();
    r.mistakes = j.at("mistakes").get<std::uint64_t>();
    r.mq = j.at("mq").get<std::uint64_t>();
    r.eq = j.at("eq").get<std::uint64_t>();
    r.magic_moments = j.at("magic_moments").get<int>();
    r.winnow_runs = j.at("winnow_runs").get<std::uint64_t>();
    r.relevant_updates = j.at("relevant_updates").get<std::uint64_t>();
    r.catalog_pairs = j.at("catalog_pairs").get<int>();
    r.feature_count = j.at("feature_count").get<std::uint64_t>();
    const auto& a = j.at("audit");
    r.audited = a.at("audited").get<bool>();
    r.recheck_ok = a.at("recheck_ok").get<bool>();
    r.violations = a.at("violations").get<int>();
    r.magic_within_k = a.at("magic_within_k").get<bool>();
    if (j.contains("wall_seconds")) r.wall_seconds = j.at("wall_seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed result record: ") + e.what());
  }
  return r;
}

std::string ResultRecord::csv_header() {
  return "experiment,cell,trial,seed,n,k,lengths,profile,noise,cap_policy,reps,status,mistakes,mq,eq,"
         "magic_moments,winnow_runs,relevant_updates,catalog_pairs,feature_count,recheck_ok,violations,"
         "wall_seconds";
}

std::string ResultRecord::csv_row() const {
  // Only `experiment` and `lengths` can hold commas; they are quoted.
  std::ostringstream o;
  o << '"' << experiment << "\"," << cell << ',' << trial << ',' << seed << ',' << n << ',' << k << ",\""
    << lengths << "\"," << profile << ',' << noise << ',' << cap_policy << ',' << reps << ',' << status << ','
    << mistakes << ',' << mq << ',' << eq << ',' << magic_moments << ',' << winnow_runs << ','
    << relevant_updates << ',' << catalog_pairs << ',' << feature_count << ',' << (recheck_ok ? 1 : 0) << ','
    << violations << ',';
  if (wall_seconds) o << *wall_seconds;
  return o.str();
}

ResultRecord run_trial(const ExperimentSpec& spec, int cell, int trial) {
  const Cell c = cell_at(spec, cell);
  ResultRecord r;
  r.experiment = spec.name;
  r.cell = cell;
  r.trial = trial;
  r.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial));
  r.n = c.n;
  r.k = c.k;
  r.lengths = c.lengths->describe();
  r.profile = *c.profile;
  r.noise = noise_mode_name(spec.noise);
  r.cap_policy = spec.cap.name();
  r.audited = spec.audit;

  const auto start = std::chrono::steady_clock::now();
  try {
    Rng rng(r.seed);
    const Dnf f = gen_random_dnf(c.n, c.k, *c.lengths, rng);
    r.target = format_dnf(f);
    LearnerConfig cfg;
    cfg.profile = load_profile(*c.profile, c.k);
    cfg.noise = NoiseOracle{spec.noise, 0, 0};
    cfg.cap = spec.cap;
    cfg.stem.reps = spec.reps > 0 ? spec.reps : StemFinderConfig::default_reps(c.k, c.n);
    cfg.stem.seed = derive_seed(r.seed, 1);
    cfg.seed = derive_seed(r.seed, 2);
    cfg.audit = spec.audit;
    r.reps = cfg.stem.reps;

    Teacher teacher(f);
    const RunReport rep = learn_dnf(teacher, cfg);
    r.status = run_status_name(rep.status);
    r.reason = rep.reason;
    r.mistakes = rep.mistakes;
    r.mq = rep.queries.mq_count;
    r.eq = rep.queries.eq_count;
    r.magic_moments = rep.magic_moments;
    r.winnow_runs = rep.winnow_runs;
    r.relevant_updates = rep.relevant_updates;
    r.catalog_pairs = rep.catalog_pairs;
    r.feature_count = rep.feature_count;
    r.recheck_ok = rep.recheck_ok;
    r.violations = static_cast<int>(rep.violations.size());
    r.magic_within_k = !rep.learned() || rep.magic_moments <= c.k;
  } catch (const ContractViolation& e) {
    r.status = "violation";
    r.reason = e.what();
  } catch (const std::exception& e) {
    r.status = "error";
    r.reason = e.what();
  }
  if (spec.wall_time) {
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec, std::ostream* jsonl, std::ostream* csv) {
  spec.validate();
  std::vector<ResultRecord> out;
  if (csv != nullptr) *csv << ResultRecord::csv_header() << '\n';
  int trial = 0;
  for (int cell = 0; cell < spec.cells(); ++cell) {
    for (int t = 0; t < spec.trials; ++t, ++trial) {
      ResultRecord r = run_trial(spec, cell, trial);
      if (jsonl != nullptr) *jsonl << r.to_json() << '\n' << std::flush;
      if (csv != nullptr) *csv << r.csv_row() << '\n';
      out.push_back(std::move(r));
    }
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

}  // namespace

std::vector<CellSummary> summarize(const std::vector<ResultRecord>& records) {
  std::map<int, std::vector<const ResultRecord*>> by_cell;
  for (const ResultRecord& r : records) by_cell[r.cell].push_back(&r);
  std::vector<CellSummary> out;
  for (const auto& [cell, rs] : by_cell) {
    CellSummary s;
    s.cell = cell;
    s.n = rs.front()->n;
    s.k = rs.front()->k;
    s.lengths = rs.front()->lengths;
    s.profile = rs.front()->profile;
    s.trials = static_cast<int>(rs.size());
    std::vector<double> mistakes, mq, eq;
    for (const ResultRecord* r : rs) {
      if (r->status == "learned") ++s.learned;
      mistakes.push_back(static_cast<double>(r->mistakes));
      mq.push_back(static_cast<double>(r->mq));
      eq.push_back(static_cast<double>(r->eq));
      s.max_magic = std::max(s.max_magic, r->magic_moments);
    }
    s.median_mistakes = median(mistakes);
    s.median_mq = median(mq);
    s.median_eq = median(eq);
    out.push_back(s);
  }
  return out;
}

std::string format_summary(const std::vector<CellSummary>& cells) {
  std::ostringstream o;
  o << std::left << std::setw(5) << "cell" << std::setw(5) << "n" << std::setw(4) << "k" << std::setw(18)
    << "lengths" << std::setw(9) << "profile" << std::setw(10) << "learned" << std::setw(12) << "mistakes"
    << std::setw(14) << "mq" << std::setw(10) << "eq"
    << "magic\n";
  o << std::fixed << std::setprecision(1);
  for (const CellSummary& s : cells) {
    o << std::left << std::setw(5) << s.cell << std::setw(5) << s.n << std::setw(4) << s.k << std::setw(18)
      << s.lengths << std::setw(9) << s.profile << std::setw(10)
      << (std::to_string(s.learned) + "/" + std::to_string(s.trials)) << std::setw(12) << s.median_mistakes
      << std::setw(14) << s.median_mq << std::setw(10) << s.median_eq << s.max_magic << '\n';
  }
  return o.str();
}

}  // namespace dnflearn
