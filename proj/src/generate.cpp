#include "dnflearn/generate.hpp"

#include <algorithm>
#include <sstream>

#include "dnflearn/errors.hpp"

namespace dnflearn {

int LengthProfile::max_length() const {
  switch (kind) {
    case Kind::kFixed:
      return a;
    case Kind::kMixed:
    case Kind::kUniform:
      return std::max(a, b);
    case Kind::kExplicit:
      return lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
  }
  return 0;
}

std::string LengthProfile::describe() const {
  switch (kind) {
    case Kind::kFixed:
      return "fixed:" + std::to_string(a);
    case Kind::kMixed:
      return "mixed:" + std::to_string(a) + "," + std::to_string(b) + (num_long < 0 ? "" : "," + std::to_string(num_long));
    case Kind::kUniform:
      return "uniform:" + std::to_string(a) + "," + std::to_string(b);
    case Kind::kExplicit: {
      std::string s = "explicit:";
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(lengths[i]);
      }
      return s;
    }
  }
  return "?";
}

LengthProfile parse_length_profile(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InputError("length profile needs the form kind:values, got '" + s + "'");
  const std::string kind = s.substr(0, colon);
  std::vector<int> v;
  std::stringstream in(s.substr(colon + 1));
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in length profile '" + s + "'");
    }
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi) throw InputError("wrong number of values in length profile '" + s + "'");
  };
  if (kind == "fixed") {
    need(1, 1);
    return LengthProfile::fixed(v[0]);
  }
  if (kind == "mixed") {
    need(2, 3);
    return LengthProfile::mixed(v[0], v[1], v.size() == 3 ? v[2] : -1);
  }
  if (kind == "uniform") {
    need(2, 2);
    return LengthProfile::uniform(v[0], v[1]);
  }
  if (kind == "explicit") {
    need(1, 1000);
    return LengthProfile::explicit_lengths(v);
  }
  throw InputError("unknown length profile kind '" + kind + "'");
}

Term random_term(int n, int len, Rng& rng, const VarSet& avoid) {
  std::vector<int> pool;
  for (int v = 1; v <= n; ++v)
    if (!avoid.test(v - 1)) pool.push_back(v);
  if (len < 0 || len > static_cast<int>(pool.size())) {
    throw InputError("term length " + std::to_string(len) + " exceeds available variables");
  }
  // Partial Fisher-Yates: the first len slots become a uniform len-subset.
  Term t;
  for (int i = 0; i < len; ++i) {
    int j = i + rng.below(static_cast<int>(pool.size()) - i);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    t.add({pool[static_cast<std::size_t>(i)], rng.bernoulli(0.5)});
  }
  return t;
}

Dnf gen_random_dnf(int n, int k, const LengthProfile& lengths, Rng& rng) {
  if (k < 1) throw InputError("random DNF needs k >= 1");
  if (lengths.max_length() > n) {
    throw InputError("length profile " + lengths.describe() + " infeasible for n=" + std::to_string(n));
  }
  std::vector<int> lens;
  switch (lengths.kind) {
    case LengthProfile::Kind::kFixed:
      lens.assign(static_cast<std::size_t>(k), lengths.a);
      break;
    case LengthProfile::Kind::kMixed: {
      int num_long = lengths.num_long >= 0 ? std::min(lengths.num_long, k) : (k + 1) / 2;
      for (int i = 0; i < k; ++i) lens.push_back(i < num_long ? lengths.b : lengths.a);
      break;
    }
    case LengthProfile::Kind::kUniform:
      if (lengths.a > lengths.b || lengths.a < 0) throw InputError("uniform length range is empty");
      for (int i = 0; i < k; ++i) lens.push_back(rng.range(lengths.a, lengths.b));
      break;
    case LengthProfile::Kind::kExplicit:
      if (static_cast<int>(lengths.lengths.size()) != k) {
        throw InputError("explicit length list must have k entries");
      }
      lens = lengths.lengths;
      break;
  }
  std::vector<Term> terms;
  terms.reserve(lens.size());
  for (int len : lens) terms.push_back(random_term(n, len, rng));
  return Dnf(n, std::move(terms));
}

}  // namespace dnflearn
