#include "dnflearn/dnf_text.hpp"

#include <fstream>
#include <sstream>

#include "dnflearn/errors.hpp"

namespace dnflearn {

std::string format_dnf(const Dnf& f) {
  std::string out = std::to_string(f.n()) + " " + std::to_string(f.k()) + "\n";
  for (const Term& t : f.terms()) {
    bool first = true;
    for (const Literal& l : t.literals()) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(l.positive ? l.var : -l.var);
    }
    out += '\n';
  }
  return out;
}

Dnf parse_dnf(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty DNF text");
  std::istringstream header(line);
  int n = -1;
  int k = -1;
  if (!(header >> n >> k) || n < 0 || k < 0) throw InputError("DNF header must be \"n k\"");
  std::string rest;
  if (header >> rest) throw InputError("trailing tokens in DNF header");

  std::vector<Term> terms;
  for (int i = 0; i < k; ++i) {
    if (!std::getline(in, line)) {
      throw InputError("DNF text declares " + std::to_string(k) + " terms but has " + std::to_string(i));
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    Term t;
    std::string tok;
    while (ls >> tok) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw InputError("bad literal '" + tok + "' on term line " + std::to_string(i + 1));
      }
      if (v == 0 || std::abs(v) > n) {
        throw InputError("literal " + tok + " out of range for n=" + std::to_string(n));
      }
      Literal lit{std::abs(v), v > 0};
      if (t.contains(lit)) throw InputError("duplicate literal " + tok);
      t.add(lit);
    }
    terms.push_back(t);
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw InputError("extra content after the last term");
  }
  return Dnf(n, std::move(terms));
}

Dnf read_dnf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dnf(ss.str());
}

void write_dnf_file(const std::string& path, const Dnf& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << format_dnf(f);
}

}  // namespace dnflearn
