#pragma once

#include <string>

#include "dnflearn/formula.hpp"

namespace dnflearn {

// Text form: first line "n k", then one line per term listing signed 1-based
// variable indices (+i for x_i, -i for its negation). An empty line is the empty
// term. format_dnf writes literals in ascending variable order and ends every line
// with '\n', so format(parse(s)) == s for text it produced.
std::string format_dnf(const Dnf& f);
Dnf parse_dnf(const std::string& text);

Dnf read_dnf_file(const std::string& path);
void write_dnf_file(const std::string& path, const Dnf& f);

}  // namespace dnflearn
