#pragma once

#include <string>
#include <string_view>

#include "dfakit/dfa.hpp"

namespace dfakit {

// Plain-text DFA format (LF line endings, single spaces):
//
//   dfa 1
//   states <n>
//   alphabet <k>
//   initial <q0 | ->
//   accepting <m> <id_1> ... <id_m>      ids strictly increasing
//   letter <a> <name>                    optional, k lines
//   trans <a> <d_0> <d_1> ... <d_{n-1}>  k lines
//
// write_dfa emits exactly this layout, so canonical forms can be compared
// byte for byte.

Dfa read_dfa(std::string_view text);
std::string write_dfa(const Dfa& dfa);

Dfa read_dfa_file(const std::string& path);
void write_dfa_file(const Dfa& dfa, const std::string& path);

} // namespace dfakit
