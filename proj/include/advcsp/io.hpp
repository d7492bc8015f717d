#pragma once

// Text formats. Blank lines and lines starting with '#' are ignored; LF and
// CRLF endings are both accepted. Indices are 0-based.
//
//   instance    p klin <k> <n> <m>        then m lines  <i1> ... <ik> <+1|-1> <weight>
//               p xor <k> <n> <m>         then m lines  <i1> ... <ik> <0|1> <weight>   (c = (-1)^b)
//   assignment  s assign <n>              then n lines  <+1|-1>
//   advice      a label <n> <epsilon>     then n lines  <+1|-1>
//               a subset <n> <epsilon>    then lines    <index> <+1|-1>

#include <iosfwd>
#include <string>
#include <variant>

#include "advcsp/advice.hpp"
#include "advcsp/instance.hpp"

namespace advcsp {

using Advice = std::variant<LabelAdvice, SubsetAdvice>;

KLinInstance parse_instance(std::istream& in);
Assignment parse_assignment(std::istream& in);
Advice parse_advice(std::istream& in);

void write_instance(std::ostream& out, const KLinInstance& instance);
void write_assignment(std::ostream& out, const Assignment& x);
void write_advice(std::ostream& out, const Advice& advice);

KLinInstance read_instance(const std::string& path);
Assignment read_assignment(const std::string& path);
Advice read_advice(const std::string& path);

void write_instance(const std::string& path, const KLinInstance& instance);
void write_assignment(const std::string& path, const Assignment& x);
void write_advice(const std::string& path, const Advice& advice);

// Shortest decimal string that reads back to exactly `v`.
std::string format_number(double v);

}  // namespace advcsp
