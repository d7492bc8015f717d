#include "advcsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

#include "advcsp/errors.hpp"

namespace advcsp {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next significant line, or false at end of input.
  bool next(Line& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++number_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::istringstream ss(raw);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      line.number = number_;
      line.tokens = std::move(tokens);
      return true;
    }
    return false;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

template <class T>
T parse_int(const std::string& tok, std::size_t line, const char* what) {
  T v{};
  const char* begin = tok.data();
  if (!tok.empty() && tok.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

double parse_double(const std::string& tok, std::size_t line, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("invalid ") + what + " '" + tok + "'");
  }
  return v;
}

Spin parse_spin(const std::string& tok, std::size_t line) {
  if (tok == "+1" || tok == "1") return 1;
  if (tok == "-1") return -1;
  throw ParseError(line, "expected +1 or -1, got '" + tok + "'");
}

Line expect_header(LineReader& reader, const std::string& tag) {
  Line header;
  if (!reader.next(header)) throw ParseError(reader.number(), "missing '" + tag + "' header");
  if (header.tokens.front() != tag) {
    throw ParseError(header.number, "expected '" + tag + "' header, got '" + header.tokens.front() + "'");
  }
  return header;
}

void expect_end(LineReader& reader, const char* what) {
  Line extra;
  if (reader.next(extra)) throw ParseError(extra.number, std::string("unexpected line after ") + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

KLinInstance parse_instance(std::istream& in) {
  LineReader reader(in);
  const Line header = expect_header(reader, "p");
  if (header.tokens.size() != 5 || (header.tokens[1] != "klin" && header.tokens[1] != "xor")) {
    throw ParseError(header.number, "header must be 'p klin <k> <n> <m>' or 'p xor <k> <n> <m>'");
  }
  const bool xor_form = header.tokens[1] == "xor";
  const auto k = parse_int<std::size_t>(header.tokens[2], header.number, "arity");
  const auto n = parse_int<std::size_t>(header.tokens[3], header.number, "variable count");
  const auto m = parse_int<std::size_t>(header.tokens[4], header.number, "constraint count");
  if (k == 0 || n == 0 || k > n || n > (1ULL << 32)) throw ParseError(header.number, "invalid arity or variable count");

  KLinInstance instance(k, n);
  instance.reserve(std::min<std::size_t>(m, 1 << 24));
  std::vector<std::uint32_t> vars(k);
  Line line;
  for (std::size_t c = 0; c < m; ++c) {
    if (!reader.next(line)) {
      throw ParseError(reader.number(), "expected " + std::to_string(m) + " constraints, found " + std::to_string(c));
    }
    if (line.tokens.size() != k + 2) {
      throw ParseError(line.number, "constraint needs " + std::to_string(k) + " indices, a rhs and a weight");
    }
    for (std::size_t a = 0; a < k; ++a) {
      const auto v = parse_int<std::uint64_t>(line.tokens[a], line.number, "index");
      if (v >= n) throw ParseError(line.number, "index " + line.tokens[a] + " out of range [0, " + std::to_string(n) + ")");
      vars[a] = static_cast<std::uint32_t>(v);
    }
    int rhs;
    if (xor_form) {
      const auto& tok = line.tokens[k];
      if (tok == "0") {
        rhs = 1;
      } else if (tok == "1") {
        rhs = -1;
      } else {
        throw ParseError(line.number, "xor rhs must be 0 or 1, got '" + tok + "'");
      }
    } else {
      rhs = parse_spin(line.tokens[k], line.number);
    }
    const double w = parse_double(line.tokens[k + 1], line.number, "weight");
    try {
      instance.add(vars, rhs, w);
    } catch (const InputError& e) {
      throw ParseError(line.number, e.what());
    }
  }
  expect_end(reader, "the last constraint");
  return instance;
}

Assignment parse_assignment(std::istream& in) {
  LineReader reader(in);
  const Line header = expect_header(reader, "s");
  if (header.tokens.size() != 3 || header.tokens[1] != "assign") {
    throw ParseError(header.number, "header must be 's assign <n>'");
  }
  const auto n = parse_int<std::size_t>(header.tokens[2], header.number, "length");
  std::vector<Spin> values;
  values.reserve(std::min<std::size_t>(n, 1 << 24));
  Line line;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line)) throw ParseError(reader.number(), "expected " + std::to_string(n) + " values");
    if (line.tokens.size() != 1) throw ParseError(line.number, "expected a single +1 or -1");
    values.push_back(parse_spin(line.tokens[0], line.number));
  }
  expect_end(reader, "the last value");
  return Assignment(std::move(values));
}

Advice parse_advice(std::istream& in) {
  LineReader reader(in);
  const Line header = expect_header(reader, "a");
  if (header.tokens.size() != 4 || (header.tokens[1] != "label" && header.tokens[1] != "subset")) {
    throw ParseError(header.number, "header must be 'a label <n> <epsilon>' or 'a subset <n> <epsilon>'");
  }
  const auto n = parse_int<std::size_t>(header.tokens[2], header.number, "length");
  const double eps = parse_double(header.tokens[3], header.number, "epsilon");
  if (!(eps > 0.0 && eps <= 1.0)) throw ParseError(header.number, "epsilon must lie in (0, 1]");

  Line line;
  if (header.tokens[1] == "label") {
    std::vector<Spin> values;
    values.reserve(std::min<std::size_t>(n, 1 << 24));
    for (std::size_t i = 0; i < n; ++i) {
      if (!reader.next(line)) throw ParseError(reader.number(), "expected " + std::to_string(n) + " labels");
      if (line.tokens.size() != 1) throw ParseError(line.number, "expected a single +1 or -1");
      values.push_back(parse_spin(line.tokens[0], line.number));
    }
    expect_end(reader, "the last label");
    return LabelAdvice{Assignment(std::move(values)), eps};
  }

  std::vector<std::tuple<std::uint32_t, Spin, std::size_t>> entries;
  while (reader.next(line)) {
    if (line.tokens.size() != 2) throw ParseError(line.number, "expected '<index> <+1|-1>'");
    const auto idx = parse_int<std::uint64_t>(line.tokens[0], line.number, "index");
    if (idx >= n) throw ParseError(line.number, "index " + line.tokens[0] + " out of range");
    entries.emplace_back(static_cast<std::uint32_t>(idx), parse_spin(line.tokens[1], line.number), line.number);
  }
  std::sort(entries.begin(), entries.end());
  SubsetAdvice out;
  out.num_vars = n;
  out.epsilon = eps;
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const auto& [idx, value, number] = entries[r];
    if (r > 0 && std::get<0>(entries[r - 1]) == idx) throw ParseError(number, "index " + std::to_string(idx) + " repeated");
    out.indices.push_back(idx);
    out.values.push_back(value);
  }
  return out;
}

void write_instance(std::ostream& out, const KLinInstance& instance) {
  out << "p klin " << instance.arity() << ' ' << instance.num_vars() << ' ' << instance.num_constraints() << '\n';
  for (std::size_t c = 0; c < instance.num_constraints(); ++c) {
    for (auto v : instance.vars(c)) out << v << ' ';
    out << (instance.rhs(c) > 0 ? "+1 " : "-1 ") << format_number(instance.weight(c)) << '\n';
  }
}

void write_assignment(std::ostream& out, const Assignment& x) {
  out << "s assign " << x.size() << '\n';
  for (auto v : x.values()) out << (v > 0 ? "+1\n" : "-1\n");
}

void write_advice(std::ostream& out, const Advice& advice) {
  if (const auto* label = std::get_if<LabelAdvice>(&advice)) {
    out << "a label " << label->values.size() << ' ' << format_number(label->epsilon) << '\n';
    for (auto v : label->values.values()) out << (v > 0 ? "+1\n" : "-1\n");
    return;
  }
  const auto& subset = std::get<SubsetAdvice>(advice);
  out << "a subset " << subset.num_vars << ' ' << format_number(subset.epsilon) << '\n';
  for (std::size_t r = 0; r < subset.indices.size(); ++r) {
    out << subset.indices[r] << (subset.values[r] > 0 ? " +1\n" : " -1\n");
  }
}

KLinInstance read_instance(const std::string& path) {
  auto in = open_in(path);
  return parse_instance(in);
}

Assignment read_assignment(const std::string& path) {
  auto in = open_in(path);
  return parse_assignment(in);
}

Advice read_advice(const std::string& path) {
  auto in = open_in(path);
  return parse_advice(in);
}

void write_instance(const std::string& path, const KLinInstance& instance) {
  auto out = open_out(path);
  write_instance(out, instance);
}

void write_assignment(const std::string& path, const Assignment& x) {
  auto out = open_out(path);
  write_assignment(out, x);
}

void write_advice(const std::string& path, const Advice& advice) {
  auto out = open_out(path);
  write_advice(out, advice);
}

}  // namespace advcsp
