#include "credal/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace credal {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line with comments stripped; throws at end of input.
  Line next(const char* expecting) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++number_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      Line line{number_, {}};
      for (std::string tok; ss >> tok;) line.fields.push_back(tok);
      if (!line.fields.empty()) return line;
    }
    throw ParseError(number_ + 1, std::string("unexpected end of input, expected ") + expecting);
  }

  bool at_end() {
    std::string raw;
    std::streampos pos = in_.tellg();
    std::size_t saved = number_;
    while (std::getline(in_, raw)) {
      ++number_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r\n") != std::string::npos) {
        in_.clear();
        in_.seekg(pos);
        number_ = saved;
        return false;
      }
    }
    return true;
  }

  std::size_t line_number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

double parse_real(const Line& line, std::size_t field) {
  const std::string& tok = line.fields[field];
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line.number, "field " + std::to_string(field + 1) + ": '" + tok +
                                      "' is not a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line.number, "field " + std::to_string(field + 1) + ": '" + tok +
                                      "' is not finite");
  }
  return value;
}

std::size_t parse_count(const Line& line, const char* keyword) {
  if (line.fields.size() != 2 || line.fields[0] != keyword) {
    throw ParseError(line.number, std::string("expected '") + keyword + " <count>'");
  }
  const std::string& tok = line.fields[1];
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line.number, "field 2: '" + tok + "' is not a non-negative integer");
  }
  return value;
}

Vector parse_payoffs(const Line& line, std::size_t first, std::size_t count) {
  Vector v(static_cast<Eigen::Index>(count));
  for (std::size_t w = 0; w < count; ++w) v[static_cast<Eigen::Index>(w)] = parse_real(line, first + w);
  return v;
}

void write_real(std::ostream& out, double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  out.write(buf, ptr - buf);
}

}  // namespace

Instance read_instance(std::istream& in) {
  LineReader reader(in);

  Line header = reader.next("'omega <N>'");
  const std::size_t n = parse_count(header, "omega");
  if (n == 0) throw ParseError(header.number, "omega must be at least 1");

  Line dom = reader.next("'dom <M>'");
  const std::size_t m = parse_count(dom, "dom");
  if (m == 0) throw ParseError(dom.number, "dom must be at least 1");

  std::vector<PriceAssessment> entries;
  entries.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Line line = reader.next("a 'g' line");
    if (line.fields.empty() || line.fields[0] != "g") {
      throw ParseError(line.number, "expected 'g <" + std::to_string(n) + " reals> | <price>'");
    }
    if (line.fields.size() != n + 3 || line.fields[n + 1] != "|") {
      throw ParseError(line.number, "domain gamble must have " + std::to_string(n) +
                                        " payoffs followed by '| <price>', got " +
                                        std::to_string(line.fields.size() - 1) + " fields");
    }
    entries.push_back({Gamble(parse_payoffs(line, 1, n)), parse_real(line, n + 2)});
  }

  Line set = reader.next("'set <K>'");
  const std::size_t k = parse_count(set, "set");
  if (k == 0) throw ParseError(set.number, "set must contain at least one gamble");

  std::vector<Gamble> members;
  members.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Line line = reader.next("an 'f' line");
    if (line.fields.empty() || line.fields[0] != "f") {
      throw ParseError(line.number, "expected 'f <" + std::to_string(n) + " reals>'");
    }
    if (line.fields.size() != n + 1) {
      throw ParseError(line.number, "gamble must have " + std::to_string(n) + " payoffs, got " +
                                        std::to_string(line.fields.size() - 1));
    }
    members.emplace_back(parse_payoffs(line, 1, n));
  }

  if (!reader.at_end()) throw ParseError(reader.line_number() + 1, "trailing content after gamble set");

  PossibilitySpace space(n);
  return Instance{LowerPrevision(space, std::move(entries)), GambleSet(space, std::move(members))};
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  const auto& P = instance.prevision;
  const auto& K = instance.gambles;
  out << "omega " << P.space().size() << '\n';
  out << "dom " << P.domain_size() << '\n';
  for (const auto& [g, price] : P.entries()) {
    out << 'g';
    for (Eigen::Index w = 0; w < g.payoffs().size(); ++w) {
      out << ' ';
      write_real(out, g.payoffs()[w]);
    }
    out << " | ";
    write_real(out, price);
    out << '\n';
  }
  out << "set " << K.size() << '\n';
  for (const auto& f : K.members()) {
    out << 'f';
    for (Eigen::Index w = 0; w < f.payoffs().size(); ++w) {
      out << ' ';
      write_real(out, f.payoffs()[w]);
    }
    out << '\n';
  }
}

void write_instance_file(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  write_instance(out, instance);
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace credal
