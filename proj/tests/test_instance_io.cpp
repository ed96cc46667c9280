#include <doctest.h>

#include <sstream>

#include "credal/instance_io.hpp"
#include "support.hpp"

using namespace credal;

namespace {

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("reads the running example") {
  const Instance inst = parse(
      "# R\n"
      "omega 2\n"
      "dom 1\n"
      "g 1 0 | 0.3   # the only assessment\n"
      "\n"
      "set 3\n"
      "f 0 1\n"
      "f 0.5 0.5\n"
      "f 0.2 0.2\n");
  CHECK(inst.prevision.space().size() == 2);
  CHECK(inst.prevision.domain_size() == 1);
  CHECK(inst.prevision.entries()[0].price == 0.3);
  REQUIRE(inst.gambles.size() == 3);
  CHECK(inst.gambles[1][0] == 0.5);
}

TEST_CASE("round trip is exact") {
  const auto r = testing::random_instance(9, 0, 5, 3, 4);
  const Instance inst{r.P, r.K};
  std::ostringstream out;
  write_instance(out, inst);
  const Instance back = parse(out.str());
  REQUIRE(back.prevision.domain_size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.prevision.entries()[i].price == inst.prevision.entries()[i].price);
    CHECK(back.prevision.entries()[i].gamble.payoffs() == inst.prevision.entries()[i].gamble.payoffs());
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(back.gambles[i].payoffs() == inst.gambles[i].payoffs());
  std::ostringstream again;
  write_instance(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("positional errors") {
  CHECK(error_line("omega 2\ndom 1\ng 1 0 0 | 0.3\nset 1\nf 0 1\n") == 3);
  CHECK(error_line("omega 2\ndom 1\ng 1 0 | 0.3\nset 1\nf 0 inf\n") == 5);
  CHECK(error_line("omega 2\ndom 1\ng 1 nan | 0.3\nset 1\nf 0 1\n") == 3);
  CHECK(error_line("omega 2\ndom 1\ng 1 0 | 0.3\nset 2\nf 0 1\n") == 6);
  CHECK(error_line("omega 2\ndom 1\ng 1 0 0.3\nset 1\nf 0 1\n") == 3);
  CHECK(error_line("omega 0\n") == 1);
  CHECK(error_line("omega 2\ndom 1\ng 1 0 | 0.3\nset 1\nf 0 1\nf 1 1\n") == 6);
  CHECK(error_line("omega two\n") == 1);
}
