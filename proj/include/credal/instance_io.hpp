#pragma once

// Instance text format v1:
//
//   omega <N>
//   dom <M>
//   g <N reals> | <price>      (M lines)
//   set <K>
//   f <N reals>                (K lines)
//
// '#' starts a comment; blank lines are ignored.

#include <iosfwd>
#include <string>

#include "credal/core.hpp"

namespace credal {

struct Instance {
  LowerPrevision prevision;
  GambleSet gambles;
};

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

/// Writes shortest round-trip decimal representations, so reading the
/// output back reproduces every double exactly.
void write_instance(std::ostream& out, const Instance& instance);
void write_instance_file(const std::string& path, const Instance& instance);

}  // namespace credal
