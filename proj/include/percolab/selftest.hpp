// Built-in oracle battery: re-derives the exactly-known values (enumerations,
// closed forms, brute-force references) and checks the fast paths against
// them. Returns the number of failed checks; prints one line per check.
#pragma once

#include <iosfwd>

namespace percolab {

int selftest(std::ostream& out);

}  // namespace percolab
