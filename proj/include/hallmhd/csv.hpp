#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>

namespace hallmhd {

/// Shortest round-trippable text for a double; nan and inf spelled out.
std::string format_double(double v);

/// Writes one comma-separated row. Fields are emitted as given; callers keep
/// commas out of them (parameters use ';' as the inner separator).
void write_csv_row(std::ostream& os, std::initializer_list<std::string> fields);

inline std::string pass_text(bool pass) { return pass ? "true" : "false"; }

}  // namespace hallmhd
