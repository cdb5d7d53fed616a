#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace patnet {

/// Quotes a field if it contains a comma, quote, or newline.
std::string csv_escape(std::string_view field);

/// Splits one CSV line honoring double-quote escaping. Does not handle
/// embedded newlines (none of our formats emit them).
std::vector<std::string> csv_split(std::string_view line);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Reads a line, tolerating trailing '\r'. Returns false at EOF.
bool read_line(std::istream& in, std::string& line);

}  // namespace patnet
