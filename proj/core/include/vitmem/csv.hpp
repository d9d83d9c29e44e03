#pragma once

#include <string>
#include <vector>

namespace vitmem::csv {

// RFC-4180-ish: fields separated by commas, double quotes for fields
// containing commas/quotes/newlines (no embedded newlines here).
std::vector<std::string> parse_line(const std::string& line);
std::string quote_field(const std::string& field);

}  // namespace vitmem::csv
