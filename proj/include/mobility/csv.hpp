#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mobility::csv {

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// RFC 4180 reader: quoted fields may contain commas, doubled quotes and line
// breaks. Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace mobility::csv
