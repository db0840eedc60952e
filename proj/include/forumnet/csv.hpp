#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forumnet::csv {

/// One logical RFC 4180 record with the raw text it was parsed from.
struct Record {
  std::vector<std::string> fields;
  std::string raw;
  bool well_formed = true; // false on an unterminated quote or stray quote
};

/// Incremental RFC 4180 reader over an in-memory buffer. Accepts LF and CRLF
/// line endings; quoted fields may span lines.
class Reader {
public:
  explicit Reader(std::string_view text);

  std::optional<Record> next();

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<Record> read_all(std::string_view text);

/// Quotes a field only when it contains a delimiter, quote, or line break.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

} // namespace forumnet::csv
