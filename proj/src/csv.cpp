#include "forumnet/csv.hpp"

namespace forumnet::csv {

Reader::Reader(std::string_view text) : text_(text) {
  // UTF-8 byte order mark
  if (text_.substr(0, 3) == "\xEF\xBB\xBF") {
    pos_ = 3;
  }
}

std::optional<Record> Reader::next() {
  if (pos_ >= text_.size()) {
    return std::nullopt;
  }
  Record rec;
  std::string field;
  const std::size_t start = pos_;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t end = text_.size();
  std::size_t i = pos_;
  for (; i < text_.size(); ++i) {
    const char c = text_[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text_.size() && text_[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (field.empty() && !field_was_quoted) {
        in_quotes = true;
        field_was_quoted = true;
      } else {
        rec.well_formed = false;
        field.push_back(c);
      }
    } else if (c == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\n' || c == '\r') {
      end = i;
      break;
    } else {
      if (field_was_quoted) {
        rec.well_formed = false;
      }
      field.push_back(c);
    }
  }
  if (in_quotes) {
    rec.well_formed = false;
  }
  rec.fields.push_back(std::move(field));
  rec.raw = std::string(text_.substr(start, end - start));
  // consume the line terminator
  if (i < text_.size() && text_[i] == '\r') {
    ++i;
  }
  if (i < text_.size() && text_[i] == '\n') {
    ++i;
  }
  pos_ = i;
  return rec;
}

std::vector<Record> read_all(std::string_view text) {
  std::vector<Record> out;
  Reader reader(text);
  while (auto rec = reader.next()) {
    out.push_back(std::move(*rec));
  }
  return out;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out.push_back(',');
    }
    out += escape(fields[i]);
  }
  return out;
}

} // namespace forumnet::csv
