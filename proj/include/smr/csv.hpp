#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace smr::csv {

// RFC-4180 field quoting: quote when the field contains a comma, a quote,
// or a line break; embedded quotes double.
inline void write_field(std::ostream& out, std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_field(out, row[i]);
  }
  out << '\n';
}

// Streaming reader. Handles quoted fields, doubled quotes, embedded line
// breaks, and CRLF endings. read_row returns false at end of input.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  bool read_row(std::vector<std::string>& row) {
    row.clear();
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) return false;
    std::string field;
    bool in_quotes = false;
    while (true) {
      if (c == std::istream::traits_type::eof()) {
        row.push_back(std::move(field));
        return true;
      }
      if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            field.push_back('"');
            in_.get();
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(static_cast<char>(c));
        }
      } else if (c == '"' && field.empty()) {
        in_quotes = true;
      } else if (c == ',') {
        row.push_back(std::move(field));
        field.clear();
      } else if (c == '\r' && in_.peek() == '\n') {
        in_.get();
        row.push_back(std::move(field));
        return true;
      } else if (c == '\n') {
        row.push_back(std::move(field));
        return true;
      } else {
        field.push_back(static_cast<char>(c));
      }
      c = in_.get();
    }
  }

 private:
  std::istream& in_;
};

}  // namespace smr::csv
