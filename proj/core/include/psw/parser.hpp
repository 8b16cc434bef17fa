#pragma once

#include "psw/schema.hpp"

#include <stdexcept>
#include <string>

namespace psw {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

/// Parses schema-DSL source. The first `schema` block is the root; other
/// blocks become sub-schemas where referenced. A source consisting of bare
/// lines (no `schema` header) is treated as the body of a single root schema.
std::shared_ptr<Schema> parse_schema(const std::string& text);

/// Canonical printer; parse(print(s)) reproduces the same structure.
std::string print_schema(const Schema& s);

}  // namespace psw
