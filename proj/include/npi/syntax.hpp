#pragma once

#include <string>
#include <string_view>

#include "npi/ast.hpp"

namespace npi {

class ParseError : public Error {
public:
  ParseError(const std::string &msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parse a `.npl` program. Throws ParseError (positioned) on syntax and sort
/// errors, and on duplicate hole identifiers.
Program parse_program(std::string_view text);
Program parse_program_file(const std::string &path);

/// Parse a standalone formula or term against the declarations of `scope`.
Expr parse_expr(std::string_view text, const Program &scope);

std::string to_string(const Expr &e);
std::string to_string(const Program &p);
std::string to_string(const StmtPtr &s, int indent = 0);

} // namespace npi
