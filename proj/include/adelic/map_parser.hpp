#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "adelic/polynomial.hpp"
#include "adelic/rational_map.hpp"

namespace adelic {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorKind::Parse, "byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// num/den as written, before normalization; var is 'z', 'x' or 0 when the
// expression is constant.
struct ParsedExpression {
  RationalPolynomial num, den;
  char var = 0;

  bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }
};

// Grammar: integers and decimals (exact), one variable z or x, + - * / ^
// with integer exponents, parentheses. Constants fold exactly.
ParsedExpression parse_expression(std::string_view source);

// An expression, or a JSON object {"num": [...], "den": [...]} with
// coefficients in increasing degree given as JSON integers or as strings
// "p" or "p/q". Throws ParseError, or passes on the degenerate-map error.
RationalMap parse_map(std::string_view source);

}  // namespace adelic
