#include "adelic/map_parser.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

#include "json.hpp"

namespace adelic {

namespace {

constexpr long kMaxExponent = 4096;

struct Value {
  RationalPolynomial num, den;
  std::size_t at = 0;  // byte offset of the first token

  bool is_constant() const { return num.degree() <= 0 && den.degree() <= 0; }
  Rational constant() const {
    const Rational n = num.is_zero() ? Rational(0) : num.coefficients()[0];
    return n / den.coefficients()[0];
  }
};

RationalPolynomial constant_poly(const Rational& c) { return RationalPolynomial::constant(c); }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ParsedExpression run() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty expression");
    Value v = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return {v.num, v.den, var_};
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  // U+2212 MINUS SIGN is accepted for '-'.
  bool at_minus() const {
    if (pos_ < s_.size() && s_[pos_] == '-') return true;
    return s_.substr(pos_, 3) == "\xE2\x88\x92";
  }

  bool eat(char c) {
    skip();
    if (c == '-' && at_minus()) {
      pos_ += s_[pos_] == '-' ? 1 : 3;
      return true;
    }
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    Value v = term();
    for (;;) {
      skip();
      const std::size_t op = pos_;
      if (eat('+')) {
        v = add(v, term(), false);
      } else if (eat('-')) {
        v = add(v, term(), true);
      } else {
        pos_ = op;
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      skip();
      const std::size_t op = pos_;
      if (eat('*')) {
        Value r = unary();
        v = {v.num * r.num, v.den * r.den, v.at};
      } else if (eat('/')) {
        Value r = unary();
        if (r.num.is_zero()) throw ParseError(op, "division by zero");
        v = {v.num * r.den, v.den * r.num, v.at};
      } else {
        pos_ = op;
        return v;
      }
    }
  }

  Value unary() {
    skip();
    const std::size_t at = pos_;
    if (eat('-')) {
      Value v = unary();
      return {-v.num, v.den, at};
    }
    if (eat('+')) return unary();
    return power();
  }

  Value power() {
    Value base = primary();
    skip();
    const std::size_t op = pos_;
    if (!eat('^')) return base;
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "missing exponent");
    Value e = unary();
    if (!e.is_constant()) throw ParseError(e.at, "exponent must be an integer constant");
    const Rational k = e.constant();
    if (k.get_den() != 1) throw ParseError(e.at, "exponent must be an integer");
    if (abs(k) > kMaxExponent) throw ParseError(e.at, "exponent too large");
    long n = k.get_num().get_si();
    if (n < 0) {
      if (base.num.is_zero()) throw ParseError(op, "division by zero");
      std::swap(base.num, base.den);
      n = -n;
    }
    return {pow(base.num, static_cast<unsigned>(n)), pow(base.den, static_cast<unsigned>(n)), base.at};
  }

  Value primary() {
    skip();
    const std::size_t at = pos_;
    if (pos_ == s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      v.at = at;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'z' || c == 'x') {
      const std::size_t next = pos_ + 1;
      if (next < s_.size() && std::isalnum(static_cast<unsigned char>(s_[next])))
        throw ParseError(pos_, "unknown identifier");
      if (var_ != 0 && var_ != c)
        throw ParseError(pos_, std::string("mixed variables '") + var_ + "' and '" + c + "'");
      var_ = c;
      ++pos_;
      return {RationalPolynomial::variable(), constant_poly(1), at};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) throw ParseError(pos_, "unknown identifier");
    throw ParseError(pos_, "unexpected '" + std::string(1, c) + "'");
  }

  Value number() {
    const std::size_t at = pos_;
    std::string digits;
    long frac = -1;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (frac >= 0) ++frac;
      } else if (c == '.' && frac < 0) {
        frac = 0;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) throw ParseError(at, "malformed number");
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
      throw ParseError(pos_, "expected an operator after a number");
    Integer den = 1;
    if (frac > 0) mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac));
    return {constant_poly(make_rational(Integer(digits, 10), den)), constant_poly(1), at};
  }

  static Value add(const Value& a, const Value& b, bool negate) {
    RationalPolynomial rhs = b.num * a.den;
    if (negate) rhs = -rhs;
    return {a.num * b.den + rhs, a.den * b.den, a.at};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  char var_ = 0;
};

Rational json_coefficient(const nlohmann::json& c) {
  if (c.is_number_integer()) {
    return c.is_number_unsigned() ? Rational(Integer(std::to_string(c.get<std::uint64_t>())))
                                  : Rational(Integer(std::to_string(c.get<std::int64_t>())));
  }
  if (c.is_string()) {
    const std::string text = c.get<std::string>();
    ParsedExpression e;
    try {
      e = parse_expression(text);
    } catch (const ParseError& err) {
      throw ParseError(0, "coefficient \"" + text + "\": " + err.what());
    }
    if (e.var != 0) throw ParseError(0, "coefficient \"" + text + "\" is not a constant");
    const Rational n = e.num.is_zero() ? Rational(0) : e.num.coefficients()[0];
    return n / e.den.coefficients()[0];
  }
  throw ParseError(0, "coefficients must be integers or strings \"p/q\", got " + c.dump());
}

std::vector<Rational> json_side(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    if (std::string(key) == "den") return {Rational(1)};
    throw ParseError(0, std::string("missing \"") + key + "\"");
  }
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(0, std::string("\"") + key + "\" must be an array");
  std::vector<Rational> out;
  for (const auto& c : arr) out.push_back(json_coefficient(c));
  return out;
}

RationalMap parse_json_map(std::string_view source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, "invalid JSON");
  }
  if (!j.is_object()) throw ParseError(0, "map JSON must be an object");
  for (const auto& [key, value] : j.items())
    if (key != "num" && key != "den") throw ParseError(0, "unknown key \"" + key + "\"");
  return normalize(json_side(j, "num"), json_side(j, "den"));
}

}  // namespace

ParsedExpression parse_expression(std::string_view source) { return Parser(source).run(); }

RationalMap parse_map(std::string_view source) {
  std::size_t first = 0;
  while (first < source.size() && std::isspace(static_cast<unsigned char>(source[first]))) ++first;
  if (first < source.size() && source[first] == '{') return parse_json_map(source);
  const ParsedExpression e = parse_expression(source);
  return normalize(e.num, e.den);
}

}  // namespace adelic
