#include "prudent/rational.hpp"

#include <cctype>

#include "prudent/errors.hpp"

namespace prudent {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  return BigInt(str, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    require(is_integer_literal(num) && is_integer_literal(den),
            "malformed rational '" + std::string(text) + "'");
    BigInt d = parse_int(den);
    require(d != 0, "zero denominator in '" + std::string(text) + "'");
    Rational r(parse_int(num), d);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    require(is_integer_literal(digits) && (frac.empty() || is_integer_literal(frac)) &&
                (frac.empty() || (frac[0] != '-' && frac[0] != '+')),
            "malformed decimal '" + std::string(text) + "'");
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt w = parse_int(digits);
    BigInt f = frac.empty() ? BigInt(0) : parse_int(frac);
    BigInt num = abs(w) * scale + f;
    if (neg || w < 0) num = -num;
    Rational r(num, scale);
    r.canonicalize();
    return r;
  }
  require(is_integer_literal(text), "malformed rational '" + std::string(text) + "'");
  return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational pow(const Rational& base, unsigned exp) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  out.canonicalize();
  return out;
}

}  // namespace prudent
