#include "eprlab/numeric.hpp"

#include <cctype>
#include <sstream>

namespace epr {

namespace {

bool is_plain_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    if (!is_plain_integer(num) || !is_plain_integer(den)) {
      throw ParseError("bad rational literal: '" + text + "'");
    }
    Rational r;
    if (mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0) {
      throw ParseError("bad rational literal: '" + text + "'");
    }
    if (r.get_den() == 0) {
      throw ParseError("zero denominator in '" + text + "'");
    }
    r.canonicalize();
    return r;
  }

  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string head = text.substr(0, dot);
    const std::string tail = text.substr(dot + 1);
    if (!(head.empty() || is_plain_integer(head)) || tail.empty()) {
      throw ParseError("bad decimal literal: '" + text + "'");
    }
    for (char c : tail) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ParseError("bad decimal literal: '" + text + "'");
      }
    }
    const bool negative = !head.empty() && head[0] == '-';
    std::string digits = head;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      digits = digits.substr(1);
    }
    digits += tail;
    if (digits.empty()) {
      throw ParseError("bad decimal literal: '" + text + "'");
    }
    mpz_class num(digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, tail.size());
    Rational r(num, den);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }

  if (!is_plain_integer(text)) {
    throw ParseError("bad numeric literal: '" + text + "'");
  }
  return Rational(mpz_class(text, 10));
}

std::string format_rational(const Rational& v) {
  if (v.get_den() == 1) {
    return v.get_num().get_str();
  }
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string format_scalar(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

}  // namespace epr
