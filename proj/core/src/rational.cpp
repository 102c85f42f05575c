#include "ietlab/rational.hpp"

#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty rational literal");
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) {
      Int n(t);
      return Rational(n);
    }
    Int num(t.substr(0, slash));
    Int den(t.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational literal '" + text + "'");
  }
}

std::string format_rational(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw ParseError("empty rational list");
  return out;
}

Int floor_int(const Rational& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

Rational frac_part(const Rational& x) {
  Rational f = x - Rational(floor_int(x));
  return f;
}

Rational circle_norm(const Rational& x) {
  Rational f = frac_part(x);
  Rational other = 1 - f;
  return f < other ? f : other;
}

double to_double(const Rational& x) { return x.get_d(); }

}  // namespace ietlab
