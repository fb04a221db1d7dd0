#include "jnlab/rational.hpp"

#include <sstream>

#include "jnlab/error.hpp"

namespace jnlab {

Rational make_rational(long num, unsigned long den) {
  if (den == 0) throw Error(ErrorCode::kInvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational pow2_inv(unsigned k) {
  mpz_class den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), k);
  return Rational(mpz_class(1), den);
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  const auto bad = [&] { return Error(ErrorCode::kSchema, "not a rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  const auto integer_ok = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string num(text.substr(0, slash));
  std::string den = slash == std::string_view::npos ? std::string("1") : std::string(text.substr(slash + 1));
  if (!integer_ok(num) || !integer_ok(den) || den.front() == '-' || den.front() == '+') throw bad();
  if (num.front() == '+') num.erase(0, 1);
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw bad();
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_decimal(const Rational& q, int digits) {
  mpf_class f(q, 256);
  std::ostringstream out;
  out.precision(digits);
  out << f;
  return out.str();
}

}  // namespace jnlab
