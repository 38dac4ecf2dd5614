#include "lieclass/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace lieclass {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(Rational::Raw{}, narrow(num), narrow(den));
}

namespace {

// Exact integer k-th root of a non-negative value, if it exists.
std::optional<std::int64_t> exact_root(std::int64_t value, std::int64_t k) {
  if (value < 0) return std::nullopt;
  if (value == 0 || value == 1) return value;
  auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(value), 1.0 / static_cast<double>(k))));
  for (std::int64_t cand = std::max<std::int64_t>(guess - 1, 0); cand <= guess + 1; ++cand) {
    i128 acc = 1;
    bool over = false;
    for (std::int64_t i = 0; i < k; ++i) {
      acc *= cand;
      if (acc > value) {
        over = true;
        break;
      }
    }
    if (!over && acc == value) return cand;
  }
  return std::nullopt;
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

void Rational::normalize() {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  *this = make_reduced(num_, den_);
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  std::string s(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '-' || s[i] == '+') {
    neg = s[i] == '-';
    ++i;
  }
  i128 num = 0;
  i128 den = 1;
  bool frac = false;
  bool any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      num = num * 10 + (c - '0');
      if (frac) den *= 10;
      any = true;
      if (num > std::numeric_limits<std::int64_t>::max() || den > std::numeric_limits<std::int64_t>::max()) {
        throw std::overflow_error("numeric literal too long: " + s);
      }
    } else if (c == '.' && !frac) {
      frac = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      throw std::invalid_argument("malformed number: " + s);
    }
  }
  if (!any) throw std::invalid_argument("malformed number: " + s);
  Rational r = make_reduced(neg ? -num : num, den);
  if (i < s.size()) {
    long e = std::stol(s.substr(i + 1));
    if (e > 18 || e < -18) throw std::overflow_error("exponent out of range: " + s);
    r = r * Rational(10).pow(e);
  }
  return r;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return Rational(narrow(-static_cast<i128>(num_)), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

Rational Rational::reciprocal() const { return Rational(1) / *this; }

Rational Rational::pow(std::int64_t exponent) const {
  if (exponent < 0) return reciprocal().pow(-exponent);
  Rational result(1);
  Rational base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

std::optional<Rational> Rational::pow(const Rational& exponent) const {
  if (exponent.is_integer()) {
    if (num_ == 0 && exponent.is_negative()) return std::nullopt;
    if (exponent.abs() > Rational(256)) return std::nullopt;
    try {
      return pow(exponent.num());
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
  }
  if (num_ == 0) {
    if (exponent.is_negative()) return std::nullopt;
    return Rational(0);
  }
  const std::int64_t q = exponent.den();
  if (q > 64) return std::nullopt;
  bool negate = false;
  std::int64_t n = num_;
  if (n < 0) {
    if (q % 2 == 0) return std::nullopt;
    negate = true;
    n = -n;
  }
  auto rn = exact_root(n, q);
  auto rd = exact_root(den_, q);
  if (!rn || !rd) return std::nullopt;
  Rational root(negate ? -*rn : *rn, *rd);
  if (exponent.num() > 256 || exponent.num() < -256) return std::nullopt;
  try {
    return root.pow(exponent.num());
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

}  // namespace lieclass
