#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>

namespace cubeleonard {

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Element re + im*i of Q(i). Both parts are kept canonical by gmpxx.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int re) : re_(re) {}
  GaussianRational(long re) : re_(re) {}
  GaussianRational(long re, long im) : re_(re), im_(im) {}
  GaussianRational(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return GaussianRational(0L, 1L); }
  static GaussianRational fraction(long num, long den, long inum = 0, long iden = 1) {
    if (den == 0 || iden == 0) throw ArithmeticError("zero denominator");
    return GaussianRational(mpq_class(num, den), mpq_class(inum, iden));
  }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return sgn(im_) == 0 && re_ == 1; }

  GaussianRational conj() const { return GaussianRational(re_, -im_); }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    if (is_real()) return GaussianRational(mpq_class(1) / re_);
    mpq_class n = norm();
    return GaussianRational(re_ / n, -im_ / n);
  }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero");
    if (o.is_real()) {
      re_ /= o.re_;
      if (sgn(im_) != 0) im_ /= o.re_;
      return *this;
    }
    return *this *= o.inverse();
  }

  // this += a * b without building a temporary GaussianRational.
  void add_product(const GaussianRational& a, const GaussianRational& b) {
    if (a.is_real() && b.is_real()) {
      scratch() = a.re_ * b.re_;
      re_ += scratch();
      return;
    }
    *this += a * b;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  // Lexicographic on (re, im).
  friend bool lex_less(const GaussianRational& a, const GaussianRational& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

  std::string to_string() const;
  static GaussianRational parse(const std::string& text);

  // Integer value if this is a real integer.
  std::optional<long> to_long() const {
    if (!is_real() || re_.get_den() != 1 || !re_.get_num().fits_slong_p()) return std::nullopt;
    return re_.get_num().get_si();
  }

 private:
  static mpq_class& scratch() {
    thread_local mpq_class t;
    return t;
  }

  mpq_class re_;
  mpq_class im_;
};

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << g.to_string(); }

inline GaussianRational integer_power_of_i(long n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return GaussianRational(1L, 0L);
    case 1: return GaussianRational(0L, 1L);
    case 2: return GaussianRational(-1L, 0L);
    default: return GaussianRational(0L, -1L);
  }
}

inline GaussianRational pow(GaussianRational base, unsigned long e) {
  GaussianRational result(1);
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

inline int sign_power(long n) { return (n % 2 == 0) ? 1 : -1; }

namespace detail {

inline std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (sgn(q) == 0) return mpq_class(0);
  if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) || !mpz_perfect_square_p(q.get_den().get_mpz_t()))
    return std::nullopt;
  mpz_class n = sqrt(q.get_num());
  mpz_class d = sqrt(q.get_den());
  return mpq_class(n, d);
}

}  // namespace detail

// Square root in Q(i) if it exists. The returned root has positive real part,
// or zero real part and nonnegative imaginary part.
inline std::optional<GaussianRational> sqrt_exact(const GaussianRational& g) {
  if (g.is_zero()) return GaussianRational();
  auto modulus = detail::rational_sqrt(g.norm());
  if (!modulus) return std::nullopt;
  // (a+bi)^2 = re + im*i  =>  a^2 = (|g| + re)/2, b^2 = (|g| - re)/2
  auto a = detail::rational_sqrt((*modulus + g.re()) / 2);
  auto b = detail::rational_sqrt((*modulus - g.re()) / 2);
  if (!a || !b) return std::nullopt;
  mpq_class bb = *b;
  if (sgn(g.im()) < 0) bb = -bb;
  GaussianRational root(*a, bb);
  if (root * root != g) return std::nullopt;
  return root;
}

inline std::string GaussianRational::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_re && !has_im) return "0";
  std::string out;
  if (has_re) out = re_.get_str();
  if (has_im) {
    mpq_class mag = abs(im_);
    std::string term = (mag == 1) ? "i" : mag.get_str() + "*i";
    if (sgn(im_) < 0)
      out += "-" + term;
    else
      out += (has_re ? "+" : "") + term;
  }
  return out;
}

inline GaussianRational GaussianRational::parse(const std::string& text) {
  static const std::regex pattern(R"(^\s*([+-]?\d+(?:/\d+)?)?(?:([+-]?)(?:(\d+(?:/\d+)?)\*)?i)?\s*$)");
  std::smatch m;
  if (text.empty() || !std::regex_match(text, m, pattern))
    throw ParseError("malformed Gaussian rational: '" + text + "'");
  const bool has_re = m[1].matched;
  const bool has_im = text.find('i') != std::string::npos;
  if (!has_re && !has_im) throw ParseError("malformed Gaussian rational: '" + text + "'");
  // "2-i" needs an explicit sign between the parts; "2i" is rejected by the regex.
  if (has_re && has_im && m[2].length() == 0) throw ParseError("missing sign before imaginary part: '" + text + "'");

  auto to_q = [&](const std::string& s) {
    mpq_class q;
    std::string body = s;
    if (!body.empty() && body[0] == '+') body.erase(0, 1);
    if (q.set_str(body, 10) != 0) throw ParseError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
  };

  mpq_class re = has_re ? to_q(m[1].str()) : mpq_class(0);
  mpq_class im(0);
  if (has_im) {
    im = m[3].matched ? to_q(m[3].str()) : mpq_class(1);
    if (m[2].str() == "-") im = -im;
  }
  return GaussianRational(re, im);
}

}  // namespace cubeleonard
