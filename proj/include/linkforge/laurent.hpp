#pragma once

// Exact Laurent polynomials over the integers.
//
// Laurent<Tag> stores a sparse map from exponent numerator to a nonzero
// arbitrary-precision coefficient. The real exponent is numerator / Tag::denominator,
// so HalfLaurent covers Z[t^{+-1/2}] and BracketPoly covers Z[A^{+-1}].

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "linkforge/errors.hpp"

namespace linkforge {

using Integer = boost::multiprecision::cpp_int;

struct HalfTTag {
  static constexpr long denominator = 2;
  static constexpr char variable = 't';
};

struct BracketTag {
  static constexpr long denominator = 1;
  static constexpr char variable = 'A';
};

struct ConwayTag {
  static constexpr long denominator = 1;
  static constexpr char variable = 'z';
};

template <class Tag>
class Laurent {
 public:
  using Terms = std::map<long, Integer>;

  Laurent() = default;

  explicit Laurent(Terms terms) : terms_(std::move(terms)) { purge(); }

  // Constant polynomial.
  Laurent(long long c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(0, Integer(c));
  }

  static Laurent monomial(const Integer& coefficient, long numerator) {
    Laurent p;
    if (coefficient != 0) p.terms_.emplace(numerator, coefficient);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Integer coefficient(long numerator) const {
    auto it = terms_.find(numerator);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  // Exponent numerators; undefined on the zero polynomial.
  long min_numerator() const {
    assert(!is_zero());
    return terms_.begin()->first;
  }
  long max_numerator() const {
    assert(!is_zero());
    return terms_.rbegin()->first;
  }

  Laurent& operator+=(const Laurent& other) {
    for (const auto& [e, c] : other.terms_) accumulate(e, c);
    return *this;
  }
  Laurent& operator-=(const Laurent& other) {
    for (const auto& [e, c] : other.terms_) accumulate(e, -c);
    return *this;
  }
  Laurent& operator*=(const Laurent& other) { return *this = *this * other; }

  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator-(Laurent a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.accumulate(ea + eb, ca * cb);
    return out;
  }

  friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

  // Multiply by coefficient * x^numerator.
  Laurent shifted(long numerator, const Integer& coefficient = 1) const {
    Laurent out;
    if (coefficient == 0) return out;
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + numerator, c * coefficient);
    return out;
  }

  bool well_formed() const {
    for (const auto& [e, c] : terms_)
      if (c == 0) return false;
    return true;
  }

 private:
  void accumulate(long e, const Integer& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void purge() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == 0)
        it = terms_.erase(it);
      else
        ++it;
    }
    assert(well_formed());
  }

  Terms terms_;
};

using HalfLaurent = Laurent<HalfTTag>;
using BracketPoly = Laurent<BracketTag>;
using ConwayPoly = Laurent<ConwayTag>;

template <class Tag>
Laurent<Tag> pow(const Laurent<Tag>& base, unsigned exponent) {
  Laurent<Tag> result(1);
  Laurent<Tag> b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

// x -> x^{-1}.
template <class Tag>
Laurent<Tag> substitute_inverse(const Laurent<Tag>& a) {
  typename Laurent<Tag>::Terms out;
  for (const auto& [e, c] : a.terms()) out.emplace(-e, c);
  return Laurent<Tag>(std::move(out));
}

// Exact quotient in the Laurent ring, or nullopt when d does not divide n.
//
// Both operands are shifted by unit monomials to ordinary polynomials with
// nonzero constant term. Integer long division from the top then either
// terminates with zero remainder or hits a leading coefficient that lc(d)
// does not divide; in the latter case the rational quotient is non-integral
// and no Laurent quotient exists.
template <class Tag>
std::optional<Laurent<Tag>> divide_exact(const Laurent<Tag>& n, const Laurent<Tag>& d) {
  if (d.is_zero()) throw DomainError("divide_exact: division by the zero polynomial");
  if (n.is_zero()) return Laurent<Tag>();

  const long dshift = d.min_numerator();
  const long nshift = n.min_numerator();
  Laurent<Tag> rem = n.shifted(-nshift);
  const Laurent<Tag> div = d.shifted(-dshift);
  const long ddeg = div.max_numerator();
  const Integer& lead = div.terms().rbegin()->second;

  typename Laurent<Tag>::Terms quotient;
  while (!rem.is_zero()) {
    const long rdeg = rem.max_numerator();
    if (rdeg < ddeg) return std::nullopt;
    const Integer& rlead = rem.terms().rbegin()->second;
    if (rlead % lead != 0) return std::nullopt;
    Integer q = rlead / lead;
    const long qdeg = rdeg - ddeg;
    rem -= div.shifted(qdeg, q);
    quotient.emplace(qdeg, std::move(q));
  }
  return Laurent<Tag>(std::move(quotient)).shifted(nshift - dshift);
}

namespace detail {

inline std::string exponent_text(long numerator, long denominator) {
  if (denominator == 2 && numerator % 2 != 0) return std::to_string(numerator) + "/2";
  return std::to_string(numerator / denominator);
}

}  // namespace detail

// Canonical text: increasing exponent, e.g. "t^-7/2 - t^-5/2 + 2t^3".
template <class Tag>
std::string to_string(const Laurent<Tag>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const bool negative = c < 0;
    Integer mag = negative ? Integer(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (e == 0) {
      out += mag.str();
      continue;
    }
    if (mag != 1) out += mag.str();
    out += Tag::variable;
    if (e != Tag::denominator) out += "^" + detail::exponent_text(e, Tag::denominator);
  }
  return out;
}

namespace detail {

class TermScanner {
 public:
  explicit TermScanner(std::string_view s) : s_(s) {}

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool peek_digit() {
    skip_space();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }
  std::string digits() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("polynomial parse error at offset " + std::to_string(pos_) + ": " + what +
                          " in \"" + std::string(s_) + "\"");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses the canonical text form (and a few harmless variants: '*' between
// coefficient and variable, unicode minus is not accepted). Duplicate
// exponents are rejected.
template <class Tag>
Laurent<Tag> parse_laurent(std::string_view text) {
  detail::TermScanner sc(text);
  typename Laurent<Tag>::Terms terms;
  if (sc.done()) sc.fail("empty input");
  bool first = true;
  while (!sc.done()) {
    int sign = 1;
    if (sc.accept('-')) {
      sign = -1;
    } else if (sc.accept('+')) {
    } else if (!first) {
      sc.fail("expected '+' or '-'");
    }
    first = false;

    Integer coefficient = 1;
    bool have_coefficient = false;
    if (sc.peek_digit()) {
      coefficient = Integer(sc.digits());
      have_coefficient = true;
      sc.accept('*');
    }
    long numerator = 0;
    if (sc.accept(Tag::variable)) {
      numerator = Tag::denominator;
      if (sc.accept('^')) {
        int esign = 1;
        if (sc.accept('-')) esign = -1;
        if (!sc.peek_digit()) sc.fail("expected exponent");
        long value = std::stol(sc.digits());
        if (sc.accept('/')) {
          std::string den = sc.digits();
          if (den != "2" || Tag::denominator != 2) sc.fail("unsupported exponent denominator");
          if (value % 2 == 0) sc.fail("exponent not in lowest terms");
          numerator = esign * value;
        } else {
          numerator = esign * value * Tag::denominator;
        }
      }
    } else if (!have_coefficient) {
      sc.fail("expected coefficient or variable");
    }
    if (terms.count(numerator) != 0) sc.fail("duplicate exponent");
    terms.emplace(numerator, sign * coefficient);
  }
  return Laurent<Tag>(std::move(terms));
}

inline HalfLaurent parse_half_laurent(std::string_view text) { return parse_laurent<HalfTTag>(text); }

// (-A)^{-3w} <D> under A = t^{-1/4}.
inline HalfLaurent bracket_to_jones(const BracketPoly& bracket, long writhe) {
  const long shift = -3 * writhe;
  const Integer sign = (writhe % 2 == 0) ? 1 : -1;
  HalfLaurent::Terms out;
  for (const auto& [e, c] : bracket.terms()) {
    const long a_exp = e + shift;
    if (a_exp % 2 != 0)
      throw InvariantViolation("bracket_to_jones: A-exponent " + std::to_string(a_exp) +
                               " gives a quarter-integer t-exponent");
    out.emplace(-a_exp / 2, c * sign);
  }
  return HalfLaurent(std::move(out));
}

}  // namespace linkforge
