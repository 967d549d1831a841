#include "expr.hpp"

#include <cctype>
#include <stdexcept>

namespace cyclopadic::cli {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const FieldPtr& field) : s_(text), F_(field) {}

  CycloElement element() {
    CycloElement v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

  ExponentialSum function() {
    ExponentialSum f;
    bool neg = false;
    skip();
    if (eat('-')) neg = true;
    else eat('+');
    for (;;) {
      auto [coeff, base] = function_term();
      if (neg) coeff = -coeff;
      f.terms.push_back({coeff, base});
      skip();
      if (eat('+')) neg = false;
      else if (eat('-')) neg = true;
      else break;
    }
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot parse '" + s_ + "' at position " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_x_exponent() {
    skip();
    std::size_t save = pos_;
    if (eat('^')) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == 'x') {
        ++pos_;
        return true;
      }
    }
    pos_ = save;
    return false;
  }

  CycloElement sum() {
    bool neg = eat('-');
    if (!neg) eat('+');
    CycloElement v = product();
    if (neg) v = -v;
    for (;;) {
      if (eat('+')) v = v + product();
      else if (eat('-')) v = v - product();
      else return v;
    }
  }
  CycloElement product() {
    CycloElement v = power();
    while (eat('*')) v = v * power();
    return v;
  }
  CycloElement power() {
    CycloElement b = atom();
    skip();
    std::size_t save = pos_;
    if (eat('^')) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == 'x') {
        pos_ = save;
        return b;
      }
      return b.pow(integer());
    }
    return b;
  }
  std::int64_t integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    std::int64_t v = std::stoll(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  CycloElement atom() {
    skip();
    if (eat('(')) {
      CycloElement v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (s_.compare(pos_, 4, "zeta") == 0) {
      pos_ += 4;
      return CycloElement::zeta(F_);
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return CycloElement::pi(F_);
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return CycloElement::integer(F_, mpz_class(s_.substr(start, pos_ - start)));
    }
    fail("expected a number, zeta, pi or '('");
  }

  // [coeff *] base ^ x, or a constant (base 1).
  std::pair<CycloElement, CycloElement> function_term() {
    CycloElement first = power();
    if (at_x_exponent()) return {CycloElement::one(F_), first};
    CycloElement coeff = first;
    while (eat('*')) {
      CycloElement next = power();
      if (at_x_exponent()) return {coeff, next};
      coeff = coeff * next;
    }
    return {coeff, CycloElement::one(F_)};
  }

  std::string s_;
  FieldPtr F_;
  std::size_t pos_ = 0;
};

}  // namespace

CycloElement parse_element(const std::string& text, const FieldPtr& field) { return Parser(text, field).element(); }

FunctionModel parse_function(const std::string& text, const FieldPtr& field) {
  ExponentialSum f = Parser(text, field).function();
  // Validate through the library constructor (v(base - 1) > 0).
  for (const auto& t : f.terms) (void)exponential(t.base, t.coeff);
  return f;
}

}  // namespace cyclopadic::cli
