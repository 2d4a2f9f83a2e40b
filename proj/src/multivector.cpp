#include "cliffsolve/multivector.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "cliffsolve/error.hpp"

namespace cliffsolve {

namespace {

void check_same_sig(const Multivector& u, const Multivector& v, const char* op) {
  if (!(u.sig() == v.sig()))
    throw Error(std::string(op) + ": signature mismatch, (" +
                std::to_string(u.sig().r) + "," + std::to_string(u.sig().s) +
                ") vs (" + std::to_string(v.sig().r) + "," +
                std::to_string(v.sig().s) + ")");
}

inline bool is_zero(Complex c) { return c.real() == 0.0 && c.imag() == 0.0; }

}  // namespace

Multivector::Multivector(Signature sig) : sig_(sig), coeffs_(sig.dim(), Complex{}) {}

Multivector::Multivector(Signature sig, std::vector<Complex> coeffs)
    : sig_(sig), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != sig_.dim())
    throw Error("multivector: coefficient count " + std::to_string(coeffs_.size()) +
                " does not match 2^n = " + std::to_string(sig_.dim()));
}

Multivector Multivector::scalar(Signature sig, Complex value) {
  Multivector u(sig);
  u[0] = value;
  return u;
}

Multivector Multivector::blade(Signature sig, BladeMask mask, Complex coeff) {
  if (mask >= sig.dim()) throw Error("blade: mask out of range for signature");
  Multivector u(sig);
  u[mask] = coeff;
  return u;
}

Multivector Multivector::generator(Signature sig, int a) {
  if (a < 1 || a > sig.n())
    throw Error("generator: index " + std::to_string(a) + " out of range 1.." +
                std::to_string(sig.n()));
  return blade(sig, BladeMask{1} << (a - 1));
}

Multivector& Multivector::operator+=(const Multivector& rhs) {
  check_same_sig(*this, rhs, "add");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& rhs) {
  check_same_sig(*this, rhs, "subtract");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Multivector& Multivector::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

Multivector product(const Multivector& u, const Multivector& v) {
  check_same_sig(u, v, "product");
  const Signature sig = u.sig();
  const std::size_t dim = sig.dim();
  Multivector out(sig);
  for (BladeMask a = 0; a < dim; ++a) {
    const Complex ca = u[a];
    if (is_zero(ca)) continue;
    for (BladeMask b = 0; b < dim; ++b) {
      const Complex cb = v[b];
      if (is_zero(cb)) continue;
      const auto [sign, m] = blade_product(a, b, sig);
      out[m] += static_cast<double>(sign) * ca * cb;
    }
  }
  return out;
}

Multivector operator*(const Multivector& u, const Multivector& v) {
  return product(u, v);
}

Multivector wedge(const Multivector& u, const Multivector& v) {
  check_same_sig(u, v, "wedge");
  const Signature sig = u.sig();
  const std::size_t dim = sig.dim();
  Multivector out(sig);
  for (BladeMask a = 0; a < dim; ++a) {
    const Complex ca = u[a];
    if (is_zero(ca)) continue;
    for (BladeMask b = 0; b < dim; ++b) {
      if (a & b) continue;  // shared generator: drops out of the top grade
      const Complex cb = v[b];
      if (is_zero(cb)) continue;
      const auto [sign, m] = blade_product(a, b, sig);
      out[m] += static_cast<double>(sign) * ca * cb;
    }
  }
  return out;
}

Multivector grade_project(const Multivector& u, int k) {
  if (k < 0 || k > u.n())
    throw Error("grade_project: grade " + std::to_string(k) + " out of range 0.." +
                std::to_string(u.n()));
  Multivector out(u.sig());
  for (BladeMask m = 0; m < u.dim(); ++m)
    if (blade_grade(m) == k) out[m] = u[m];
  return out;
}

Multivector parity_project(const Multivector& u, Parity p) {
  Multivector out(u.sig());
  for (BladeMask m = 0; m < u.dim(); ++m)
    if (blade_parity(m) == p) out[m] = u[m];
  return out;
}

Multivector reverse(const Multivector& u) {
  Multivector out(u.sig());
  for (BladeMask m = 0; m < u.dim(); ++m) {
    const int k = blade_grade(m);
    const bool flip = ((k * (k - 1)) / 2) & 1;
    out[m] = flip ? -u[m] : u[m];
  }
  return out;
}

Multivector complex_conjugate(const Multivector& u) {
  Multivector out(u.sig());
  for (BladeMask m = 0; m < u.dim(); ++m) out[m] = std::conj(u[m]);
  return out;
}

Multivector involution(const Multivector& u, Involution kind) {
  return kind == Involution::Reverse ? reverse(u) : complex_conjugate(u);
}

Multivector hermitian_conjugate(const Multivector& u) {
  if (!u.sig().is_lorentzian())
    throw Error("hermitian_conjugate: defined only for signature (1,n-1), got (" +
                std::to_string(u.sig().r) + "," + std::to_string(u.sig().s) + ")");
  const Multivector beta = Multivector::generator(u.sig(), 1);
  return product(product(beta, reverse(complex_conjugate(u))), beta);
}

double max_norm(const Multivector& u) {
  double m = 0.0;
  for (const Complex& c : u.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

bool approx_equal(const Multivector& a, const Multivector& b, double tol) {
  if (!(a.sig() == b.sig())) return false;
  for (BladeMask m = 0; m < a.dim(); ++m)
    if (std::abs(a[m] - b[m]) > tol) return false;
  return true;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string out = "(" + format_double(c.real());
  if (!(c.imag() < 0.0)) out += "+";
  out += format_double(c.imag()) + "i)";
  return out;
}

std::string to_string(const Multivector& u) {
  std::string out;
  for (BladeMask m = 0; m < u.dim(); ++m) {
    if (is_zero(u[m])) continue;
    if (!out.empty()) out += " + ";
    out += format_complex(u[m]) + "*" + blade_name(m);
  }
  return out.empty() ? "0" : out;
}

namespace {

// Cursor-based parser for the "coef*e^indices" sum syntax.
class Parser {
 public:
  // Owns a copy: strtod needs NUL-terminated input.
  Parser(std::string_view text, Signature sig) : text_(text), sig_(sig) {}

  Multivector parse() {
    Multivector out(sig_);
    skip_ws();
    if (done()) throw Error("parse: empty multivector literal");
    double term_sign = 1.0;
    if (peek() == '+' || peek() == '-') term_sign = (get() == '-') ? -1.0 : 1.0;
    for (;;) {
      parse_term(out, term_sign);
      skip_ws();
      if (done()) break;
      char c = get();
      if (c == '+')
        term_sign = 1.0;
      else if (c == '-')
        term_sign = -1.0;
      else
        throw Error(std::string("parse: expected '+' or '-' before \"") +
                    std::string(text_.substr(pos_ - 1)) + "\"");
      skip_ws();
    }
    return out;
  }

 private:
  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  double parse_real() {
    const char* start = text_.data() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw Error("parse: expected a number at \"" +
                                  std::string(text_.substr(pos_)) + "\"");
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  // Coefficient forms: 1.5 | 1.5i | i | (a+bi) ; blade may follow after '*'
  // (or directly).
  Complex parse_coef() {
    skip_ws();
    if (peek() == '(') {
      get();
      double re = parse_real();
      skip_ws();
      double im = parse_real();  // sign is part of the literal
      skip_ws();
      if (done() || get() != 'i') throw Error("parse: expected 'i' in complex literal");
      skip_ws();
      if (done() || get() != ')') throw Error("parse: expected ')' in complex literal");
      return {re, im};
    }
    if (peek() == 'i') {
      get();
      return {0.0, 1.0};
    }
    double v = parse_real();
    if (!done() && peek() == 'i') {
      get();
      return {0.0, v};
    }
    return {v, 0.0};
  }

  BladeMask parse_blade() {
    // cursor sits on 'e'
    get();
    if (done() || peek() != '^') return 0;
    get();
    BladeMask mask = 0;
    auto add_index = [&](int idx) {
      if (idx < 1 || idx > sig_.n())
        throw Error("parse: generator index " + std::to_string(idx) +
                    " out of range 1.." + std::to_string(sig_.n()));
      BladeMask bit = BladeMask{1} << (idx - 1);
      if (mask & bit) throw Error("parse: repeated generator index in blade");
      mask |= bit;
    };
    if (!done() && peek() == '{') {
      get();
      for (;;) {
        skip_ws();
        add_index(static_cast<int>(parse_real()));
        skip_ws();
        if (done()) throw Error("parse: unterminated '{' in blade");
        char c = get();
        if (c == '}') break;
        if (c != ',') throw Error("parse: expected ',' or '}' in blade index list");
      }
    } else {
      bool any = false;
      while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
        add_index(get() - '0');
        any = true;
      }
      if (!any) throw Error("parse: expected indices after 'e^'");
    }
    return mask;
  }

  void parse_term(Multivector& out, double sign) {
    skip_ws();
    if (done()) throw Error("parse: dangling sign at end of literal");
    Complex coef{1.0, 0.0};
    bool have_coef = false;
    if (peek() != 'e') {
      coef = parse_coef();
      have_coef = true;
      skip_ws();
      if (!done() && peek() == '*') {
        get();
        skip_ws();
      }
    }
    BladeMask mask = 0;
    if (!done() && peek() == 'e') {
      mask = parse_blade();
    } else if (!have_coef) {
      throw Error("parse: expected a term at \"" + std::string(text_.substr(pos_)) + "\"");
    }
    out[mask] += sign * coef;
  }

  std::string text_;
  Signature sig_;
  std::size_t pos_ = 0;
};

}  // namespace

Multivector parse_multivector(std::string_view text, Signature sig) {
  return Parser(text, sig).parse();
}

}  // namespace cliffsolve
