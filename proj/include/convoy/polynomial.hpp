#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "convoy/scalar.hpp"

namespace convoy {

// ---------------------------------------------------------------------------
// LaurentPoly: integer-coefficient Laurent polynomial in q.
// Stored as coefficients of q^(min_deg + i).
// ---------------------------------------------------------------------------

class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(const mpz_class& constant) {
    if (constant != 0) {
      min_deg_ = 0;
      coeff_ = {constant};
    }
  }
  static LaurentPoly monomial(const mpz_class& c, int deg) {
    LaurentPoly p;
    if (c != 0) {
      p.min_deg_ = deg;
      p.coeff_ = {c};
    }
    return p;
  }

  bool is_zero() const { return coeff_.empty(); }
  int min_degree() const { return min_deg_; }
  int max_degree() const { return min_deg_ + static_cast<int>(coeff_.size()) - 1; }

  mpz_class coeff(int deg) const {
    if (is_zero() || deg < min_deg_ || deg > max_degree()) return 0;
    return coeff_[static_cast<std::size_t>(deg - min_deg_)];
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int lo = std::min(min_deg_, o.min_deg_);
    const int hi = std::max(max_degree(), o.max_degree());
    std::vector<mpz_class> c(static_cast<std::size_t>(hi - lo + 1));
    for (int d = min_deg_; d <= max_degree(); ++d) c[d - lo] += coeff_[d - min_deg_];
    for (int d = o.min_deg_; d <= o.max_degree(); ++d) c[d - lo] += o.coeff_[d - o.min_deg_];
    min_deg_ = lo;
    coeff_ = std::move(c);
    normalize();
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }

  LaurentPoly& operator-=(const LaurentPoly& o) {
    LaurentPoly neg = o;
    neg *= mpz_class(-1);
    return *this += neg;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }

  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.min_deg_ = a.min_deg_ + b.min_deg_;
    r.coeff_.assign(a.coeff_.size() + b.coeff_.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.coeff_.size(); ++i)
      for (std::size_t j = 0; j < b.coeff_.size(); ++j)
        r.coeff_[i + j] += a.coeff_[i] * b.coeff_[j];
    r.normalize();
    return r;
  }

  LaurentPoly& operator*=(const mpz_class& s) {
    if (s == 0) {
      coeff_.clear();
      min_deg_ = 0;
      return *this;
    }
    for (auto& c : coeff_) c *= s;
    return *this;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.min_deg_ == b.min_deg_ && a.coeff_ == b.coeff_;
  }

  // Evaluate at a scalar q (q != 0 required when negative degrees occur).
  template <class S>
  S eval(const S& q) const {
    if (is_zero()) return S(0);
    S result(0);
    // Horner over descending degree, then adjust by q^min_deg.
    for (std::size_t i = coeff_.size(); i-- > 0;)
      result = result * q + scalar_from_mpz<S>(coeff_[i]);
    S shift(1);
    if (min_deg_ > 0)
      for (int i = 0; i < min_deg_; ++i) shift *= q;
    else
      for (int i = 0; i < -min_deg_; ++i) shift /= q;
    return result * shift;
  }

  std::string to_string() const;

 private:
  void normalize() {
    std::size_t lead = 0;
    while (lead < coeff_.size() && coeff_[lead] == 0) ++lead;
    std::size_t tail = coeff_.size();
    while (tail > lead && coeff_[tail - 1] == 0) --tail;
    if (lead == tail) {
      coeff_.clear();
      min_deg_ = 0;
      return;
    }
    if (lead > 0 || tail < coeff_.size()) {
      std::vector<mpz_class> c(coeff_.begin() + lead, coeff_.begin() + tail);
      min_deg_ += static_cast<int>(lead);
      coeff_ = std::move(c);
    }
  }

  int min_deg_ = 0;
  std::vector<mpz_class> coeff_;  // empty means zero
};

// double evaluation needs a separate path (mpz -> double)
inline double eval_double(const LaurentPoly& p, double q) {
  if (p.is_zero()) return 0.0;
  double result = 0.0;
  for (int d = p.max_degree(); d >= p.min_degree(); --d)
    result = result * q + p.coeff(d).get_d();
  return result * std::pow(q, p.min_degree());
}

// ---------------------------------------------------------------------------
// BiPoly: integer-coefficient polynomial in (x,q), dense over x-degree.
// ---------------------------------------------------------------------------

class BiPoly {
 public:
  BiPoly() = default;
  explicit BiPoly(const mpz_class& constant) {
    if (constant != 0) rows_ = {LaurentPoly(constant)};
  }
  static BiPoly from_rows(std::vector<LaurentPoly> rows) {
    BiPoly p;
    p.rows_ = std::move(rows);
    p.normalize();
    return p;
  }

  bool is_zero() const { return rows_.empty(); }
  int x_degree() const { return static_cast<int>(rows_.size()) - 1; }
  // coefficient of x^i as a polynomial in q
  const LaurentPoly& x_coeff(int i) const {
    static const LaurentPoly zero;
    if (i < 0 || i > x_degree()) return zero;
    return rows_[static_cast<std::size_t>(i)];
  }

  BiPoly& operator+=(const BiPoly& o) {
    if (rows_.size() < o.rows_.size()) rows_.resize(o.rows_.size());
    for (std::size_t i = 0; i < o.rows_.size(); ++i) rows_[i] += o.rows_[i];
    normalize();
    return *this;
  }

  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }

  BiPoly negated() const {
    BiPoly r = *this;
    for (auto& row : r.rows_) row *= mpz_class(-1);
    return r;
  }

  // multiply by x^k
  BiPoly shifted_x(int k) const {
    if (is_zero()) return {};
    BiPoly r;
    r.rows_.assign(rows_.size() + static_cast<std::size_t>(k), LaurentPoly());
    for (std::size_t i = 0; i < rows_.size(); ++i) r.rows_[i + k] = rows_[i];
    return r;
  }

  // substitute x -> 1 + q x  (exact, via binomial expansion)
  BiPoly compose_one_plus_qx() const;

  // evaluate at x = 1 (sum of x-coefficients), a polynomial in q
  LaurentPoly at_x1() const {
    LaurentPoly s;
    for (const auto& row : rows_) s += row;
    return s;
  }

  friend bool operator==(const BiPoly& a, const BiPoly& b) {
    return a.rows_ == b.rows_;
  }

  std::string to_string() const;
  static BiPoly parse(const std::string& text);

 private:
  void normalize() {
    while (!rows_.empty() && rows_.back().is_zero()) rows_.pop_back();
  }
  std::vector<LaurentPoly> rows_;  // rows_[i] = coefficient of x^i
};

inline BiPoly BiPoly::compose_one_plus_qx() const {
  // (1+qx)^i expanded with Pascal's triangle; row i of the result gathers
  // binom(i,j) q^j x^j contributions.
  std::vector<std::vector<mpz_class>> binom(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    binom[i].resize(i + 1);
    binom[i][0] = 1;
    binom[i][i] = 1;
    for (std::size_t j = 1; j < i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
  }
  std::vector<LaurentPoly> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].is_zero()) continue;
    for (std::size_t j = 0; j <= i; ++j) {
      LaurentPoly term = rows_[i] * LaurentPoly::monomial(binom[i][j], static_cast<int>(j));
      if (out.size() <= j) out.resize(j + 1);
      out[j] += term;
    }
  }
  return BiPoly::from_rows(std::move(out));
}

// ---------------------------------------------------------------------------
// Canonical text form: terms sorted by (x-degree, q-degree), e.g.
// "1 + 1*x + 1*q*x".  Used by the CLI and round-trip tests.
// ---------------------------------------------------------------------------

namespace detail {
inline void append_term(std::ostringstream& os, bool& first, const mpz_class& c,
                        int qdeg, int xdeg) {
  if (c == 0) return;
  mpz_class a = c;
  if (first) {
    if (a < 0) {
      os << "-";
      a = -a;
    }
    first = false;
  } else {
    if (a < 0) {
      os << " - ";
      a = -a;
    } else {
      os << " + ";
    }
  }
  os << a.get_str();
  auto factor = [&](const char* v, int d) {
    if (d == 0) return;
    os << "*" << v;
    if (d != 1) os << "^" << d;
  };
  factor("q", qdeg);
  factor("x", xdeg);
}
}  // namespace detail

inline std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int d = min_degree(); d <= max_degree(); ++d)
    detail::append_term(os, first, coeff(d), d, 0);
  return os.str();
}

inline std::string BiPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= x_degree(); ++i) {
    const LaurentPoly& row = x_coeff(i);
    if (row.is_zero()) continue;
    for (int d = row.min_degree(); d <= row.max_degree(); ++d)
      detail::append_term(os, first, row.coeff(d), d, i);
  }
  return os.str();
}

inline BiPoly BiPoly::parse(const std::string& text) {
  // Parses the canonical form produced by to_string (and tolerates extra
  // whitespace).  Terms: [coeff][*q[^j]][*x[^i]].
  std::vector<LaurentPoly> rows;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  auto skip_ws = [&] {
    while (pos < n && text[pos] == ' ') ++pos;
  };
  int sign = 1;
  skip_ws();
  if (pos < n && (text[pos] == '-' || text[pos] == '+')) {
    if (text[pos] == '-') sign = -1;
    ++pos;
  }
  while (pos < n) {
    skip_ws();
    mpz_class coeff = 1;
    bool saw_digits = false;
    std::string digits;
    while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      saw_digits = true;
    }
    if (saw_digits) coeff = mpz_class(digits);
    int qdeg = 0, xdeg = 0;
    while (pos < n && (text[pos] == '*' || text[pos] == 'q' || text[pos] == 'x')) {
      if (text[pos] == '*') ++pos;
      skip_ws();
      if (pos >= n) break;
      char var = text[pos];
      if (var != 'q' && var != 'x')
        throw std::invalid_argument("BiPoly::parse: expected variable");
      ++pos;
      int deg = 1;
      if (pos < n && text[pos] == '^') {
        ++pos;
        std::string d;
        while (pos < n && std::isdigit(static_cast<unsigned char>(text[pos])))
          d.push_back(text[pos++]);
        if (d.empty()) throw std::invalid_argument("BiPoly::parse: bad exponent");
        deg = std::stoi(d);
      }
      (var == 'q' ? qdeg : xdeg) = deg;
    }
    if (!saw_digits && qdeg == 0 && xdeg == 0)
      throw std::invalid_argument("BiPoly::parse: empty term");
    if (static_cast<int>(rows.size()) <= xdeg) rows.resize(xdeg + 1);
    rows[xdeg] += LaurentPoly::monomial(sign * coeff, qdeg);
    skip_ws();
    if (pos >= n) break;
    if (text[pos] == '+') sign = 1;
    else if (text[pos] == '-') sign = -1;
    else throw std::invalid_argument("BiPoly::parse: expected + or -");
    ++pos;
  }
  return BiPoly::from_rows(std::move(rows));
}

}  // namespace convoy
