#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qpfb {

using Rational = mpq_class;

/// Global interning table for deformation parameter names (q, nu, ...).
/// Ids are stable for the lifetime of the process.
class ParamRegistry {
 public:
  static int intern(std::string_view name);
  static std::optional<int> find(std::string_view name);
  static std::string name(int id);
};

/// Exact Laurent polynomial in the deformation parameters with rational
/// coefficients. Exponent vectors are indexed by parameter id with trailing
/// zeros trimmed, so equal scalars have equal representations.
class Scalar {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, Rational>;

  Scalar() = default;
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  explicit Scalar(const Rational& value);

  static Scalar monomial(const Rational& coeff, Exponents exps);
  static Scalar param(std::string_view name, int exponent = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  /// Single-term scalars are exactly the units of the Laurent ring.
  bool is_unit() const { return terms_.size() == 1; }
  bool is_constant() const;
  Scalar unit_inverse() const;
  Scalar pow(int n) const;

  /// Substitute nonzero rational values for some parameters (by id).
  Scalar specialize(const std::map<int, Rational>& values) const;

  const Terms& terms() const& { return terms_; }
  Terms terms() && { return std::move(terms_); }

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }

  /// Canonical text, parseable by the presentation-file reader. Sums are
  /// parenthesized so that the text can be used as a factor.
  std::string str() const;
  /// Same as str() but without the outer parentheses on sums.
  std::string str_bare() const;

 private:
  static void trim(Exponents& e);
  Terms terms_;
};

std::string rational_str(const Rational& r);

}  // namespace qpfb
