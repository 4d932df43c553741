#include "qpfb/scalar.hpp"

#include <algorithm>

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace qpfb {

namespace {

struct Registry {
  std::mutex mutex;
  std::vector<std::string> names;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

int ParamRegistry::intern(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  for (std::size_t i = 0; i < r.names.size(); ++i)
    if (r.names[i] == name) return static_cast<int>(i);
  r.names.emplace_back(name);
  return static_cast<int>(r.names.size() - 1);
}

std::optional<int> ParamRegistry::find(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  for (std::size_t i = 0; i < r.names.size(); ++i)
    if (r.names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::string ParamRegistry::name(int id) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (id < 0 || static_cast<std::size_t>(id) >= r.names.size())
    throw std::out_of_range("unknown parameter id");
  return r.names[static_cast<std::size_t>(id)];
}

std::string rational_str(const Rational& r) {
  return r.get_str();
}

Scalar::Scalar(long value) {
  if (value != 0) terms_.emplace(Exponents{}, Rational(value));
}

Scalar::Scalar(const Rational& value) {
  if (value != 0) terms_.emplace(Exponents{}, value);
}

void Scalar::trim(Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

Scalar Scalar::monomial(const Rational& coeff, Exponents exps) {
  Scalar s;
  trim(exps);
  if (coeff != 0) s.terms_.emplace(std::move(exps), coeff);
  return s;
}

Scalar Scalar::param(std::string_view name, int exponent) {
  const int id = ParamRegistry::intern(name);
  Exponents e(static_cast<std::size_t>(id) + 1, 0);
  e[static_cast<std::size_t>(id)] = exponent;
  return monomial(Rational(1), std::move(e));
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1;
}

bool Scalar::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar Scalar::unit_inverse() const {
  if (!is_unit()) throw std::domain_error("scalar " + str() + " is not a unit of the Laurent ring");
  const auto& [e, c] = *terms_.begin();
  Exponents inv(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) inv[i] = -e[i];
  return monomial(Rational(1) / c, std::move(inv));
}

Scalar Scalar::pow(int n) const {
  if (n < 0) return unit_inverse().pow(-n);
  Scalar result(1L);
  Scalar base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Scalar Scalar::specialize(const std::map<int, Rational>& values) const {
  Scalar out;
  for (const auto& [e, c] : terms_) {
    Rational coeff = c;
    Exponents rest = e;
    for (const auto& [id, v] : values) {
      if (static_cast<std::size_t>(id) >= rest.size()) continue;
      int k = rest[static_cast<std::size_t>(id)];
      if (k == 0) continue;
      if (v == 0) throw std::domain_error("cannot specialize a Laurent parameter to zero");
      Rational base = k > 0 ? v : Rational(1) / v;
      for (int i = 0; i < (k > 0 ? k : -k); ++i) coeff *= base;
      rest[static_cast<std::size_t>(id)] = 0;
    }
    out += monomial(coeff, std::move(rest));
  }
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (const auto& [e, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(e, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Scalar::Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      Scalar::trim(e);
      Rational c = ca * cb;
      auto [it, inserted] = out.terms_.try_emplace(std::move(e), c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  *this = *this * o;
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

namespace {

// One monomial without sign; returns "" for the bare constant 1.
std::string monomial_body(const Scalar::Exponents& e, const Rational& abs_coeff) {
  std::ostringstream os;
  bool first = true;
  if (abs_coeff != 1 || e.empty()) {
    os << rational_str(abs_coeff);
    first = false;
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!first) os << ' ';
    os << ParamRegistry::name(static_cast<int>(i));
    if (e[i] != 1) os << '^' << e[i];
    first = false;
  }
  return os.str();
}

}  // namespace

std::string Scalar::str_bare() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Higher total degree first, so (q + 1) and (1 - nu^-2).
  std::vector<const Terms::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  auto total = [](const Exponents& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  };
  std::stable_sort(order.begin(), order.end(), [&](auto* a, auto* b) {
    int da = total(a->first), db = total(b->first);
    if (da != db) return da > db;
    return b->first < a->first;
  });
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    const bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    os << monomial_body(e, a);
    first = false;
  }
  return os.str();
}

std::string Scalar::str() const {
  if (terms_.size() > 1) return "(" + str_bare() + ")";
  return str_bare();
}

}  // namespace qpfb
