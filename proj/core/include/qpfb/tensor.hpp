#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qpfb/presentation.hpp"

namespace qpfb {

/// Element of A_1 (x) ... (x) A_k with slot-wise (unbraided) multiplication.
class TensorElement {
 public:
  using Key = std::vector<Word>;
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      DegLex less;
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (less(a[i], b[i])) return true;
        if (less(b[i], a[i])) return false;
      }
      return a.size() < b.size();
    }
  };
  using Terms = std::map<Key, Scalar, KeyLess>;

  TensorElement() = default;
  explicit TensorElement(std::vector<PresentationPtr> slots) : slots_(std::move(slots)) {}

  /// e_1 (x) ... (x) e_k
  static TensorElement product_of(const std::vector<Element>& factors);
  static TensorElement unit(std::vector<PresentationPtr> slots);

  const std::vector<PresentationPtr>& slots() const { return slots_; }
  std::size_t rank() const { return slots_.size(); }
  const Terms& terms() const& { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }
  /// Largest total word length among the terms (-1 for zero).
  int degree() const;

  /// Add c * (w_1 (x) ... (x) w_k); every w_i must already be irreducible.
  void add_normal(const Key& k, const Scalar& c);
  /// Add c * (e_1 (x) ... (x) e_k), expanding the product.
  void add_product(const std::vector<Element>& factors, const Scalar& c);

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement& operator*=(const Scalar& s);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(const TensorElement& a, const TensorElement& b);
  friend TensorElement operator*(const Scalar& s, TensorElement a) { return a *= s; }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.slots_ == b.slots_ && a.terms_ == b.terms_;
  }

  /// Replace slot i by the tensor f(word) (which may have any rank >= 1).
  TensorElement expand_slot(std::size_t i, const std::function<TensorElement(const Word&)>& f) const;
  /// Apply a linear map on slot i (the slot's algebra may change).
  TensorElement map_slot(std::size_t i, const std::function<Element(const Word&)>& f) const;

  std::string str() const;

 private:
  void require_same(const TensorElement& o) const;

  std::vector<PresentationPtr> slots_;
  Terms terms_;
};

}  // namespace qpfb
