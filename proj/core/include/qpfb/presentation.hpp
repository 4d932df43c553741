#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpfb/report.hpp"
#include "qpfb/scalar.hpp"

namespace qpfb {

using Gen = std::uint16_t;
using Word = std::vector<Gen>;

/// Graded lexicographic order: shorter words first, then lexicographic in
/// the declared generator order.
struct DegLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Scalar-weighted sum of words that has not been normalized.
using RawSum = std::vector<std::pair<Word, Scalar>>;

struct Rule {
  Word lhs;
  RawSum rhs;
};

class Presentation;
using PresentationPtr = std::shared_ptr<const Presentation>;

/// Finitely presented *-algebra: generators, an involution on generators,
/// and oriented rewrite rules that strictly decrease DegLex.
class Presentation {
 public:
  struct Spec {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> generators;
    /// Unordered pairs {g, g*}; a self-adjoint generator pairs with itself.
    std::vector<std::pair<std::string, std::string>> star_pairs;
    std::vector<Rule> rules;
  };

  static constexpr std::size_t kDefaultStepBudget = 1'000'000;

  /// Validates the spec (nonempty generators, involutive star, degree-lowering rules).
  static PresentationPtr create(Spec spec, std::size_t step_budget = kDefaultStepBudget);

  const std::string& name() const { return spec_.name; }
  const std::vector<std::string>& params() const { return spec_.params; }
  const std::vector<std::string>& generators() const { return spec_.generators; }
  const std::vector<Rule>& rules() const { return spec_.rules; }
  const Spec& spec() const { return spec_; }
  std::size_t generator_count() const { return spec_.generators.size(); }
  std::optional<Gen> find_generator(const std::string& name) const;
  Gen generator(const std::string& name) const;

  bool has_star() const { return !star_.empty(); }
  Gen star_of(Gen g) const { return star_.at(g); }

  /// Position of the leftmost rule left-hand side occurring in w, if any.
  std::optional<std::pair<std::size_t, std::size_t>> find_redex(const Word& w) const;
  bool is_irreducible(const Word& w) const { return !find_redex(w); }

  /// One rewrite step of rule `rule` at position `pos`.
  RawSum rewrite_at(const Word& w, std::size_t rule, std::size_t pos) const;

  /// Normal form of a single word as (irreducible word -> coefficient).
  std::map<Word, Scalar, DegLex> normal_form(const Word& w) const;

  /// All irreducible words of degree <= max_degree in DegLex order.
  std::vector<Word> basis(int max_degree) const;

  std::string word_str(const Word& w) const;
  /// Generators pairwise commute after normalization.
  bool is_commutative() const;

  std::size_t step_budget() const { return step_budget_; }

 private:
  explicit Presentation(Spec spec, std::size_t budget);
  std::map<Word, Scalar, DegLex> normal_form_impl(const Word& w, std::size_t& steps,
                                                  const Word& top) const;

  Spec spec_;
  std::vector<Gen> star_;
  std::vector<Word> lhs_;
  std::size_t step_budget_;

  mutable std::mutex memo_mutex_;
  mutable std::map<Word, std::map<Word, Scalar, DegLex>, DegLex> memo_;
  mutable std::map<int, std::vector<Word>> basis_memo_;
};

/// Normal-form element of a presented algebra.
class Element {
 public:
  using Terms = std::map<Word, Scalar, DegLex>;

  Element() = default;
  explicit Element(PresentationPtr p) : pres_(std::move(p)) {}

  static Element scalar(const PresentationPtr& p, const Scalar& s);
  static Element one(const PresentationPtr& p) { return scalar(p, Scalar(1L)); }
  static Element generator(const PresentationPtr& p, const std::string& name);
  static Element word(const PresentationPtr& p, const Word& w, const Scalar& c = Scalar(1L));
  /// Normal form of an arbitrary scalar-weighted sum of words.
  static Element normalize(const PresentationPtr& p, const RawSum& raw);

  const PresentationPtr& presentation() const { return pres_; }
  const Terms& terms() const& { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }
  /// Scalar coefficient of the empty word.
  Scalar constant_term() const;
  /// Largest word length among the terms (-1 for zero).
  int degree() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Scalar& s);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(const Scalar& s, Element a) { return a *= s; }
  friend Element operator*(Element a, const Scalar& s) { return a *= s; }
  Element operator-() const;
  friend bool operator==(const Element& a, const Element& b);

  /// Antimultiplicative involution induced by the star pairs.
  Element star() const;

  /// Add c * (normal form of w).
  void add_word(const Word& w, const Scalar& c);

  std::string str() const;

 private:
  void add_normal(const Word& w, const Scalar& c);
  void require_same(const Element& o) const;

  PresentationPtr pres_;
  Terms terms_;
};

/// Multiply two elements (alias of operator*), exposed for API symmetry.
Element multiply(const Element& a, const Element& b);
Element star(const Element& a);

/// Local confluence certificate up to a degree bound, plus star-compatibility of the rules.
Report check_presentation(const PresentationPtr& p, int degree);

}  // namespace qpfb
