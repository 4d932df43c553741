#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qpfb/hopf.hpp"
#include "qpfb/morphism.hpp"
#include "qpfb/report.hpp"

namespace qpfb {

class LinMap;
using LinMapPtr = std::shared_ptr<const LinMap>;

enum class Side { Left, Right };
std::string to_string(Side s);

/// Linear map H -> B given by a constructor tree and evaluated on normal
/// monomials of H (memoized per node).
class LinMap {
 public:
  enum class Kind {
    Hom,              // algebra map given on generators (optionally generator powers)
    Unit,             // h -> eps(h) 1
    Identity,         // H -> H
    Convolve,         // (f * g)(h) = sum f(h_1) g(h_2)
    TwistedConvolve,  // (f *' g)(h) = sum f(h_2) g(h_1)
    Power,            // n-fold convolution power
    TwistedPower,     // n-fold twisted convolution power
    PrecomposeS,      // f o S
    PrecomposeSInv,   // f o S^-1
    Postcompose,      // m o f for an algebra map m
    Table,            // explicit values on monomials, optional fallback map
  };

  static LinMapPtr hom(HopfPtr h, MorphismPtr m, int power = 1);
  static LinMapPtr unit(HopfPtr h, PresentationPtr target);
  static LinMapPtr identity(HopfPtr h);
  static LinMapPtr convolve(const LinMapPtr& f, const LinMapPtr& g);
  static LinMapPtr twisted_convolve(const LinMapPtr& f, const LinMapPtr& g);
  static LinMapPtr power(const LinMapPtr& f, int n);
  static LinMapPtr twisted_power(const LinMapPtr& f, int n);
  /// n-th power of f o S, i.e. h -> sum f(S(h_1)) ... f(S(h_n)).
  static LinMapPtr power_via_antipode(const LinMapPtr& f, int n);
  static LinMapPtr precompose_S(const LinMapPtr& f);
  static LinMapPtr precompose_Sinv(const LinMapPtr& f);
  static LinMapPtr postcompose(MorphismPtr m, const LinMapPtr& f);
  /// Values on the listed normal monomials; other monomials use `fallback`
  /// or raise an error when there is none.
  static LinMapPtr table(HopfPtr h, PresentationPtr target, std::map<Word, Element, DegLex> values,
                         LinMapPtr fallback = nullptr);

  Kind kind() const { return kind_; }
  const HopfPtr& source() const { return source_; }
  const PresentationPtr& target() const { return target_; }
  const std::vector<LinMapPtr>& children() const { return children_; }
  const MorphismPtr& morphism() const { return morphism_; }
  int exponent() const { return n_; }
  const std::map<Word, Element, DegLex>& table_values() const { return table_; }

  Element apply(const Word& w) const;
  Element apply(const Element& h) const;

  /// Canonical constructor text (the presentation-file syntax).
  std::string describe() const;

  /// Symbolic convolution inverse (twisted for Side::Right); throws Error when
  /// the tree has no derivable inverse.
  LinMapPtr convolution_inverse(Side side) const;

 private:
  LinMap(Kind k, HopfPtr src, PresentationPtr tgt) : kind_(k), source_(std::move(src)), target_(std::move(tgt)) {}
  Element compute(const Word& w) const;
  static std::shared_ptr<LinMap> make(Kind k, HopfPtr src, PresentationPtr tgt);
  LinMapPtr self() const { return self_.lock(); }

  Kind kind_;
  HopfPtr source_;
  PresentationPtr target_;
  std::vector<LinMapPtr> children_;
  MorphismPtr morphism_;
  MorphismPtr powered_;
  int n_ = 1;
  std::map<Word, Element, DegLex> table_;
  std::weak_ptr<const LinMap> self_;

  mutable std::mutex memo_mutex_;
  mutable std::map<Word, Element, DegLex> memo_;
};

/// sum f(h_1) g(h_2) = eps(h) 1 (untwisted) or sum f(h_2) g(h_1) = eps(h) 1
/// (twisted), on every monomial of degree <= d, from the requested side(s).
enum class InverseSide { Both, Left, Right };
Report check_conv_inverse(const LinMap& f, const LinMap& g, int d, InverseSide side, bool twisted,
                          const std::string& label = {});

/// Convolution of two arbitrary maps evaluated once (no tree): used by checks.
Element convolve_at(const LinMap& f, const LinMap& g, const Word& w, bool twisted);

}  // namespace qpfb
