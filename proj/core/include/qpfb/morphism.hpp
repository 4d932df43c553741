#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qpfb/presentation.hpp"
#include "qpfb/report.hpp"

namespace qpfb {

class Morphism;
using MorphismPtr = std::shared_ptr<const Morphism>;

/// Algebra (or anti-algebra) map between presentations, given on generators.
class Morphism {
 public:
  struct Spec {
    std::string name;
    PresentationPtr source;
    PresentationPtr target;
    /// One image per source generator, in generator order.
    std::vector<Element> images;
    bool antimultiplicative = false;
    /// Also require image(g*) == star(image(g)).
    bool star_preserving = false;
  };

  /// Builds the morphism and certifies it; throws WitnessError on the first
  /// relation (or star pair) that is not respected.
  static MorphismPtr create(Spec spec);
  /// Builds the morphism without a certificate; apply() refuses to run.
  static MorphismPtr create_unchecked(Spec spec);
  static MorphismPtr identity(const PresentationPtr& p);

  const std::string& name() const { return spec_.name; }
  const PresentationPtr& source() const { return spec_.source; }
  const PresentationPtr& target() const { return spec_.target; }
  const std::vector<Element>& images() const { return spec_.images; }
  bool antimultiplicative() const { return spec_.antimultiplicative; }
  bool star_preserving() const { return spec_.star_preserving; }
  bool certified() const { return certified_; }

  /// Well-definedness (every source rule maps to an identity in the target)
  /// and, if requested, star compatibility.
  Report check() const;

  Element apply(const Element& a) const;
  Element apply_word(const Word& w) const;

  /// Same morphism with every generator image raised to the n-th power.
  MorphismPtr generator_power(int n, const std::string& name) const;

 private:
  explicit Morphism(Spec spec) : spec_(std::move(spec)) {}
  Element apply_raw(const Word& w) const;

  Spec spec_;
  bool certified_ = false;
  mutable std::mutex memo_mutex_;
  mutable std::map<Word, Element, DegLex> memo_;
};

Element apply_morphism(const Morphism& m, const Element& a);

}  // namespace qpfb
