#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <string>

#include <doctest.h>

#include "qpfb/corpus.hpp"
#include "qpfb/workspace.hpp"

namespace testing {

using namespace qpfb;

inline Word word_of(const PresentationPtr& p, std::initializer_list<const char*> gens) {
  Word w;
  for (const char* g : gens) w.push_back(p->generator(g));
  return w;
}

/// c * g_1 ... g_k stored directly as a normal word (no multiplication involved).
inline Element mono(const PresentationPtr& p, std::initializer_list<const char*> gens, const Scalar& c = Scalar(1L)) {
  Word w = word_of(p, gens);
  REQUIRE(p->is_irreducible(w));
  return Element::word(p, w, c);
}

inline Scalar q(int e = 1) { return Scalar::param("q", e); }
inline Scalar nu(int e = 1) { return Scalar::param("nu", e); }

/// All shipped files, in dependency order.
inline std::shared_ptr<Workspace> load_corpus(const std::map<std::string, Rational>& specialize = {}) {
  ParseOptions opts;
  opts.specialize = specialize;
  auto ws = std::make_shared<Workspace>(opts);
  for (const char* stem : {"u1", "s1", "sunu2", "tube", "example", "u1_central"}) ws->parse_file(corpus_file(stem));
  return ws;
}

inline const Workspace& corpus() {
  static const std::shared_ptr<Workspace> ws = load_corpus();
  return *ws;
}

inline const Workspace& corpus_at_one() {
  static const std::shared_ptr<Workspace> ws = load_corpus({{"q", 1}, {"nu", 1}});
  return *ws;
}

inline std::string data_file(const std::string& name) { return std::string(QPFB_TEST_DATA_DIR) + "/" + name; }

}  // namespace testing
