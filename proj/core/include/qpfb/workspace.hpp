#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpfb/bundle.hpp"
#include "qpfb/calculus.hpp"
#include "qpfb/error.hpp"
#include "qpfb/gauge.hpp"
#include "qpfb/hopf.hpp"
#include "qpfb/linmap.hpp"
#include "qpfb/morphism.hpp"
#include "qpfb/presentation.hpp"

namespace qpfb {

/// Syntax or semantic error in a presentation file, with its location.
class ParseError : public Error {
 public:
  ParseError(std::string file, int line, int column, const std::string& message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string file_;
  int line_;
  int column_;
  std::string message_;
};

struct ParseOptions {
  /// Parameter values substituted while parsing (e.g. q = 1).
  std::map<std::string, Rational> specialize;
  /// Degree bound for certificates computed while building bundles.
  int degree = 2;
};

struct CorepDecl {
  std::string name;
  HopfPtr hopf;
  ElementMatrix u;
};

struct ConnectionDecl {
  ConnectionForm form;
  HopfPtr hopf;
  PresentationPtr base;
  /// (family, chart) pairs whose chart maps transform this connection.
  std::vector<std::pair<std::string, ChartId>> gauges;
};

struct IdealDecl {
  IdealSpec spec;
  HopfPtr hopf;
  PresentationPtr base;
  bool tauinv_declared = false;
  std::optional<std::string> connection;
};

struct FamilyDecl {
  GaugeFamily family;
  std::map<ChartId, bool> tauinv_declared;
};

struct MorphismDecl {
  MorphismPtr morphism;
  /// Set when the images do not respect the relations; the morphism is kept
  /// uncertified so the checks can report the failure.
  std::optional<std::string> failure;
};

/// Everything declared by a set of presentation files, in declaration order.
class Workspace {
 public:
  enum class BlockKind { Algebra, Hopf, Morphism, Bundle, Family, Corep, Connection, Ideal };

  explicit Workspace(ParseOptions options = {});

  /// Throws ParseError (also for unreadable files).
  void parse_file(const std::string& path);
  void parse_text(const std::string& text, const std::string& source_name = "<text>");

  std::size_t document_count() const { return documents_.size(); }
  const std::string& document_name(std::size_t i) const { return documents_.at(i).name; }
  /// Canonical text of a parsed document; parse(print(doc)) reproduces it.
  std::string print(std::size_t document) const;

  const ParseOptions& options() const { return options_; }

  PresentationPtr algebra(const std::string& name) const;
  HopfPtr hopf(const std::string& name) const;
  MorphismPtr morphism(const std::string& name) const;
  BundlePtr bundle(const std::string& name) const;
  const FamilyDecl& family(const std::string& name) const;
  const CorepDecl& corep(const std::string& name) const;
  const ConnectionDecl& connection(const std::string& name) const;
  const IdealDecl& ideal(const std::string& name) const;

  const std::vector<std::pair<std::string, PresentationPtr>>& algebras() const { return algebras_; }
  const std::vector<std::pair<std::string, HopfPtr>>& hopfs() const { return hopfs_; }
  const std::vector<std::pair<std::string, MorphismDecl>>& morphisms() const { return morphisms_; }
  const std::vector<std::pair<std::string, BundlePtr>>& bundles() const { return bundles_; }
  const std::vector<std::pair<std::string, FamilyDecl>>& families() const { return families_; }
  const std::vector<std::pair<std::string, CorepDecl>>& coreps() const { return coreps_; }
  const std::vector<std::pair<std::string, ConnectionDecl>>& connections() const { return connections_; }
  const std::vector<std::pair<std::string, IdealDecl>>& ideals() const { return ideals_; }

  /// Parses a linear map expression (hom(..), conv(..), table {..}, ...) from H into `target`.
  LinMapPtr parse_linmap(const std::string& text, const HopfPtr& h, const PresentationPtr& target) const;
  /// Parses an element expression over p.
  Element parse_element(const std::string& text, const PresentationPtr& p) const;

 private:
  struct Document {
    std::string name;
    std::vector<std::pair<BlockKind, std::string>> blocks;
  };
  friend class Parser;

  ParseOptions options_;
  std::vector<Document> documents_;
  std::vector<std::string> params_;
  std::vector<std::pair<std::string, PresentationPtr>> algebras_;
  std::vector<std::pair<std::string, HopfPtr>> hopfs_;
  std::vector<std::pair<std::string, MorphismDecl>> morphisms_;
  std::vector<std::pair<std::string, BundlePtr>> bundles_;
  std::vector<std::pair<std::string, FamilyDecl>> families_;
  std::vector<std::pair<std::string, CorepDecl>> coreps_;
  std::vector<std::pair<std::string, ConnectionDecl>> connections_;
  std::vector<std::pair<std::string, IdealDecl>> ideals_;
};

/// Collapses whitespace, drops comments and blank lines; used to compare
/// presentation files modulo layout.
std::string normalize_layout(const std::string& text);

}  // namespace qpfb
