#include "qpfb/workspace.hpp"

#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include "expr.hpp"

namespace qpfb {

using detail::ExprError;
using detail::ExprMode;
using detail::Node;

ParseError::ParseError(std::string file, int line, int column, const std::string& message)
    : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column),
      message_(message) {}

std::string normalize_layout(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::string w, joined;
    while (words >> w) joined += (joined.empty() ? "" : " ") + w;
    if (!joined.empty()) out += joined + "\n";
  }
  return out;
}

namespace {

using Poly = std::map<Word, Scalar, DegLex>;

void poly_add(Poly& p, const Word& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      poly_add(out, w, ca * cb);
    }
  }
  return out;
}

bool poly_is_constant(const Poly& p) { return p.empty() || (p.size() == 1 && p.begin()->first.empty()); }

RawSum to_raw(const Poly& p) { return RawSum(p.begin(), p.end()); }

/// Joins signed terms the way Element::str does.
std::string format_terms(const std::vector<std::pair<std::string, Scalar>>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [body, c] : terms) {
    bool neg = false;
    std::string coeff;
    if (c.is_unit()) {
      neg = c.terms().begin()->second < 0;
      coeff = (neg ? -c : c).str();
    } else {
      coeff = c.str();
    }
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    if (body.empty()) {
      os << coeff;
    } else {
      if (coeff != "1") os << coeff << ' ';
      os << body;
    }
    first = false;
  }
  return os.str();
}

std::string raw_str(const std::vector<std::string>& gens, const RawSum& raw) {
  std::vector<std::pair<std::string, Scalar>> terms;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    std::string body;
    for (Gen g : it->first) body += (body.empty() ? "" : " ") + gens.at(g);
    terms.emplace_back(body, it->second);
  }
  return format_terms(terms);
}

std::string side_str(Side s) { return s == Side::Left ? "left" : "right"; }

std::string pair_str(const ChartPair& p) { return std::to_string(p.first) + std::to_string(p.second); }

struct Line {
  int no = 0;
  std::string text;
};

struct Block {
  Line header;
  std::vector<Line> body;
};

}  // namespace

/// Reads blocks of one document into the workspace.
class Parser {
 public:
  Parser(Workspace& ws, std::string file) : ws_(ws), file_(std::move(file)) {}

  void run(const std::string& text) {
    Workspace::Document doc{file_, {}};
    std::vector<Block> blocks;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    static const std::regex header(R"(^\s*(algebra|hopf|morphism|bundle|gauge\s+family|corep|connection\s+\w+\s+(left|right)|ideal)\b.*)");
    while (std::getline(in, raw)) {
      ++no;
      if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (raw.find_first_not_of(" \t") == std::string::npos) continue;
      Line line{no, raw};
      if (std::regex_match(raw, header)) {
        blocks.push_back({line, {}});
      } else if (blocks.empty()) {
        fail(line, first_col(line), "statement outside of a block");
      } else {
        blocks.back().body.push_back(line);
      }
    }
    for (const auto& b : blocks) doc.blocks.push_back(build(b));
    ws_.documents_.push_back(std::move(doc));
  }

  // Expression evaluation, shared with Workspace::parse_*.

  Poly eval_poly(const Node& n, const std::vector<std::string>& gens, const Line& line) const {
    switch (n.kind) {
      case Node::Num:
        return Poly{{Word{}, Scalar(n.num)}};
      case Node::Ident: {
        for (std::size_t g = 0; g < gens.size(); ++g) {
          if (gens[g] == n.name) return Poly{{Word{static_cast<Gen>(g)}, Scalar(1L)}};
        }
        return Poly{{Word{}, param_value(n, line)}};
      }
      case Node::Add:
      case Node::Sub: {
        Poly a = eval_poly(n.kids[0], gens, line);
        Poly b = eval_poly(n.kids[1], gens, line);
        for (const auto& [w, c] : b) poly_add(a, w, n.kind == Node::Add ? c : -c);
        return a;
      }
      case Node::Neg: {
        Poly a = eval_poly(n.kids[0], gens, line);
        for (auto& [w, c] : a) c = -c;
        return a;
      }
      case Node::Mul:
        return poly_mul(eval_poly(n.kids[0], gens, line), eval_poly(n.kids[1], gens, line));
      case Node::Div: {
        Scalar inv = unit_inverse(eval_poly(n.kids[1], gens, line), n.kids[1], line);
        Poly a = eval_poly(n.kids[0], gens, line);
        Poly out;
        for (const auto& [w, c] : a) poly_add(out, w, c * inv);
        return out;
      }
      case Node::Pow: {
        Poly base = eval_poly(n.kids[0], gens, line);
        if (n.exponent < 0) {
          Scalar inv = unit_inverse(base, n.kids[0], line);
          return Poly{{Word{}, inv.pow(-n.exponent)}};
        }
        Poly out{{Word{}, Scalar(1L)}};
        for (int i = 0; i < n.exponent; ++i) out = poly_mul(out, base);
        return out;
      }
      case Node::Tensor:
        fail(line, n.column, "tensor mark (x) not allowed here");
      case Node::D:
        fail(line, n.column, "differential not allowed here");
    }
    return {};
  }

  Element eval_element(const Node& n, const PresentationPtr& p, const Line& line) const {
    return Element::normalize(p, to_raw(eval_poly(n, p->generators(), line)));
  }

  Scalar eval_scalar(const Node& n, const Line& line) const {
    Poly p = eval_poly(n, {}, line);
    if (p.empty()) return Scalar();
    return p.begin()->second;
  }

  TensorElement eval_tensor(const Node& n, const std::vector<PresentationPtr>& slots, const Line& line) const {
    switch (n.kind) {
      case Node::Add:
      case Node::Sub: {
        TensorElement a = eval_tensor(n.kids[0], slots, line);
        TensorElement b = eval_tensor(n.kids[1], slots, line);
        return n.kind == Node::Add ? a + b : a - b;
      }
      case Node::Neg:
        return Scalar(-1L) * eval_tensor(n.kids[0], slots, line);
      case Node::Tensor: {
        if (n.kids.size() != slots.size())
          fail(line, n.column, "expected " + std::to_string(slots.size()) + " tensor factors");
        std::vector<Element> factors;
        for (std::size_t i = 0; i < slots.size(); ++i) factors.push_back(eval_element(n.kids[i], slots[i], line));
        return TensorElement::product_of(factors);
      }
      default: {
        Poly p = eval_poly(n, {}, line);
        if (p.empty()) return TensorElement(slots);
        fail(line, n.column, "expected a tensor term a (x) b");
      }
    }
  }

  UnivForm eval_form(const Node& n, const PresentationPtr& p, const Line& line) const {
    switch (n.kind) {
      case Node::Num:
      case Node::Ident:
        return UnivForm::from_element(eval_element(n, p, line));
      case Node::Add:
      case Node::Sub: {
        UnivForm a = eval_form(n.kids[0], p, line);
        UnivForm b = eval_form(n.kids[1], p, line);
        if (a.is_zero() && a.degree() != b.degree()) a = UnivForm(p, b.degree());
        if (b.is_zero() && a.degree() != b.degree()) b = UnivForm(p, a.degree());
        if (a.degree() != b.degree()) fail(line, n.column, "sum of forms of different degree");
        return n.kind == Node::Add ? a + b : a - b;
      }
      case Node::Neg:
        return Scalar(-1L) * eval_form(n.kids[0], p, line);
      case Node::Mul:
        return form_multiply(eval_form(n.kids[0], p, line), eval_form(n.kids[1], p, line));
      case Node::Div: {
        Scalar inv = unit_inverse(eval_poly(n.kids[1], {}, line), n.kids[1], line);
        return inv * eval_form(n.kids[0], p, line);
      }
      case Node::Pow: {
        UnivForm base = eval_form(n.kids[0], p, line);
        if (base.degree() != 0) fail(line, n.column, "powers of forms of positive degree");
        if (n.exponent < 0) return UnivForm::from_element(eval_element(n, p, line));
        Element e(p);
        for (const auto& [k, c] : base.terms().terms()) e += Element::word(p, k[0], c);
        Element out = Element::one(p);
        for (int i = 0; i < n.exponent; ++i) out = out * e;
        return UnivForm::from_element(out);
      }
      case Node::D: {
        UnivForm inner = eval_form(n.kids[0], p, line);
        return d(inner);
      }
      case Node::Tensor:
        fail(line, n.column, "tensor mark (x) not allowed in a form");
    }
    return UnivForm(p, 0);
  }

  Node parse_expr(const std::string& text, int column0, ExprMode mode, const Line& line) const {
    try {
      return detail::parse_expression(text, column0, mode);
    } catch (const ExprError& e) {
      fail(line, e.column, e.message);
    }
  }

  Element element_at(const std::smatch& m, int group, const PresentationPtr& p, const Line& line) const {
    return eval_element(parse_expr(m.str(group), col(m, group), ExprMode::Plain, line), p, line);
  }

  /// A single normal monomial with coefficient 1 over `p`.
  Word word_at(const std::string& text, int column0, const PresentationPtr& p, const Line& line) const {
    Poly poly = eval_poly(parse_expr(text, column0, ExprMode::Plain, line), p->generators(), line);
    if (poly.size() != 1 || !poly.begin()->second.is_one())
      fail(line, column0, "expected a monomial of '" + p->name() + "'");
    const Word& w = poly.begin()->first;
    if (!p->is_irreducible(w)) fail(line, column0, "'" + p->word_str(w) + "' is not in normal form");
    return w;
  }

  // Linear map expressions.

  LinMapPtr linmap(const std::string& text, int column0, const HopfPtr& h, const PresentationPtr& target,
                   const Line& line) const {
    std::size_t pos = 0;
    LinMapPtr f = linmap_at(text, pos, column0, h, target, line);
    skip_ws(text, pos);
    if (pos != text.size()) fail(line, column0 + static_cast<int>(pos), "trailing input after linear map");
    return f;
  }

  [[noreturn]] void fail(const Line& line, int column, const std::string& msg) const {
    throw ParseError(file_, line.no, column, msg);
  }

 private:
  static int col(const std::smatch& m, int group) { return static_cast<int>(m.position(group)) + 1; }
  static int first_col(const Line& l) { return static_cast<int>(l.text.find_first_not_of(" \t")) + 1; }
  static void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  Scalar param_value(const Node& n, const Line& line) const {
    const auto& params = ws_.params_;
    if (std::find(params.begin(), params.end(), n.name) == params.end())
      fail(line, n.column, "unknown symbol '" + n.name + "'");
    auto it = ws_.options_.specialize.find(n.name);
    if (it != ws_.options_.specialize.end()) return Scalar(it->second);
    return Scalar::param(n.name);
  }

  Scalar unit_inverse(const Poly& p, const Node& at, const Line& line) const {
    if (!poly_is_constant(p) || p.empty() || !p.begin()->second.is_unit())
      fail(line, at.column, "can only divide by a nonzero scalar monomial");
    return p.begin()->second.unit_inverse();
  }

  std::string ident_at(const std::string& s, std::size_t& pos) const {
    skip_ws(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    return s.substr(start, pos - start);
  }

  void expect_char(const std::string& s, std::size_t& pos, char c, int column0, const Line& line) const {
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != c)
      fail(line, column0 + static_cast<int>(pos), std::string("expected '") + c + "'");
    ++pos;
  }

  int int_at(const std::string& s, std::size_t& pos, int column0, const Line& line) const {
    skip_ws(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail(line, column0 + static_cast<int>(start), "expected a positive integer");
    return std::stoi(s.substr(start, pos - start));
  }

  MorphismPtr morphism_ref(const std::string& name, int column, const Line& line) const {
    for (const auto& [n, m] : ws_.morphisms_) {
      if (n == name) return m.morphism;
    }
    fail(line, column, "unknown morphism '" + name + "'");
  }

  LinMapPtr linmap_at(const std::string& s, std::size_t& pos, int column0, const HopfPtr& h,
                      const PresentationPtr& target, const Line& line) const {
    skip_ws(s, pos);
    const int at = column0 + static_cast<int>(pos);
    std::string kw = ident_at(s, pos);
    LinMapPtr f;
    try {
      if (kw == "hom" || kw == "hompow") {
        expect_char(s, pos, '(', column0, line);
        std::size_t npos = pos;
        skip_ws(s, npos);
        std::string name = ident_at(s, pos);
        MorphismPtr m = morphism_ref(name, column0 + static_cast<int>(npos), line);
        int n = 1;
        if (kw == "hompow") {
          expect_char(s, pos, ',', column0, line);
          n = int_at(s, pos, column0, line);
        }
        expect_char(s, pos, ')', column0, line);
        f = LinMap::hom(h, m, n);
      } else if (kw == "unit") {
        if (!target) fail(line, at, "unit needs a known target algebra here");
        f = LinMap::unit(h, target);
      } else if (kw == "id") {
        f = LinMap::identity(h);
      } else if (kw == "conv" || kw == "tconv") {
        expect_char(s, pos, '(', column0, line);
        LinMapPtr a = linmap_at(s, pos, column0, h, target, line);
        expect_char(s, pos, ',', column0, line);
        LinMapPtr b = linmap_at(s, pos, column0, h, target ? target : a->target(), line);
        expect_char(s, pos, ')', column0, line);
        f = kw == "conv" ? LinMap::convolve(a, b) : LinMap::twisted_convolve(a, b);
      } else if (kw == "convpow" || kw == "tconvpow") {
        expect_char(s, pos, '(', column0, line);
        LinMapPtr a = linmap_at(s, pos, column0, h, target, line);
        expect_char(s, pos, ',', column0, line);
        int n = int_at(s, pos, column0, line);
        expect_char(s, pos, ')', column0, line);
        f = kw == "convpow" ? LinMap::power(a, n) : LinMap::twisted_power(a, n);
      } else if (kw == "compose_S" || kw == "compose_Sinv") {
        expect_char(s, pos, '(', column0, line);
        LinMapPtr a = linmap_at(s, pos, column0, h, target, line);
        expect_char(s, pos, ')', column0, line);
        f = kw == "compose_S" ? LinMap::precompose_S(a) : LinMap::precompose_Sinv(a);
      } else if (kw == "post") {
        expect_char(s, pos, '(', column0, line);
        std::size_t npos = pos;
        skip_ws(s, npos);
        std::string name = ident_at(s, pos);
        MorphismPtr m = morphism_ref(name, column0 + static_cast<int>(npos), line);
        expect_char(s, pos, ',', column0, line);
        LinMapPtr a = linmap_at(s, pos, column0, h, m->source(), line);
        expect_char(s, pos, ')', column0, line);
        f = LinMap::postcompose(m, a);
      } else if (kw == "table" || kw == "patch") {
        LinMapPtr fallback;
        if (kw == "patch") {
          expect_char(s, pos, '(', column0, line);
          fallback = linmap_at(s, pos, column0, h, target, line);
          expect_char(s, pos, ')', column0, line);
        }
        PresentationPtr tgt = target ? target : (fallback ? fallback->target() : nullptr);
        if (!tgt) fail(line, at, "table needs a known target algebra here");
        expect_char(s, pos, '{', column0, line);
        std::size_t close = s.find('}', pos);
        if (close == std::string::npos) fail(line, column0 + static_cast<int>(s.size()), "expected '}'");
        std::map<Word, Element, DegLex> values;
        std::size_t entry = pos;
        while (entry < close) {
          std::size_t end = std::min(s.find(';', entry), close);
          std::string item = s.substr(entry, end - entry);
          if (item.find_first_not_of(" \t") != std::string::npos) {
            std::size_t arrow = item.find("->");
            if (arrow == std::string::npos) fail(line, column0 + static_cast<int>(entry), "expected 'word -> value'");
            Word w = word_at(item.substr(0, arrow), column0 + static_cast<int>(entry), h->algebra(), line);
            int vcol = column0 + static_cast<int>(entry + arrow + 2);
            Element v = eval_element(parse_expr(item.substr(arrow + 2), vcol, ExprMode::Plain, line), tgt, line);
            if (!values.emplace(w, v).second)
              fail(line, column0 + static_cast<int>(entry), "duplicate table entry " + h->algebra()->word_str(w));
          }
          entry = end + 1;
        }
        pos = close + 1;
        f = LinMap::table(h, tgt, std::move(values), fallback);
      } else {
        fail(line, at, kw.empty() ? "expected a linear map" : "unknown linear map constructor '" + kw + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(line, at, e.what());
    }
    if (target && f->target() != target)
      fail(line, at, f->describe() + " lands in '" + f->target()->name() + "', expected '" + target->name() + "'");
    return f;
  }

  // Blocks.

  PresentationPtr algebra_ref(const std::string& name, int column, const Line& line) const {
    for (const auto& [n, p] : ws_.algebras_) {
      if (n == name) return p;
    }
    fail(line, column, "unknown algebra '" + name + "'");
  }

  HopfPtr hopf_ref(const std::string& name, int column, const Line& line) const {
    for (const auto& [n, h] : ws_.hopfs_) {
      if (n == name) return h;
    }
    fail(line, column, "no Hopf structure declared on '" + name + "'");
  }

  Side side_of(const std::string& s) const { return s == "left" ? Side::Left : Side::Right; }

  template <typename Vec>
  void require_new(const Vec& v, const std::string& name, const Line& line, int column, const char* what) const {
    for (const auto& e : v) {
      if (e.first == name) fail(line, column, std::string("duplicate ") + what + " '" + name + "'");
    }
  }

  std::pair<Workspace::BlockKind, std::string> build(const Block& b) {
    static const std::regex algebra_re(R"(^\s*algebra\s+(\w+)\s*$)");
    static const std::regex hopf_re(R"(^\s*hopf\s+(\w+)\s*$)");
    static const std::regex morphism_re(R"(^\s*morphism\s+(\w+)\s*:\s*(\w+)\s*->\s*(\w+)\s*$)");
    static const std::regex bundle_re(R"(^\s*bundle\s+(\w+)\s*$)");
    static const std::regex family_re(R"(^\s*gauge\s+family\s+(\w+)\s+(left|right)\s+over\s+(\w+)\s*$)");
    static const std::regex corep_re(R"(^\s*corep\s+(\w+)\s+over\s+(\w+)\s*$)");
    static const std::regex connection_re(R"(^\s*connection\s+(\w+)\s+(left|right)\s+over\s+(\w+)\s+(\w+)\s*$)");
    static const std::regex ideal_re(R"(^\s*ideal\s+(\w+)\s+(left|right)\s+over\s+(\w+)\s+(\w+)\s*$)");
    std::smatch m;
    const Line& h = b.header;
    if (std::regex_match(h.text, m, algebra_re)) return {Workspace::BlockKind::Algebra, build_algebra(b, m)};
    if (std::regex_match(h.text, m, hopf_re)) return {Workspace::BlockKind::Hopf, build_hopf(b, m)};
    if (std::regex_match(h.text, m, morphism_re)) return {Workspace::BlockKind::Morphism, build_morphism(b, m)};
    if (std::regex_match(h.text, m, bundle_re)) return {Workspace::BlockKind::Bundle, build_bundle(b, m)};
    if (std::regex_match(h.text, m, family_re)) return {Workspace::BlockKind::Family, build_family(b, m)};
    if (std::regex_match(h.text, m, corep_re)) return {Workspace::BlockKind::Corep, build_corep(b, m)};
    if (std::regex_match(h.text, m, connection_re))
      return {Workspace::BlockKind::Connection, build_connection(b, m)};
    if (std::regex_match(h.text, m, ideal_re)) return {Workspace::BlockKind::Ideal, build_ideal(b, m)};
    fail(h, first_col(h), "malformed block header");
  }

  std::string build_algebra(const Block& b, const std::smatch& hm) {
    static const std::regex params_re(R"(^\s*params((\s+\w+)+)\s*$)");
    static const std::regex gens_re(R"(^\s*gens(.*)$)");
    static const std::regex star_re(R"(^\s*star\s+(\w+\*?)\s*<->\s*(\w+\*?)\s*$)");
    static const std::regex rule_re(R"(^\s*rule\s+(.+?)\s*->\s*(.+?)\s*$)");
    static const std::regex word_re(R"(\w+\*?)");
    Presentation::Spec spec;
    spec.name = hm.str(1);
    require_new(ws_.algebras_, spec.name, b.header, col(hm, 1), "algebra");
    std::vector<std::pair<Line, std::smatch>> rules;
    for (const auto& line : b.body) {
      std::smatch m;
      if (std::regex_match(line.text, m, params_re)) {
        std::istringstream ps(m.str(1));
        std::string p;
        while (ps >> p) {
          spec.params.push_back(p);
          if (std::find(ws_.params_.begin(), ws_.params_.end(), p) == ws_.params_.end()) {
            ws_.params_.push_back(p);
            ParamRegistry::intern(p);
          }
        }
      } else if (std::regex_match(line.text, m, gens_re)) {
        std::string rest = m.str(1);
        for (auto it = std::sregex_iterator(rest.begin(), rest.end(), word_re); it != std::sregex_iterator(); ++it) {
          std::string g = it->str();
          int c = col(m, 1) + static_cast<int>(it->position());
          if (std::find(spec.generators.begin(), spec.generators.end(), g) != spec.generators.end())
            fail(line, c, "duplicate generator '" + g + "'");
          if (std::find(ws_.params_.begin(), ws_.params_.end(), g) != ws_.params_.end())
            fail(line, c, "generator '" + g + "' clashes with a parameter");
          spec.generators.push_back(g);
        }
        if (spec.generators.empty()) fail(line, first_col(line), "empty generator list");
      } else if (std::regex_match(line.text, m, star_re)) {
        for (int g : {1, 2}) {
          if (std::find(spec.generators.begin(), spec.generators.end(), m.str(g)) == spec.generators.end())
            fail(line, col(m, g), "unknown generator '" + m.str(g) + "'");
        }
        spec.star_pairs.emplace_back(m.str(1), m.str(2));
      } else if (std::regex_match(line.text, m, rule_re)) {
        rules.emplace_back(line, m);
      } else {
        fail(line, first_col(line), "unexpected statement in algebra block");
      }
    }
    if (spec.generators.empty()) fail(b.header, col(hm, 1), "algebra '" + spec.name + "' has an empty generator list");
    for (const auto& [line, m] : rules) {
      Poly lhs = eval_poly(parse_expr(m.str(1), col(m, 1), ExprMode::Plain, line), spec.generators, line);
      if (lhs.size() != 1 || !lhs.begin()->second.is_one() || lhs.begin()->first.empty())
        fail(line, col(m, 1), "rule left-hand side must be a single word");
      Poly rhs = eval_poly(parse_expr(m.str(2), col(m, 2), ExprMode::Plain, line), spec.generators, line);
      const Word& w = lhs.begin()->first;
      DegLex less;
      for (const auto& [rw, rc] : rhs) {
        if (!less(rw, w)) fail(line, col(m, 2), "rule does not lower the word order");
      }
      spec.rules.push_back(Rule{w, to_raw(rhs)});
    }
    PresentationPtr p;
    try {
      p = Presentation::create(std::move(spec));
    } catch (const Error& e) {
      fail(b.header, col(hm, 1), e.what());
    }
    ws_.algebras_.emplace_back(p->name(), p);
    return p->name();
  }

  std::string build_hopf(const Block& b, const std::smatch& hm) {
    static const std::regex line_re(R"(^\s*(Delta|eps|S|Sinv)\s+(\w+\*?)\s*=\s*(.+?)\s*$)");
    PresentationPtr p = algebra_ref(hm.str(1), col(hm, 1), b.header);
    require_new(ws_.hopfs_, p->name(), b.header, col(hm, 1), "Hopf structure on");
    const std::size_t n = p->generator_count();
    std::vector<std::optional<TensorElement>> delta(n);
    std::vector<std::optional<Scalar>> eps(n);
    std::vector<std::optional<Element>> S(n), Sinv(n);
    bool any_sinv = false;
    for (const auto& line : b.body) {
      std::smatch m;
      if (!std::regex_match(line.text, m, line_re)) fail(line, first_col(line), "unexpected statement in hopf block");
      auto g = p->find_generator(m.str(2));
      if (!g) fail(line, col(m, 2), "unknown generator '" + m.str(2) + "'");
      const std::string kind = m.str(1);
      auto dup = [&](bool set) {
        if (set) fail(line, col(m, 1), kind + " of '" + m.str(2) + "' given twice");
      };
      if (kind == "Delta") {
        dup(delta[*g].has_value());
        delta[*g] = eval_tensor(parse_expr(m.str(3), col(m, 3), ExprMode::Tensor, line), {p, p}, line);
      } else if (kind == "eps") {
        dup(eps[*g].has_value());
        eps[*g] = eval_scalar(parse_expr(m.str(3), col(m, 3), ExprMode::Plain, line), line);
      } else if (kind == "S") {
        dup(S[*g].has_value());
        S[*g] = element_at(m, 3, p, line);
      } else {
        dup(Sinv[*g].has_value());
        Sinv[*g] = element_at(m, 3, p, line);
        any_sinv = true;
      }
    }
    HopfAlgebra::Spec spec;
    spec.algebra = p;
    std::vector<Element> sinv;
    for (std::size_t g = 0; g < n; ++g) {
      const std::string& name = p->generators()[g];
      if (!delta[g]) fail(b.header, col(hm, 1), "missing Delta " + name);
      if (!eps[g]) fail(b.header, col(hm, 1), "missing eps " + name);
      if (!S[g]) fail(b.header, col(hm, 1), "missing S " + name);
      if (any_sinv && !Sinv[g]) fail(b.header, col(hm, 1), "missing Sinv " + name);
      spec.coproduct.push_back(*delta[g]);
      spec.counit.push_back(*eps[g]);
      spec.antipode.push_back(*S[g]);
      if (any_sinv) sinv.push_back(*Sinv[g]);
    }
    if (any_sinv) spec.antipode_inv = std::move(sinv);
    HopfPtr hp;
    try {
      hp = HopfAlgebra::create(std::move(spec));
    } catch (const Error& e) {
      fail(b.header, col(hm, 1), e.what());
    }
    ws_.hopfs_.emplace_back(p->name(), hp);
    return p->name();
  }

  std::string build_morphism(const Block& b, const std::smatch& hm) {
    static const std::regex map_re(R"(^\s*map\s+(\w+\*?)\s*=\s*(.+?)\s*$)");
    static const std::regex anti_re(R"(^\s*antimultiplicative\s*$)");
    Morphism::Spec spec;
    spec.name = hm.str(1);
    require_new(ws_.morphisms_, spec.name, b.header, col(hm, 1), "morphism");
    spec.source = algebra_ref(hm.str(2), col(hm, 2), b.header);
    spec.target = algebra_ref(hm.str(3), col(hm, 3), b.header);
    spec.star_preserving = spec.source->has_star() && spec.target->has_star();
    std::vector<std::optional<Element>> images(spec.source->generator_count());
    for (const auto& line : b.body) {
      std::smatch m;
      if (std::regex_match(line.text, m, anti_re)) {
        spec.antimultiplicative = true;
      } else if (std::regex_match(line.text, m, map_re)) {
        auto g = spec.source->find_generator(m.str(1));
        if (!g) fail(line, col(m, 1), "unknown generator '" + m.str(1) + "' of '" + spec.source->name() + "'");
        if (images[*g]) fail(line, col(m, 1), "image of '" + m.str(1) + "' given twice");
        images[*g] = element_at(m, 2, spec.target, line);
      } else {
        fail(line, first_col(line), "unexpected statement in morphism block");
      }
    }
    for (std::size_t g = 0; g < images.size(); ++g) {
      if (!images[g]) fail(b.header, col(hm, 1), "missing image of '" + spec.source->generators()[g] + "'");
      spec.images.push_back(*images[g]);
    }
    MorphismDecl decl;
    try {
      decl.morphism = Morphism::create(spec);
    } catch (const WitnessError& e) {
      decl.morphism = Morphism::create_unchecked(std::move(spec));
      decl.failure = e.what();
    } catch (const Error& e) {
      fail(b.header, col(hm, 1), e.what());
    }
    ws_.morphisms_.emplace_back(hm.str(1), decl);
    return hm.str(1);
  }

  ChartPair pair_at(const std::smatch& m, int group, const Line& line) const {
    const std::string s = m.str(group);
    if (s.size() != 2) fail(line, col(m, group), "expected a chart pair like 12");
    ChartPair p{s[0] - '0', s[1] - '0'};
    if (p.first == p.second) fail(line, col(m, group), "chart pair needs two distinct charts");
    return p;
  }

  std::string build_bundle(const Block& b, const std::smatch& hm) {
    static const std::regex fibre_re(R"(^\s*fibre\s+(\w+)\s*$)");
    static const std::regex chart_re(R"(^\s*chart\s+(\d)\s+(\w+)\s*$)");
    static const std::regex overlap_re(R"(^\s*overlap\s+(\d\d)\s+(\w+)\s*$)");
    static const std::regex restrict_re(R"(^\s*restrict\s+(\d\d)\s*:\s*(\w+)\s*$)");
    static const std::regex transition_re(R"(^\s*transition\s+(\d\d)\s*:\s*(\w+)\s*$)");
    Bundle::Spec spec;
    spec.name = hm.str(1);
    require_new(ws_.bundles_, spec.name, b.header, col(hm, 1), "bundle");
    for (const auto& line : b.body) {
      std::smatch m;
      if (std::regex_match(line.text, m, fibre_re)) {
        spec.fibre = hopf_ref(m.str(1), col(m, 1), line);
        spec.transitions.fibre = spec.fibre;
      } else if (std::regex_match(line.text, m, chart_re)) {
        ChartId i = std::stoi(m.str(1));
        if (spec.cover.chart_algebras.count(i)) fail(line, col(m, 1), "chart " + m.str(1) + " declared twice");
        spec.cover.charts.push_back(i);
        spec.cover.chart_algebras[i] = algebra_ref(m.str(2), col(m, 2), line);
      } else if (std::regex_match(line.text, m, overlap_re)) {
        ChartPair p = pair_at(m, 1, line);
        spec.cover.overlap_algebras[{std::min(p.first, p.second), std::max(p.first, p.second)}] =
            algebra_ref(m.str(2), col(m, 2), line);
      } else if (std::regex_match(line.text, m, restrict_re)) {
        spec.cover.restrictions[pair_at(m, 1, line)] = morphism_ref(m.str(2), col(m, 2), line);
      } else if (std::regex_match(line.text, m, transition_re)) {
        spec.transitions.maps[pair_at(m, 1, line)] = morphism_ref(m.str(2), col(m, 2), line);
      } else {
        fail(line, first_col(line), "unexpected statement in bundle block");
      }
    }
    if (!spec.fibre) fail(b.header, col(hm, 1), "bundle '" + spec.name + "' lacks a fibre");
    BundlePtr bp;
    try {
      bp = Bundle::create(std::move(spec), ws_.options_.degree);
    } catch (const Error& e) {
      fail(b.header, col(hm, 1), e.what());
    }
    ws_.bundles_.emplace_back(hm.str(1), bp);
    return hm.str(1);
  }

  std::string build_family(const Block& b, const std::smatch& hm) {
    static const std::regex tau_re(R"(^\s*(tau|tauinv)\s+(\d)\s*=\s*(.+?)\s*$)");
    FamilyDecl decl;
    GaugeFamily& fam = decl.family;
    fam.name = hm.str(1);
    require_new(ws_.families_, fam.name, b.header, col(hm, 1), "gauge family");
    fam.side = side_of(hm.str(2));
    fam.bundle = ws_.bundle(hm.str(3));
    if (!fam.bundle) fail(b.header, col(hm, 3), "unknown bundle '" + hm.str(3) + "'");
    std::map<ChartId, int> tau_lines;
    for (const auto& line : b.body) {
      std::smatch m;
      if (!std::regex_match(line.text, m, tau_re)) fail(line, first_col(line), "unexpected statement in gauge family");
      ChartId i = std::stoi(m.str(2));
      const auto& charts = fam.bundle->charts();
      if (std::find(charts.begin(), charts.end(), i) == charts.end())
        fail(line, col(m, 2), "bundle '" + fam.bundle->name() + "' has no chart " + m.str(2));
      LinMapPtr f = linmap(m.str(3), col(m, 3), fam.bundle->fibre(), fam.bundle->chart_algebra(i), line);
      auto& slot = m.str(1) == "tau" ? fam.taus : fam.tau_invs;
      if (slot.count(i)) fail(line, col(m, 1), m.str(1) + " " + m.str(2) + " given twice");
      slot[i] = f;
      if (m.str(1) == "tauinv") {
        decl.tauinv_declared[i] = true;
      } else {
        tau_lines[i] = line.no;
      }
    }
    for (ChartId i : fam.bundle->charts()) {
      if (!fam.taus.count(i)) fail(b.header, col(hm, 1), "missing tau " + std::to_string(i));
      if (!fam.tau_invs.count(i)) {
        try {
          fam.tau_invs[i] = fam.taus[i]->convolution_inverse(fam.side);
        } catch (const Error& e) {
          fail(Line{tau_lines[i], ""}, 1, e.what());
        }
      }
    }
    ws_.families_.emplace_back(fam.name, decl);
    return fam.name;
  }

  std::string build_corep(const Block& b, const std::smatch& hm) {
    static const std::regex row_re(R"(^\s*row\s+(.+?)\s*$)");
    CorepDecl decl;
    decl.name = hm.str(1);
    require_new(ws_.coreps_, decl.name, b.header, col(hm, 1), "corepresentation");
    decl.hopf = hopf_ref(hm.str(2), col(hm, 2), b.header);
    for (const auto& line : b.body) {
      std::smatch m;
      if (!std::regex_match(line.text, m, row_re)) fail(line, first_col(line), "unexpected statement in corep block");
      std::vector<Element> row;
      const std::string s = m.str(1);
      std::size_t start = 0;
      while (true) {
        std::size_t comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        row.push_back(eval_element(
            parse_expr(item, col(m, 1) + static_cast<int>(start), ExprMode::Plain, line), decl.hopf->algebra(), line));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (!decl.u.empty() && row.size() != decl.u.front().size()) fail(line, col(m, 1), "ragged corepresentation matrix");
      decl.u.push_back(std::move(row));
    }
    if (decl.u.empty() || decl.u.size() != decl.u.front().size())
      fail(b.header, col(hm, 1), "corepresentation matrix must be square and nonempty");
    ws_.coreps_.emplace_back(decl.name, decl);
    return decl.name;
  }

  std::string build_connection(const Block& b, const std::smatch& hm) {
    static const std::regex value_re(R"(^\s*value\s+(.+?)\s*=\s*(.+?)\s*$)");
    static const std::regex gauge_re(R"(^\s*gauge\s+(\w+)\s+(\d)\s*$)");
    ConnectionDecl decl;
    const std::string name = hm.str(1);
    require_new(ws_.connections_, name, b.header, col(hm, 1), "connection");
    decl.hopf = hopf_ref(hm.str(3), col(hm, 3), b.header);
    decl.base = algebra_ref(hm.str(4), col(hm, 4), b.header);
    std::map<Word, UnivForm, DegLex> values;
    for (const auto& line : b.body) {
      std::smatch m;
      if (std::regex_match(line.text, m, value_re)) {
        Word w = word_at(m.str(1), col(m, 1), decl.hopf->algebra(), line);
        UnivForm f = eval_form(parse_expr(m.str(2), col(m, 2), ExprMode::Form, line), decl.base, line);
        if (f.is_zero()) f = UnivForm(decl.base, 1);
        if (f.degree() != 1) fail(line, col(m, 2), "connection values must be 1-forms");
        if (!values.emplace(w, f).second) fail(line, col(m, 1), "value given twice");
      } else if (std::regex_match(line.text, m, gauge_re)) {
        const FamilyDecl* fam = nullptr;
        for (const auto& [n, f] : ws_.families_) {
          if (n == m.str(1)) fam = &f;
        }
        if (!fam) fail(line, col(m, 1), "unknown gauge family '" + m.str(1) + "'");
        ChartId i = std::stoi(m.str(2));
        if (!fam->family.taus.count(i)) fail(line, col(m, 2), "family has no chart " + m.str(2));
        if (fam->family.taus.at(i)->target() != decl.base)
          fail(line, col(m, 2), "chart " + m.str(2) + " is not over '" + decl.base->name() + "'");
        if (fam->family.side != side_of(hm.str(2))) fail(line, col(m, 1), "family acts from the other side");
        decl.gauges.emplace_back(m.str(1), i);
      } else {
        fail(line, first_col(line), "unexpected statement in connection block");
      }
    }
    try {
      decl.form = connection_from_table(name, side_of(hm.str(2)), decl.hopf, decl.base, std::move(values));
    } catch (const Error& e) {
      fail(b.header, col(hm, 1), e.what());
    }
    ws_.connections_.emplace_back(name, decl);
    return name;
  }

  std::string build_ideal(const Block& b, const std::smatch& hm) {
    static const std::regex tau_re(R"(^\s*(tau|tauinv)\s+(.+?)\s*$)");
    static const std::regex gen_re(R"(^\s*gen\s+(.+?)\s*$)");
    static const std::regex conn_re(R"(^\s*uses\s+(\w+)\s*$)");
    IdealDecl decl;
    IdealSpec& spec = decl.spec;
    spec.name = hm.str(1);
    require_new(ws_.ideals_, spec.name, b.header, col(hm, 1), "ideal");
    spec.side = side_of(hm.str(2));
    decl.hopf = hopf_ref(hm.str(3), col(hm, 3), b.header);
    decl.base = algebra_ref(hm.str(4), col(hm, 4), b.header);
    int tau_line = b.header.no;
    for (const auto& line : b.body) {
      std::smatch m;
      if (std::regex_match(line.text, m, gen_re)) {
        spec.generators.push_back(element_at(m, 1, decl.hopf->algebra(), line));
      } else if (std::regex_match(line.text, m, conn_re)) {
        const ConnectionDecl* c = nullptr;
        for (const auto& [n, cd] : ws_.connections_) {
          if (n == m.str(1)) c = &cd;
        }
        if (!c) fail(line, col(m, 1), "unknown connection '" + m.str(1) + "'");
        if (c->base != decl.base || c->hopf != decl.hopf) fail(line, col(m, 1), "connection lives elsewhere");
        spec.connection = c->form;
        decl.connection = m.str(1);
      } else if (std::regex_match(line.text, m, tau_re)) {
        LinMapPtr f = linmap(m.str(2), col(m, 2), decl.hopf, decl.base, line);
        if (m.str(1) == "tau") {
          spec.tau = f;
          tau_line = line.no;
        } else {
          spec.tau_inv = f;
          decl.tauinv_declared = true;
        }
      } else {
        fail(line, first_col(line), "unexpected statement in ideal block");
      }
    }
    if (!spec.tau) fail(b.header, col(hm, 1), "ideal '" + spec.name + "' lacks a tau");
    if (!spec.tau_inv) {
      try {
        spec.tau_inv = spec.tau->convolution_inverse(spec.side);
      } catch (const Error& e) {
        fail(Line{tau_line, ""}, 1, e.what());
      }
    }
    ws_.ideals_.emplace_back(spec.name, decl);
    return spec.name;
  }

  Workspace& ws_;
  std::string file_;
};

Workspace::Workspace(ParseOptions options) : options_(std::move(options)) {
  for (const auto& [name, value] : options_.specialize) {
    if (value == 0) throw Error("parameter '" + name + "' cannot be specialized to 0");
  }
}

void Workspace::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  parse_text(ss.str(), path);
}

void Workspace::parse_text(const std::string& text, const std::string& source_name) {
  Parser(*this, source_name).run(text);
}

namespace {

template <typename Vec>
auto find_named(const Vec& v, const std::string& name) -> decltype(&v.front().second) {
  for (const auto& e : v) {
    if (e.first == name) return &e.second;
  }
  return nullptr;
}

}  // namespace

PresentationPtr Workspace::algebra(const std::string& name) const {
  auto p = find_named(algebras_, name);
  return p ? *p : nullptr;
}

HopfPtr Workspace::hopf(const std::string& name) const {
  auto p = find_named(hopfs_, name);
  return p ? *p : nullptr;
}

MorphismPtr Workspace::morphism(const std::string& name) const {
  auto p = find_named(morphisms_, name);
  return p ? p->morphism : nullptr;
}

BundlePtr Workspace::bundle(const std::string& name) const {
  auto p = find_named(bundles_, name);
  return p ? *p : nullptr;
}

const FamilyDecl& Workspace::family(const std::string& name) const {
  if (auto p = find_named(families_, name)) return *p;
  throw Error("unknown gauge family '" + name + "'");
}

const CorepDecl& Workspace::corep(const std::string& name) const {
  if (auto p = find_named(coreps_, name)) return *p;
  throw Error("unknown corepresentation '" + name + "'");
}

const ConnectionDecl& Workspace::connection(const std::string& name) const {
  if (auto p = find_named(connections_, name)) return *p;
  throw Error("unknown connection '" + name + "'");
}

const IdealDecl& Workspace::ideal(const std::string& name) const {
  if (auto p = find_named(ideals_, name)) return *p;
  throw Error("unknown ideal '" + name + "'");
}

LinMapPtr Workspace::parse_linmap(const std::string& text, const HopfPtr& h, const PresentationPtr& target) const {
  Parser p(const_cast<Workspace&>(*this), "<linmap>");
  return p.linmap(text, 1, h, target, Line{1, text});
}

Element Workspace::parse_element(const std::string& text, const PresentationPtr& p) const {
  Parser parser(const_cast<Workspace&>(*this), "<element>");
  Line line{1, text};
  return parser.eval_element(
      [&] {
        try {
          return detail::parse_expression(text, 1, ExprMode::Plain);
        } catch (const ExprError& e) {
          throw ParseError("<element>", 1, e.column, e.message);
        }
      }(),
      p, line);
}

std::string Workspace::print(std::size_t document) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [kind, name] : documents_.at(document).blocks) {
    if (!first) os << '\n';
    first = false;
    switch (kind) {
      case BlockKind::Algebra: {
        const auto& s = algebra(name)->spec();
        os << "algebra " << s.name << '\n';
        if (!s.params.empty()) {
          os << "params";
          for (const auto& p : s.params) os << ' ' << p;
          os << '\n';
        }
        os << "gens";
        for (const auto& g : s.generators) os << ' ' << g;
        os << '\n';
        for (const auto& [a, b] : s.star_pairs) os << "star " << a << " <-> " << b << '\n';
        for (const auto& r : s.rules) {
          std::string lhs;
          for (Gen g : r.lhs) lhs += (lhs.empty() ? "" : " ") + s.generators[g];
          os << "rule " << lhs << " -> " << raw_str(s.generators, r.rhs) << '\n';
        }
        break;
      }
      case BlockKind::Hopf: {
        const HopfAlgebra& h = *hopf(name);
        const auto& gens = h.algebra()->generators();
        const auto& s = h.spec();
        os << "hopf " << name << '\n';
        for (std::size_t g = 0; g < gens.size(); ++g) os << "Delta " << gens[g] << " = " << s.coproduct[g].str() << '\n';
        for (std::size_t g = 0; g < gens.size(); ++g) os << "eps " << gens[g] << " = " << s.counit[g].str_bare() << '\n';
        for (std::size_t g = 0; g < gens.size(); ++g) os << "S " << gens[g] << " = " << s.antipode[g].str() << '\n';
        if (s.antipode_inv) {
          for (std::size_t g = 0; g < gens.size(); ++g)
            os << "Sinv " << gens[g] << " = " << (*s.antipode_inv)[g].str() << '\n';
        }
        break;
      }
      case BlockKind::Morphism: {
        const Morphism& m = *morphism(name);
        os << "morphism " << name << ": " << m.source()->name() << " -> " << m.target()->name() << '\n';
        if (m.antimultiplicative()) os << "antimultiplicative\n";
        for (std::size_t g = 0; g < m.images().size(); ++g)
          os << "map " << m.source()->generators()[g] << " = " << m.images()[g].str() << '\n';
        break;
      }
      case BlockKind::Bundle: {
        const Bundle& b = *bundle(name);
        os << "bundle " << name << '\n' << "fibre " << b.fibre()->name() << '\n';
        for (ChartId i : b.charts()) os << "chart " << i << ' ' << b.chart_algebra(i)->name() << '\n';
        for (const auto& [p, a] : b.cover().overlap_algebras) os << "overlap " << pair_str(p) << ' ' << a->name() << '\n';
        for (const auto& [p, m] : b.cover().restrictions) os << "restrict " << pair_str(p) << ": " << m->name() << '\n';
        for (const auto& [p, m] : b.declared_transitions()) os << "transition " << pair_str(p) << ": " << m->name() << '\n';
        break;
      }
      case BlockKind::Family: {
        const FamilyDecl& d = family(name);
        const GaugeFamily& f = d.family;
        os << "gauge family " << name << ' ' << side_str(f.side) << " over " << f.bundle->name() << '\n';
        for (const auto& [i, t] : f.taus) os << "tau " << i << " = " << t->describe() << '\n';
        for (const auto& [i, t] : f.tau_invs) {
          if (d.tauinv_declared.count(i)) os << "tauinv " << i << " = " << t->describe() << '\n';
        }
        break;
      }
      case BlockKind::Corep: {
        const CorepDecl& c = corep(name);
        os << "corep " << name << " over " << c.hopf->name() << '\n';
        for (const auto& row : c.u) {
          os << "row ";
          for (std::size_t k = 0; k < row.size(); ++k) os << (k ? ", " : "") << row[k].str();
          os << '\n';
        }
        break;
      }
      case BlockKind::Connection: {
        const ConnectionDecl& c = connection(name);
        os << "connection " << name << ' ' << side_str(c.form.side) << " over " << c.hopf->name() << ' '
           << c.base->name() << '\n';
        for (const auto& [w, f] : c.form.values) os << "value " << c.hopf->algebra()->word_str(w) << " = " << f.str() << '\n';
        for (const auto& [fam, i] : c.gauges) os << "gauge " << fam << ' ' << i << '\n';
        break;
      }
      case BlockKind::Ideal: {
        const IdealDecl& d = ideal(name);
        os << "ideal " << name << ' ' << side_str(d.spec.side) << " over " << d.hopf->name() << ' ' << d.base->name()
           << '\n';
        os << "tau " << d.spec.tau->describe() << '\n';
        if (d.tauinv_declared) os << "tauinv " << d.spec.tau_inv->describe() << '\n';
        for (const auto& g : d.spec.generators) os << "gen " << g.str() << '\n';
        if (d.connection) os << "uses " << *d.connection << '\n';
        break;
      }
    }
  }
  return os.str();
}

}  // namespace qpfb
