#include <cctype>
#include <set>
#include <sstream>

#include "ferrand/dsl.hpp"

namespace ferrand::dsl {

namespace {

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

}  // namespace

SyntaxError::SyntaxError(Span span, std::vector<std::string> expected, const std::string& found)
    : Error("SyntaxError", span.to_string() + ": expected " + join(expected, " or ") + ", found " + found),
      span_(span), expected_(std::move(expected)) {}

UndeclaredName::UndeclaredName(Span span, const std::string& name)
    : Error("UndeclaredName", span.to_string() + ": '" + name + "' is not declared"), span_(span), name_(name) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Script script() {
    Script out;
    for (;;) {
      skip();
      if (at_end()) break;
      out.statements.push_back(statement());
    }
    return out;
  }

 private:
  // ---- characters and tokens ----
  bool at_end() const { return pos_ >= s_.size(); }

  void skip() {
    while (!at_end()) {
      char c = s_[pos_];
      if (c == '#') {
        while (!at_end() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Span here() {
    skip();
    return {line_, col_};
  }

  std::string found() {
    skip();
    if (at_end()) return "end of input";
    if (ident_start(s_[pos_])) {
      std::size_t e = pos_;
      while (e < s_.size() && ident_char(s_[e])) ++e;
      return "'" + s_.substr(pos_, e - pos_) + "'";
    }
    return "'" + std::string(1, s_[pos_]) + "'";
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    Span sp = here();
    throw SyntaxError(sp, std::move(expected), found());
  }

  bool peek(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) != 0) return false;
    // Keywords must not run into an identifier.
    if (ident_start(tok[0]) && pos_ + tok.size() < s_.size() && ident_char(s_[pos_ + tok.size()])) return false;
    return true;
  }

  bool accept(const std::string& tok) {
    if (!peek(tok)) return false;
    for (std::size_t i = 0; i < tok.size(); ++i) advance();
    return true;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail({"'" + tok + "'"});
  }

  bool peek_ident() {
    skip();
    return !at_end() && ident_start(s_[pos_]);
  }

  std::string ident(const std::string& what) {
    if (!peek_ident()) fail({what});
    std::size_t b = pos_;
    while (!at_end() && ident_char(s_[pos_])) advance();
    return s_.substr(b, pos_ - b);
  }

  int integer(const std::string& what) {
    skip();
    bool neg = accept("-");
    if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail({what});
    std::size_t b = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) advance();
    int v = std::stoi(s_.substr(b, pos_ - b));
    return neg ? -v : v;
  }

  // Polynomial text up to a delimiter at bracket depth zero.
  PolyText poly() {
    skip();
    std::size_t b = pos_;
    int depth = 0;
    while (!at_end()) {
      char c = s_[pos_];
      if (depth == 0 && (c == ',' || c == ';' || c == ')' || c == ']' || c == '}' || c == '#')) break;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      advance();
    }
    std::string raw = s_.substr(b, pos_ - b);
    std::istringstream in(raw);
    std::string w, out;
    while (in >> w) out += (out.empty() ? "" : " ") + w;
    if (out.empty()) fail({"polynomial"});
    return out;
  }

  // ---- names ----
  std::string declare(const std::string& what) {
    Span sp = here();
    std::string n = ident(what);
    if (declared_.count(n)) throw SyntaxError(sp, {"a fresh name"}, "'" + n + "', which is already declared");
    pending_ = n;
    return n;
  }

  std::string use(const std::string& what) {
    Span sp = here();
    std::string n = ident(what);
    if (!declared_.count(n)) throw UndeclaredName(sp, n);
    return n;
  }

  // ---- pieces ----
  RingLit ring_lit() {
    RingLit r;
    Span sp = here();
    r.field = ident("field (k, QQ or F<p>)");
    bool prime = r.field.size() > 1 && r.field[0] == 'F';
    for (std::size_t i = 1; prime && i < r.field.size(); ++i)
      prime = std::isdigit(static_cast<unsigned char>(r.field[i]));
    if (r.field != "k" && r.field != "QQ" && !prime)
      throw SyntaxError(sp, {"field (k, QQ or F<p>)"}, "'" + r.field + "'");
    expect("[");
    if (!peek("]")) {
      do r.vars.push_back(ident("variable")); while (accept(","));
    }
    expect("]");
    if (accept("/")) {
      expect("(");
      do r.relations.push_back(poly()); while (accept(","));
      expect(")");
    }
    return r;
  }

  std::vector<Assignment> assignments() {
    std::vector<Assignment> out;
    expect("{");
    if (!peek("}")) {
      do {
        std::string v = ident("variable");
        expect("->");
        out.emplace_back(v, poly());
      } while (accept(","));
    }
    expect("}");
    return out;
  }

  PairLit pair_lit() {
    expect("(");
    PolyText b = poly();
    expect(",");
    PolyText c = poly();
    expect(")");
    return {b, c};
  }

  Column column() {
    Column c;
    expect("(");
    if (!peek(")")) {
      do c.push_back(poly()); while (accept(","));
    }
    expect(")");
    return c;
  }

  std::vector<Column> matrix() {
    std::vector<Column> m;
    expect("[");
    if (!peek("]")) {
      do m.push_back(column()); while (accept(","));
    }
    expect("]");
    return m;
  }

  ModuleLit module_lit() {
    ModuleLit m;
    m.ring = use("ring name");
    expect("^");
    m.rank = static_cast<std::size_t>(integer("rank"));
    if (accept("/")) {
      expect("<");
      if (!peek(">")) {
        do m.relations.push_back(column()); while (accept(","));
      }
      expect(">");
    }
    return m;
  }

  PatchLit patch_lit() {
    PatchLit p;
    expect("patch");
    expect("(");
    p.my = module_lit();
    expect(",");
    p.mz = module_lit();
    expect(",");
    p.mt = module_lit();
    expect(";");
    expect("alpha");
    p.alpha = matrix();
    p.alpha_inv = matrix();
    expect(",");
    expect("beta");
    p.beta = matrix();
    p.beta_inv = matrix();
    expect(")");
    return p;
  }

  ValExpr val_expr() {
    ValExpr e;
    if (accept("dvr")) {
      e.kind = ValExpr::Kind::Dvr;
      e.name = ident("variable");
    } else if (accept("compose")) {
      e.kind = ValExpr::Kind::Compose;
      expect("(");
      e.children.push_back(val_expr());
      expect(",");
      e.children.push_back(val_expr());
      expect(")");
    } else if (peek_ident()) {
      e.kind = ValExpr::Kind::Name;
      e.name = use("valuation ring");
    } else {
      fail({"'dvr'", "'compose'", "valuation ring"});
    }
    return e;
  }

  std::vector<std::pair<std::string, std::string>> point_map() {
    std::vector<std::pair<std::string, std::string>> out;
    expect("{");
    if (!peek("}")) {
      do {
        std::string a = ident("point");
        expect("->");
        out.emplace_back(a, ident("point"));
      } while (accept(","));
    }
    expect("}");
    return out;
  }

  // ---- statements ----
  Statement statement() {
    Statement st;
    st.span = here();
    pending_.clear();
    st.body = body();
    expect(";");
    if (!pending_.empty()) declared_.insert(pending_);
    return st;
  }

  Body body() {
    if (accept("ring")) {
      RingDecl d;
      d.name = declare("ring name");
      expect("=");
      d.lit = ring_lit();
      return d;
    }
    if (accept("hom")) {
      HomDecl d;
      d.name = declare("hom name");
      expect(":");
      d.source = use("source name");
      expect("->");
      d.target = use("target name");
      d.images = assignments();
      return d;
    }
    if (accept("square")) {
      SquareDecl d;
      d.name = declare("square name");
      expect("=");
      expect("pushout");
      expect("(");
      d.beta = use("hom name");
      expect(",");
      d.pi = use("hom name");
      expect(")");
      return d;
    }
    if (accept("present")) {
      Present p;
      p.square = use("square name");
      if (accept("bound")) p.bound = integer("degree bound");
      if (accept("expect")) {
        if (accept("none")) {
          p.expect_none = true;
        } else {
          p.expect = ring_lit();
          expect("via");
          p.via = assignments();
        }
      }
      return p;
    }
    if (accept("conductor")) return Conductor{use("square name")};
    if (accept("localize")) {
      Localize l;
      l.square = use("square name");
      expect("at");
      l.at = pair_lit();
      return l;
    }
    if (accept("member")) {
      Member m;
      m.square = use("square name");
      expect("(");
      m.c = poly();
      expect(")");
      if (accept("expect")) {
        if (accept("in")) m.expect = true;
        else if (accept("out")) m.expect = false;
        else fail({"'in'", "'out'"});
      }
      return m;
    }
    if (accept("module")) {
      ModuleDecl d;
      d.name = declare("module name");
      expect("over");
      d.over = use("square or ring name");
      expect("=");
      if (peek("patch")) {
        d.body = patch_lit();
      } else {
        d.body = module_lit();
      }
      return d;
    }
    if (accept("check")) {
      if (accept("adjunction")) {
        CheckAdjunction c;
        c.target = use("module or square name");
        if (peek("patch")) c.patch = patch_lit();
        return c;
      }
      if (accept("cartesian")) {
        CheckCartesian c;
        c.square = use("square name");
        expect("at");
        c.at = pair_lit();
        return c;
      }
      fail({"'adjunction'", "'cartesian'"});
    }
    if (accept("pushforward")) return Pushforward{use("module name")};
    if (accept("valring")) {
      ValringDecl d;
      d.name = declare("valuation ring name");
      expect("=");
      d.expr = val_expr();
      return d;
    }
    if (accept("suite")) {
      Suite s;
      s.kind = ident("suite name");
      if (s.kind != "conductor_chain") fail({"'conductor_chain'"});
      expect("n");
      expect("=");
      s.n = integer("n");
      return s;
    }
    if (accept("poset")) {
      PosetDecl d;
      d.name = declare("poset name");
      expect("=");
      expect("{");
      if (!peek("}")) {
        do {
          std::vector<std::string> chain{ident("point")};
          while (accept(">")) chain.push_back(ident("point"));
          d.chains.push_back(std::move(chain));
        } while (accept(","));
      }
      expect("}");
      return d;
    }
    if (accept("toppush")) {
      TopPush t;
      t.name = declare("space name");
      expect("=");
      expect("push");
      expect("(");
      t.y = use("poset name");
      expect(",");
      t.z = use("poset name");
      expect(",");
      t.t = use("poset name");
      expect(";");
      t.f = point_map();
      expect(",");
      t.g = point_map();
      expect(")");
      if (accept("expect")) t.expect = use("poset name");
      return t;
    }
    if (accept("charts")) {
      ChartsDecl c;
      c.name = declare("chart datum name");
      expect("=");
      expect("[");
      do c.squares.push_back(use("square name")); while (accept(","));
      expect("]");
      return c;
    }
    if (accept("overlap")) {
      OverlapDecl o;
      o.datum = use("chart datum name");
      expect("(");
      o.i = integer("chart index");
      expect(",");
      o.j = integer("chart index");
      expect(")");
      expect("=");
      expect("loc");
      expect("(");
      o.left = use("square name");
      expect("at");
      o.u = pair_lit();
      expect(")");
      expect("~");
      expect("loc");
      expect("(");
      o.right = use("square name");
      expect("at");
      o.v = pair_lit();
      expect(")");
      expect("via");
      expect("{");
      do {
        Span sp = here();
        std::string corner = ident("'B', 'C' or 'K'");
        if (corner != "B" && corner != "C" && corner != "K")
          throw SyntaxError(sp, {"'B'", "'C'", "'K'"}, "'" + corner + "'");
        expect(":");
        expect("[");
        std::vector<PolyText> ims;
        if (!peek("]")) {
          do ims.push_back(poly()); while (accept(","));
        }
        expect("]");
        o.maps[corner] = ims;
      } while (accept(","));
      expect("}");
      return o;
    }
    if (accept("glue")) {
      Glue g;
      g.datum = use("chart datum name");
      if (accept("refine")) {
        g.refine = integer("chart index");
        expect("at");
        g.at = pair_lit();
      }
      return g;
    }
    if (accept("etale")) {
      EtaleDecl e;
      e.name = declare("algebra name");
      expect("=");
      expect("std");
      expect("(");
      e.base = use("ring name");
      expect(",");
      e.var = ident("variable");
      expect(",");
      e.f = poly();
      expect(",");
      e.g = poly();
      expect(")");
      return e;
    }
    if (accept("lift")) {
      expect("etale");
      LiftEtale l;
      l.algebra = use("algebra name");
      expect("along");
      l.along = use("hom name");
      return l;
    }
    fail({"'ring'", "'hom'", "'square'", "'module'", "'valring'", "'poset'", "'charts'", "'check'", "'present'",
          "'glue'", "'lift'", "'suite'", "'conductor'", "'localize'", "'member'", "'pushforward'", "'toppush'",
          "'overlap'", "'etale'"});
  }

  const std::string& s_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
  std::set<std::string> declared_;
  std::string pending_;
};

// ---- printing ----

std::string ring_text(const RingLit& r) {
  std::string out = r.field + "[" + join(r.vars, ", ") + "]";
  if (!r.relations.empty()) out += " / (" + join(r.relations, ", ") + ")";
  return out;
}

std::string assignments_text(const std::vector<Assignment>& a) {
  std::vector<std::string> parts;
  for (const auto& [v, p] : a) parts.push_back(v + " -> " + p);
  return parts.empty() ? "{}" : "{ " + join(parts, ", ") + " }";
}

std::string pair_text(const PairLit& p) { return "(" + p.first + ", " + p.second + ")"; }
std::string column_text(const Column& c) { return "(" + join(c, ", ") + ")"; }

std::string matrix_text(const std::vector<Column>& m) {
  std::vector<std::string> parts;
  for (const auto& c : m) parts.push_back(column_text(c));
  return "[" + join(parts, ", ") + "]";
}

std::string module_text(const ModuleLit& m) {
  std::string out = m.ring + "^" + std::to_string(m.rank);
  if (!m.relations.empty()) {
    std::vector<std::string> parts;
    for (const auto& c : m.relations) parts.push_back(column_text(c));
    out += " / <" + join(parts, ", ") + ">";
  }
  return out;
}

std::string patch_text(const PatchLit& p) {
  return "patch(" + module_text(p.my) + ", " + module_text(p.mz) + ", " + module_text(p.mt) + "; alpha " +
         matrix_text(p.alpha) + " " + matrix_text(p.alpha_inv) + ", beta " + matrix_text(p.beta) + " " +
         matrix_text(p.beta_inv) + ")";
}

std::string val_text(const ValExpr& e) {
  switch (e.kind) {
    case ValExpr::Kind::Dvr: return "dvr " + e.name;
    case ValExpr::Kind::Name: return e.name;
    case ValExpr::Kind::Compose: return "compose(" + val_text(e.children[0]) + ", " + val_text(e.children[1]) + ")";
  }
  return "";
}

std::string point_map_text(const std::vector<std::pair<std::string, std::string>>& m) {
  std::vector<std::string> parts;
  for (const auto& [a, b] : m) parts.push_back(a + " -> " + b);
  return parts.empty() ? "{}" : "{ " + join(parts, ", ") + " }";
}

struct Printer {
  std::string operator()(const RingDecl& d) const { return "ring " + d.name + " = " + ring_text(d.lit); }
  std::string operator()(const HomDecl& d) const {
    return "hom " + d.name + ": " + d.source + " -> " + d.target + " " + assignments_text(d.images);
  }
  std::string operator()(const SquareDecl& d) const {
    return "square " + d.name + " = pushout(" + d.beta + ", " + d.pi + ")";
  }
  std::string operator()(const Present& p) const {
    std::string out = "present " + p.square;
    if (p.bound) out += " bound " + std::to_string(*p.bound);
    if (p.expect_none) out += " expect none";
    if (p.expect) out += " expect " + ring_text(*p.expect) + " via " + assignments_text(p.via);
    return out;
  }
  std::string operator()(const Conductor& c) const { return "conductor " + c.square; }
  std::string operator()(const Localize& l) const { return "localize " + l.square + " at " + pair_text(l.at); }
  std::string operator()(const Member& m) const {
    std::string out = "member " + m.square + " (" + m.c + ")";
    if (m.expect) out += *m.expect ? " expect in" : " expect out";
    return out;
  }
  std::string operator()(const ModuleDecl& d) const {
    std::string out = "module " + d.name + " over " + d.over + " = ";
    if (const auto* m = std::get_if<ModuleLit>(&d.body)) return out + module_text(*m);
    return out + patch_text(std::get<PatchLit>(d.body));
  }
  std::string operator()(const CheckAdjunction& c) const {
    return "check adjunction " + c.target + (c.patch ? " " + patch_text(*c.patch) : "");
  }
  std::string operator()(const CheckCartesian& c) const {
    return "check cartesian " + c.square + " at " + pair_text(c.at);
  }
  std::string operator()(const Pushforward& p) const { return "pushforward " + p.module; }
  std::string operator()(const ValringDecl& d) const { return "valring " + d.name + " = " + val_text(d.expr); }
  std::string operator()(const Suite& s) const { return "suite " + s.kind + " n = " + std::to_string(s.n); }
  std::string operator()(const PosetDecl& d) const {
    std::vector<std::string> parts;
    for (const auto& c : d.chains) parts.push_back(join(c, " > "));
    return "poset " + d.name + " = {" + join(parts, ", ") + "}";
  }
  std::string operator()(const TopPush& t) const {
    std::string out = "toppush " + t.name + " = push(" + t.y + ", " + t.z + ", " + t.t + "; " + point_map_text(t.f) +
                      ", " + point_map_text(t.g) + ")";
    if (t.expect) out += " expect " + *t.expect;
    return out;
  }
  std::string operator()(const ChartsDecl& c) const { return "charts " + c.name + " = [" + join(c.squares, ", ") + "]"; }
  std::string operator()(const OverlapDecl& o) const {
    std::vector<std::string> parts;
    for (const auto& [corner, ims] : o.maps) parts.push_back(corner + ": [" + join(ims, ", ") + "]");
    return "overlap " + o.datum + "(" + std::to_string(o.i) + ", " + std::to_string(o.j) + ") = loc(" + o.left +
           " at " + pair_text(o.u) + ") ~ loc(" + o.right + " at " + pair_text(o.v) + ") via { " +
           join(parts, ", ") + " }";
  }
  std::string operator()(const Glue& g) const {
    std::string out = "glue " + g.datum;
    if (g.refine) out += " refine " + std::to_string(*g.refine) + " at " + pair_text(g.at);
    return out;
  }
  std::string operator()(const EtaleDecl& e) const {
    return "etale " + e.name + " = std(" + e.base + ", " + e.var + ", " + e.f + ", " + e.g + ")";
  }
  std::string operator()(const LiftEtale& l) const { return "lift etale " + l.algebra + " along " + l.along; }
};

void val_names(const ValExpr& e, std::vector<std::string>& out) {
  if (e.kind == ValExpr::Kind::Name) out.push_back(e.name);
  for (const auto& c : e.children) val_names(c, out);
}

struct Refs {
  std::vector<std::string> operator()(const RingDecl&) const { return {}; }
  std::vector<std::string> operator()(const HomDecl& d) const { return {d.source, d.target}; }
  std::vector<std::string> operator()(const SquareDecl& d) const { return {d.beta, d.pi}; }
  std::vector<std::string> operator()(const Present& p) const { return {p.square}; }
  std::vector<std::string> operator()(const Conductor& c) const { return {c.square}; }
  std::vector<std::string> operator()(const Localize& l) const { return {l.square}; }
  std::vector<std::string> operator()(const Member& m) const { return {m.square}; }
  std::vector<std::string> operator()(const ModuleDecl& d) const {
    std::vector<std::string> out{d.over};
    if (const auto* m = std::get_if<ModuleLit>(&d.body)) {
      out.push_back(m->ring);
    } else {
      const auto& p = std::get<PatchLit>(d.body);
      for (const auto* m : {&p.my, &p.mz, &p.mt}) out.push_back(m->ring);
    }
    return out;
  }
  std::vector<std::string> operator()(const CheckAdjunction& c) const {
    std::vector<std::string> out{c.target};
    if (c.patch)
      for (const auto* m : {&c.patch->my, &c.patch->mz, &c.patch->mt}) out.push_back(m->ring);
    return out;
  }
  std::vector<std::string> operator()(const CheckCartesian& c) const { return {c.square}; }
  std::vector<std::string> operator()(const Pushforward& p) const { return {p.module}; }
  std::vector<std::string> operator()(const ValringDecl& d) const {
    std::vector<std::string> out;
    val_names(d.expr, out);
    return out;
  }
  std::vector<std::string> operator()(const Suite&) const { return {}; }
  std::vector<std::string> operator()(const PosetDecl&) const { return {}; }
  std::vector<std::string> operator()(const TopPush& t) const {
    std::vector<std::string> out{t.y, t.z, t.t};
    if (t.expect) out.push_back(*t.expect);
    return out;
  }
  std::vector<std::string> operator()(const ChartsDecl& c) const { return c.squares; }
  std::vector<std::string> operator()(const OverlapDecl& o) const { return {o.datum, o.left, o.right}; }
  std::vector<std::string> operator()(const Glue& g) const { return {g.datum}; }
  std::vector<std::string> operator()(const EtaleDecl& e) const { return {e.base}; }
  std::vector<std::string> operator()(const LiftEtale& l) const { return {l.algebra, l.along}; }
};

struct Declares {
  template <class T>
  std::optional<std::string> operator()(const T& d) const {
    if constexpr (requires { d.name; }) return d.name;
    return std::nullopt;
  }
};

}  // namespace

Script parse(const std::string& text) { return Parser(text).script(); }

std::string print(const Statement& s) { return std::visit(Printer{}, s.body) + ";"; }

std::string print(const Script& s) {
  std::string out;
  for (const auto& st : s.statements) out += print(st) + "\n";
  return out;
}

std::optional<std::string> declared_name(const Statement& s) { return std::visit(Declares{}, s.body); }

std::vector<std::string> referenced_names(const Statement& s) { return std::visit(Refs{}, s.body); }

}  // namespace ferrand::dsl
