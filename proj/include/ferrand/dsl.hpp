#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ferrand/errors.hpp"
#include "ferrand/field.hpp"

namespace ferrand::dsl {

struct Span {
  std::size_t line = 1, column = 1;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

class SyntaxError : public Error {
 public:
  SyntaxError(Span span, std::vector<std::string> expected, const std::string& found);
  const Span& span() const noexcept { return span_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Span span_;
  std::vector<std::string> expected_;
};

class UndeclaredName : public Error {
 public:
  UndeclaredName(Span span, const std::string& name);
  const Span& span() const noexcept { return span_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Span span_;
  std::string name_;
};

// Polynomials are kept as whitespace-normalized source text and parsed
// against the ring they land in when the script runs.
using PolyText = std::string;
using Column = std::vector<PolyText>;
using Assignment = std::pair<std::string, PolyText>;
using PairLit = std::pair<PolyText, PolyText>;  // (b, c)

struct RingLit {
  std::string field;  // "k" (configured field), "QQ" or "F<p>"
  std::vector<std::string> vars;
  std::vector<PolyText> relations;
};

struct ModuleLit {
  std::string ring;
  std::size_t rank = 0;
  std::vector<Column> relations;
};

struct PatchLit {
  ModuleLit my, mz, mt;
  std::vector<Column> alpha, alpha_inv, beta, beta_inv;  // matrices as column lists
};

struct ValExpr {
  enum class Kind { Dvr, Name, Compose } kind = Kind::Dvr;
  std::string name;               // variable for Dvr, valring for Name
  std::vector<ValExpr> children;  // lower, upper for Compose
};

struct RingDecl { std::string name; RingLit lit; };
struct HomDecl { std::string name, source, target; std::vector<Assignment> images; };
struct SquareDecl { std::string name, beta, pi; };
struct Present {
  std::string square;
  std::optional<int> bound;
  bool expect_none = false;          // expect no presentation within the bound
  std::optional<RingLit> expect;     // expected ring, with images in C
  std::vector<Assignment> via;
};
struct Conductor { std::string square; };
struct Localize { std::string square; PairLit at; };
struct Member { std::string square; PolyText c; std::optional<bool> expect; };
struct ModuleDecl { std::string name, over; std::variant<ModuleLit, PatchLit> body; };
/// `check adjunction M` for a declared patched module, or
/// `check adjunction S patch(...)` for an inline one over the square S.
struct CheckAdjunction { std::string target; std::optional<PatchLit> patch; };
struct CheckCartesian { std::string square; PairLit at; };
struct Pushforward { std::string module; };
struct ValringDecl { std::string name; ValExpr expr; };
struct Suite { std::string kind; int n = 1; };
struct PosetDecl { std::string name; std::vector<std::vector<std::string>> chains; };
struct TopPush {
  std::string name, y, z, t;
  std::vector<std::pair<std::string, std::string>> f, g;
  std::optional<std::string> expect;
};
struct ChartsDecl { std::string name; std::vector<std::string> squares; };
struct OverlapDecl {
  std::string datum;
  int i = 1, j = 2;  // 1-based chart positions
  std::string left, right;
  PairLit u, v;
  std::map<std::string, std::vector<PolyText>> maps;  // "B", "C", "K"
};
struct Glue { std::string datum; std::optional<int> refine; PairLit at; };
struct EtaleDecl { std::string name, base, var; PolyText f, g; };
struct LiftEtale { std::string algebra, along; };

using Body = std::variant<RingDecl, HomDecl, SquareDecl, Present, Conductor, Localize, Member, ModuleDecl,
                          CheckAdjunction, CheckCartesian, Pushforward, ValringDecl, Suite, PosetDecl, TopPush,
                          ChartsDecl, OverlapDecl, Glue, EtaleDecl, LiftEtale>;

struct Statement {
  Span span;
  Body body;
};

struct Script {
  std::vector<Statement> statements;
};

/// Throws SyntaxError or UndeclaredName.
Script parse(const std::string& text);
std::string print(const Statement& s);
std::string print(const Script& s);

/// Names a statement declares, and names it reads or extends.
std::optional<std::string> declared_name(const Statement& s);
std::vector<std::string> referenced_names(const Statement& s);

struct RunConfig {
  Field field = Field::rationals();
  int degree_bound = 64;
  int probe_degree = 8;
  bool fail_fast = false;
  std::uint64_t seed = 0;
  bool parallel = false;
};

struct RunResult {
  std::string json;  // the report, schema 1
  std::string text;  // one line per record
  int exit_code = 0;
};

RunResult run(const Script& script, const RunConfig& config);

}  // namespace ferrand::dsl
