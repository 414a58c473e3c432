#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ferrand/dsl.hpp"
#include "json.hpp"

using namespace ferrand;
using namespace ferrand::dsl;
using json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(FERRAND_CORPUS_DIR))
    if (e.path().extension() == ".fps") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

RunResult run_file(const std::filesystem::path& p, RunConfig cfg = {}) { return run(parse(slurp(p)), cfg); }

// Random canonical-form scripts. Every name is declared before it is used,
// and polynomial text is already whitespace-normalized.
class ScriptGen {
 public:
  explicit ScriptGen(unsigned seed) : rng_(seed) {}

  std::string script() {
    out_.clear();
    rings_.clear();
    homs_.clear();
    squares_.clear();
    posets_.clear();
    valrings_.clear();
    fresh_ = 0;
    int n = pick(3, 12);
    for (int i = 0; i < n; ++i) statement();
    return out_;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  template <class T>
  const T& any(const std::vector<T>& v) { return v[static_cast<std::size_t>(pick(0, static_cast<int>(v.size()) - 1))]; }
  std::string fresh(const std::string& stem) { return stem + std::to_string(fresh_++); }

  std::string poly(const std::vector<std::string>& vars) {
    std::string s;
    int terms = pick(1, 3);
    for (int i = 0; i < terms; ++i) {
      int c = pick(1, 9);
      std::string mono = std::to_string(c);
      if (pick(0, 3) == 0) mono += "/" + std::to_string(pick(2, 5));
      if (!vars.empty() && pick(0, 2) > 0) {
        mono += "*" + any(vars);
        if (pick(0, 1)) mono += "^" + std::to_string(pick(2, 4));
      }
      if (pick(0, 4) == 0) mono = "(" + mono + " + 1)";
      s += (i == 0 ? (pick(0, 3) == 0 ? "-" : "") : (pick(0, 1) ? " + " : " - ")) + mono;
    }
    return s;
  }

  std::string ring_lit(std::vector<std::string>& vars) {
    vars.clear();
    int nv = pick(0, 3);
    for (int i = 0; i < nv; ++i) vars.push_back(std::string(1, static_cast<char>('a' + i)) + std::to_string(i));
    const char* fields[] = {"k", "QQ", "F5", "F101"};
    std::string s = std::string(fields[pick(0, 3)]) + "[";
    for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? ", " : "") + vars[i];
    s += "]";
    if (pick(0, 1)) {
      s += " / (";
      int nr = pick(1, 2);
      for (int i = 0; i < nr; ++i) s += (i ? ", " : "") + poly(vars);
      s += ")";
    }
    return s;
  }

  std::string assigns(const std::vector<std::string>& lhs, const std::vector<std::string>& rhs_vars) {
    if (lhs.empty()) return "{}";
    std::string s = "{ ";
    for (std::size_t i = 0; i < lhs.size(); ++i) s += (i ? ", " : "") + lhs[i] + " -> " + poly(rhs_vars);
    return s + " }";
  }

  std::string pair_lit(const std::vector<std::string>& vars) { return "(" + poly(vars) + ", " + poly(vars) + ")"; }

  std::string column(const std::vector<std::string>& vars, int n) {
    std::string s = "(";
    for (int i = 0; i < n; ++i) s += (i ? ", " : "") + poly(vars);
    return s + ")";
  }

  std::string matrix(const std::vector<std::string>& vars, int rows, int cols) {
    std::string s = "[";
    for (int j = 0; j < cols; ++j) s += (j ? ", " : "") + column(vars, rows);
    return s + "]";
  }

  std::string modlit(const std::string& ring, const std::vector<std::string>& vars, int rank) {
    std::string s = ring + "^" + std::to_string(rank);
    if (rank > 0 && pick(0, 1)) s += " / <" + column(vars, rank) + ">";
    return s;
  }

  std::string valexpr(int depth) {
    int k = pick(0, depth > 1 ? 0 : 2);
    if (k == 1 && !valrings_.empty()) return any(valrings_);
    if (k == 2) return "compose(" + valexpr(depth + 1) + ", " + valexpr(depth + 1) + ")";
    return "dvr " + fresh("x");
  }

  void emit(const std::string& s) { out_ += s + ";\n"; }

  void statement() {
    int kind = pick(0, 9);
    if (rings_.empty() || kind == 0) {
      std::string n = fresh("R");
      std::vector<std::string> vars;
      emit("ring " + n + " = " + ring_lit(vars));
      rings_.push_back({n, vars});
      return;
    }
    if (kind == 1) {
      auto [s, sv] = any(rings_);
      auto [t, tv] = any(rings_);
      std::string n = fresh("h");
      emit("hom " + n + ": " + s + " -> " + t + " " + assigns(sv, tv));
      homs_.push_back(n);
      return;
    }
    if (kind == 2 && !homs_.empty()) {
      std::string n = fresh("S");
      emit("square " + n + " = pushout(" + any(homs_) + ", " + any(homs_) + ")");
      squares_.push_back(n);
      return;
    }
    if (kind == 3 && !squares_.empty()) {
      std::string s = any(squares_);
      auto [r, rv] = any(rings_);
      switch (pick(0, 6)) {
        case 0: emit("present " + s); break;
        case 1: emit("present " + s + " bound " + std::to_string(pick(1, 20)) + " expect none"); break;
        case 2: {
          std::vector<std::string> vars;
          std::string lit = ring_lit(vars);
          emit("present " + s + " expect " + lit + " via " + assigns(vars, rv));
          break;
        }
        case 3: emit("conductor " + s); break;
        case 4: emit("localize " + s + " at " + pair_lit(rv)); break;
        case 5: emit("member " + s + " (" + poly(rv) + ")" + (pick(0, 1) ? " expect in" : " expect out")); break;
        default: emit("check cartesian " + s + " at " + pair_lit(rv)); break;
      }
      return;
    }
    if (kind == 4 && !squares_.empty()) {
      auto [r, rv] = any(rings_);
      int a = pick(0, 2), b = pick(0, 2), c = pick(0, 2);
      std::string p = "patch(" + modlit(r, rv, a) + ", " + modlit(r, rv, b) + ", " + modlit(r, rv, c) +
                      "; alpha " + matrix(rv, c, a) + " " + matrix(rv, a, c) + ", beta " + matrix(rv, c, b) + " " +
                      matrix(rv, b, c) + ")";
      if (pick(0, 1)) {
        std::string m = fresh("M");
        emit("module " + m + " over " + any(squares_) + " = " + p);
        emit(pick(0, 1) ? "check adjunction " + m : "pushforward " + m);
      } else {
        emit("check adjunction " + any(squares_) + " " + p);
      }
      return;
    }
    if (kind == 5) {
      auto [r, rv] = any(rings_);
      emit("module " + fresh("N") + " over " + r + " = " + modlit(r, rv, pick(0, 3)));
      return;
    }
    if (kind == 6) {
      std::string n = fresh("V");
      emit("valring " + n + " = " + valexpr(0));
      valrings_.push_back(n);
      return;
    }
    if (kind == 7) {
      if (pick(0, 1) || posets_.size() < 3) {
        std::string n = fresh("P");
        std::string s = "poset " + n + " = {";
        int chains = pick(1, 3);
        for (int i = 0; i < chains; ++i) {
          s += i ? ", " : "";
          int len = pick(1, 3);
          for (int j = 0; j < len; ++j) s += (j ? " > " : "") + fresh("p");
        }
        emit(s + "}");
        posets_.push_back(n);
      } else {
        std::string s = "toppush " + fresh("X") + " = push(" + any(posets_) + ", " + any(posets_) + ", " +
                        any(posets_) + "; { p0 -> p1 }, { p1 -> p2, p3 -> p0 })";
        if (pick(0, 1)) s += " expect " + any(posets_);
        emit(s);
      }
      return;
    }
    if (kind == 8 && squares_.size() >= 1) {
      std::string d = fresh("D");
      std::string a = any(squares_), b = any(squares_);
      auto [r, rv] = any(rings_);
      emit("charts " + d + " = [" + a + ", " + b + "]");
      emit("overlap " + d + "(1, 2) = loc(" + a + " at " + pair_lit(rv) + ") ~ loc(" + b + " at " + pair_lit(rv) +
           ") via { B: [], C: [" + poly(rv) + ", " + poly(rv) + "], K: [" + poly(rv) + "] }");
      emit(pick(0, 1) ? "glue " + d : "glue " + d + " refine " + std::to_string(pick(1, 2)) + " at " + pair_lit(rv));
      return;
    }
    if (kind == 9) {
      if (pick(0, 1)) {
        emit("suite conductor_chain n = " + std::to_string(pick(1, 9)));
      } else if (!homs_.empty()) {
        auto [r, rv] = any(rings_);
        std::string e = fresh("E");
        std::vector<std::string> vars = rv;
        vars.push_back("u");
        emit("etale " + e + " = std(" + r + ", u, " + poly(vars) + ", " + poly(vars) + ")");
        emit("lift etale " + e + " along " + any(homs_));
      }
      return;
    }
    std::vector<std::string> vars;
    std::string n = fresh("R");
    emit("ring " + n + " = " + ring_lit(vars));
    rings_.push_back({n, vars});
  }

  std::mt19937 rng_;
  std::string out_;
  std::vector<std::pair<std::string, std::vector<std::string>>> rings_;
  std::vector<std::string> homs_, squares_, posets_, valrings_;
  int fresh_ = 0;
};

}  // namespace

TEST_CASE("parse: small inputs") {
  CHECK(parse("").statements.empty());
  CHECK(parse("  # only a comment\n\n").statements.empty());

  Script nodal = parse(slurp(std::filesystem::path(FERRAND_CORPUS_DIR) / "nodal_cubic.fps"));
  CHECK(nodal.statements.size() == 9);

  try {
    parse("ring R = k[x];\nhom h: R -> ");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.span().line == 2);
    CHECK(e.span().column == 13);
    REQUIRE(e.expected().size() == 1);
    CHECK(e.expected()[0] == "target name");
    CHECK(std::string(e.what()).find("end of input") != std::string::npos);
  }

  try {
    parse("ring R = k[x];\nhom h: R -> Q { x -> x };");
    FAIL("expected UndeclaredName");
  } catch (const UndeclaredName& e) {
    CHECK(e.name() == "Q");
    CHECK(e.span().line == 2);
    CHECK(e.span().column == 13);
  }

  CHECK_THROWS_AS(parse("ring R = k[x];\nring R = k[y];"), SyntaxError);
  CHECK_THROWS_AS(parse("ring R = k[x]"), SyntaxError);
  CHECK_THROWS_AS(parse("ring R = Z[x];"), SyntaxError);
  CHECK_THROWS_AS(parse("frobnicate R;"), SyntaxError);
}

TEST_CASE("parse and print round-trip on the corpus") {
  for (const auto& p : corpus_files()) {
    CAPTURE(p.string());
    Script s = parse(slurp(p));
    std::string canon = print(s);
    Script again = parse(canon);
    CHECK(print(again) == canon);
    CHECK(again.statements.size() == s.statements.size());
  }
}

TEST_CASE("property: parse o print is the identity on canonical scripts") {
  ScriptGen gen(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text = gen.script();
    CAPTURE(text);
    Script s = parse(text);
    // Generated scripts are already in canonical form.
    CHECK(print(s) == text);
    CHECK(print(parse(print(s))) == print(s));
  }
}

TEST_CASE("run: nodal script") {
  RunResult r = run_file(std::filesystem::path(FERRAND_CORPUS_DIR) / "nodal_cubic.fps");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.json);
  CHECK(j["schema"] == 1);
  CHECK(j["summary"]["fail"] == 0);
  std::set<std::string> anchors;
  for (const auto& rec : j["records"]) {
    CHECK(rec["operation"].is_string());
    CHECK_FALSE(rec["operation"].get<std::string>().empty());
    CHECK_FALSE(rec["anchor"].get<std::string>().empty());
    for (const auto& c : rec["checks"]) {
      CHECK(c["verdict"] == "PASS");
      anchors.insert(c["anchor"].get<std::string>());
    }
  }
  CHECK(anchors.count("Ferrand squares are bicartesian"));
  CHECK(anchors.size() >= 3);
}

TEST_CASE("run: conductor chain suite reports the witness") {
  RunResult r = run(parse("suite conductor_chain n = 1;"), {});
  CHECK(r.exit_code == 0);
  json j = json::parse(r.json);
  const auto& rec = j["records"][0];
  CHECK(rec["result"]["witness"] == "x^-2*y");
  bool found = false;
  for (const auto& c : rec["checks"])
    if (c.value("witness", std::string()).find("x^-2*y") != std::string::npos &&
        c["check"].get<std::string>().find("not injective") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("run: fail-fast stops with a partial report") {
  std::filesystem::path failing = std::filesystem::path(FERRAND_TEST_DATA_DIR) / "failing.fps";
  RunResult full = run_file(failing);
  CHECK(full.exit_code == 1);
  CHECK(json::parse(full.json)["summary"]["executed"] == 10);

  RunConfig ff;
  ff.fail_fast = true;
  RunResult part = run_file(failing, ff);
  CHECK(part.exit_code == 1);
  json j = json::parse(part.json);
  CHECK(j["summary"]["statements"] == 10);
  CHECK(j["summary"]["executed"] == 8);
  CHECK(j["records"].size() == 8);
  CHECK(j["records"][7]["status"] == "FAIL");
}

TEST_CASE("run: exit codes") {
  CHECK(run(parse("ring R = k[x];"), {}).exit_code == 0);
  // Bound exceeded without an expectation is exit 3.
  const char* laurent =
      "ring B = k[x]; ring K = k[x, xi] / (x*xi - 1); ring C = k[x, xi, y] / (x*xi - 1);"
      "hom b: B -> K { x -> x }; hom p: C -> K { x -> x, xi -> xi, y -> 0 };"
      "square L = pushout(b, p);";
  CHECK(run(parse(std::string(laurent) + "present L bound 4;"), {}).exit_code == 3);
  CHECK(run(parse(std::string(laurent) + "present L bound 4 expect none;"), {}).exit_code == 0);
  // Exit 3 wins over a failure elsewhere.
  CHECK(run(parse(std::string(laurent) + "present L bound 4; member L (xi) expect in;"), {}).exit_code == 3);
  // A library error is recorded, and execution continues.
  RunResult e = run(parse("ring R = k[x]; hom h: R -> R { x -> x^2 }; square S = pushout(h, h); conductor S;"), {});
  CHECK(e.exit_code == 1);
  json j = json::parse(e.json);
  CHECK(j["records"][2]["status"] == "ERROR");
  CHECK(j["records"][3]["status"] == "ERROR");
}

TEST_CASE("run: reports are deterministic") {
  for (const auto& p : corpus_files()) {
    CAPTURE(p.string());
    std::string text = slurp(p);
    RunResult a = run(parse(text), {});
    RunResult b = run(parse(text), {});
    CHECK(a.json == b.json);
    RunConfig par;
    par.parallel = true;
    RunResult c = run(parse(text), par);
    CHECK(a.json == c.json);
    CHECK(a.exit_code == 0);
  }
}
