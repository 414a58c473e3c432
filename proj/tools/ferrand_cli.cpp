// Runs a pushout script and writes its report.
//
//   ferrand_cli --input corpus/nodal_cubic.fps --json report.json
//
// Exit codes: 0 every check passed, 1 a check failed or a statement raised,
// 2 usage or parse error, 3 a degree or size bound was exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ferrand/dsl.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ferrand pushout scripts: present, patch, glue and check"};
  std::string input, json_out, field = "QQ";
  ferrand::dsl::RunConfig cfg;
  app.add_option("--input", input, "script file (default: standard input)");
  app.add_option("--json", json_out, "write the JSON report here ('-' for standard output)");
  app.add_option("--degree-bound", cfg.degree_bound, "Groebner degree cap")->capture_default_str();
  app.add_option("--probe-degree", cfg.probe_degree, "probe and presentation degree")->capture_default_str();
  app.add_option("--field", field, "field bound to k: QQ or Fp:<p>")->capture_default_str();
  app.add_flag("--fail-fast", cfg.fail_fast, "stop at the first failing statement");
  app.add_option("--seed", cfg.seed, "seed recorded for randomized checks")->capture_default_str();
  app.add_flag("--parallel", cfg.parallel, "run independent statements concurrently");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string text;
  if (input.empty()) {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "cannot read " << input << "\n";
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  ferrand::dsl::Script script;
  try {
    cfg.field = ferrand::Field::parse(field);
    script = ferrand::dsl::parse(text);
  } catch (const ferrand::Error& e) {
    std::cerr << (input.empty() ? "<stdin>" : input) << ": " << e.what() << "\n";
    return 2;
  }

  ferrand::dsl::RunResult res = ferrand::dsl::run(script, cfg);
  // With the report on stdout the text summary moves to stderr.
  (json_out == "-" ? std::cerr : std::cout) << res.text;
  if (json_out == "-") {
    std::cout << res.json;
  } else if (!json_out.empty()) {
    std::ofstream out(json_out);
    out << res.json;
  }
  return res.exit_code;
}
