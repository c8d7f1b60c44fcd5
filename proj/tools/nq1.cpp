#include "nq1/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Checks and reductions for NQ-manifolds of degree 1"};
  std::string command, file, json_out;
  nq1::RunOptions opt;
  app.add_option("command", command, "check-q | extract-algebroid | build-q | analyze-distribution | "
                                     "check-imfoliation | check-action | reduce")
      ->required()
      ->check(CLI::IsMember(nq1::command_names()));
  app.add_option("file", file, "input document")->required();
  app.add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
  app.add_option("--samples", opt.samples, "number of random sample points")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", opt.seed, "sampling seed");
  app.add_option("--max-xi-degree", opt.max_xi_degree, "xi-degree cutoff for invariant functions");
  app.add_option("--max-base-degree", opt.max_base_degree, "base-degree cutoff for invariant functions")
      ->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return nq1::exit_usage;
  }

  std::ifstream in(file, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << file << "\n";
    return nq1::exit_usage;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  nq1::CommandResult r = nq1::run_command_text(command, buf.str(), opt);
  if (r.exit_code == nq1::exit_usage) {
    std::cerr << file << ":" << r.text;
  } else {
    std::cout << r.text;
  }
  if (!json_out.empty()) {
    const std::string text = r.json.dump(2) + "\n";
    if (json_out == "-") {
      std::cout << text;
    } else {
      std::ofstream out(json_out, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << json_out << "\n";
        return nq1::exit_usage;
      }
      out << text;
    }
  }
  return r.exit_code;
}
