#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sectorlab/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "sectorlab: sector decompositions, symmetry breaking, thermality "
      "criteria and measurement instruments for finite models"};

  std::string input_path;
  std::string output_path;
  std::string format = "json";
  double tol = -1.0;
  std::uint64_t seed = sectorlab::kDefaultSeed;
  int jobs = 1;

  app.add_option("-i,--input", input_path, "model file (JSON)")->required();
  app.add_option("-o,--output", output_path,
                 "output path (stdout when omitted)");
  app.add_option("-f,--format", format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--tol", tol, "override the operator-equality tolerance");
  app.add_option("--seed", seed, "seed for generic-element draws");
  app.add_option("-j,--jobs", jobs, "number of concurrent analyses")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  sectorlab::RunOptions options;
  options.seed = seed;
  options.jobs = jobs;
  if (tol > 0) options.tol_override = tol;

  sectorlab::Report report = sectorlab::run_model_file(input_path, options);
  std::string rendered = (format == "json")
                             ? sectorlab::emit_json(report.body)
                             : sectorlab::emit_text(report.body);

  if (output_path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) {
      std::cerr << "IoError: cannot write '" << output_path << "'\n";
      return 3;
    }
    out << rendered;
    if (!out.good()) {
      std::cerr << "IoError: short write to '" << output_path << "'\n";
      return 3;
    }
  }
  return report.exit_code;
}
