#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "cmv/verify.hpp"

int main(int argc, char** argv) {
  cmv::AcceptanceOptions opt;
  std::string json_path;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--json" && i + 1 < argc) json_path = argv[++i];
    else if (a == "--only" && i + 1 < argc) only = std::stoi(argv[++i]);
    else if (a == "--skip-soft") opt.include_soft = false;
    else {
      std::cerr << "usage: cmv_acceptance [--json PATH] [--only ID] [--skip-soft]\n";
      return 2;
    }
  }
  cmv::AcceptanceReport report;
  if (only > 0) {
    report.results.push_back(cmv::run_criterion(only, opt, &report.m_minus_convention));
    std::cout << cmv::format_line(report.results.back()) << std::endl;
  } else {
    report = cmv::run_acceptance(
        opt, [](const cmv::CriterionResult& r) { std::cout << cmv::format_line(r) << std::endl; });
  }
  if (!report.m_minus_convention.empty()) {
    std::cout << "M- convention: " << report.m_minus_convention << '\n';
  }
  std::cout << (report.hard_passed() ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED")
            << (report.all_passed() ? "" : " (see failures above)") << '\n';
  if (!json_path.empty()) {
    std::ofstream os(json_path);
    cmv::write_report_json(os, report);
  }
  return report.hard_passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
