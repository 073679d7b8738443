#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sympfact/report.hpp"

namespace sympfact {

struct Config {
  std::uint64_t seed = 1;
  int kmax = 6;
  std::size_t samples = 100;
  double tol = 1e-9;
  std::string in;
  std::string out;
  std::string emit;
  bool mutate_signs = false;   // negative control for the tangency suite
  bool allow_errata = false;   // known table transcription errors become details
  bool exp = false;
};

// Throws std::invalid_argument naming the offending field.
void validate(const Config& c);

std::vector<Report> cmd_verify(const Config& c);
std::vector<Report> cmd_verify_fields(const Config& c);

// Whole-report JSON; contains no wall times.
nlohmann::json reports_to_json(const Config& c, const std::vector<Report>& reports);

// Exit codes: 0 success, 1 failed check or search, 2 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sympfact
