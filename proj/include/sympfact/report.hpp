#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace sympfact {

struct Failure {
  std::string case_id;
  std::string expected;
  std::string got;
};

// Outcome of one verification suite; `details` carries suite-specific facts.
struct Report {
  std::string suite;
  std::size_t checked = 0;
  std::vector<Failure> failures;
  double wall_seconds = 0;
  nlohmann::json details = nlohmann::json::object();

  bool ok() const { return failures.empty(); }
  void fail(std::string case_id, std::string expected, std::string got) {
    failures.push_back(Failure{std::move(case_id), std::move(expected), std::move(got)});
  }
};

// Wall time is left out so that equal inputs give byte-identical output.
inline nlohmann::json to_json(const Report& r) {
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : r.failures) fs.push_back({{"case", f.case_id}, {"expected", f.expected}, {"got", f.got}});
  nlohmann::json j = {{"suite", r.suite}, {"checked", r.checked}, {"failures", fs}};
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

}  // namespace sympfact
