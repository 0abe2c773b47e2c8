#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lbx::suite {

struct SuiteOptions {
  int terms_per_calc = 500;
  int max_size = 25;
  std::uint64_t seed_base = 1;
  int pairs = 500;
  long fuel = 100000;
};

struct SuiteEntry {
  std::string id;
  std::string desc;
  bool pass = false;
  std::string details;
};

struct SuiteReport {
  std::vector<SuiteEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

// Runs the full acceptance battery; one entry per criterion. `progress`
// (may be null) receives one line per finished entry.
SuiteReport run_suite(const SuiteOptions& opt, std::ostream* progress);

std::string report_table(const SuiteReport& rep);
std::string report_json(const SuiteReport& rep);

}  // namespace lbx::suite
