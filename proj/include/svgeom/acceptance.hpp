#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace svgeom::acceptance {

struct Options {
  int workers = 0;
  /// Directory for emitted CSV files; empty means the current directory.
  std::string artifact_dir;
};

struct Result {
  int id;
  std::string name;
  bool passed;
  double seconds;
  double time_limit;
  std::string detail;
};

int criterion_count();

Result run_criterion(int id, const Options& options = {});

/// Runs every criterion, printing one PASS/FAIL line per criterion to `log`.
std::vector<Result> run_all(std::ostream& log, const Options& options = {});

std::string format_line(const Result& r);

}  // namespace svgeom::acceptance
