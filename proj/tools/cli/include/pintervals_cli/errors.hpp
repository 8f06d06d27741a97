#pragma once

#include <stdexcept>
#include <string>

namespace pintervals::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitData = 3,
  kExitAllFailed = 4,
};

/// Invalid configuration or flags. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing files, columns, unparsable cells, misaligned rows. Maps to exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pintervals::cli
