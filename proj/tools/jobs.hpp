#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace grushin::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBoundFailure = 2;
inline constexpr int kExitInternal = 3;

struct JobConfig {
  std::string mode = "verify";  // verify | table
  std::string command;
  std::optional<int> n, m, alpha;
  std::optional<int> kmin, kmax, nmax;
  std::optional<double> beta, epsilon, s, tol;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output;
  std::string format = "json";
  std::string bound = "all";
  bool all = false;  // full sweep instead of a single configuration
};

struct JobResult {
  bool pass = true;
  std::string summary;
  nlohmann::json json;
  std::string csv;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& verify_commands();
const std::vector<std::string>& table_commands();
const std::vector<std::string>& bound_names();

// Throws UsageError.
void validate(const JobConfig& jc);
JobResult run_job(const JobConfig& jc);
// Report text in the configured format.
std::string render(const JobConfig& jc, const JobResult& r);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace grushin::cli
