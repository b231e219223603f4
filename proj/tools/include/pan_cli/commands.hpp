#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pan::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kDivergence = 3 };

/// Bad invocation: maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  bool force = false;
  std::string command_line;
};

struct LinearOptions {
  std::filesystem::path problem_file;  // empty: toy problem
  double lambda1 = 5.0;
  double lambda2 = 0.5;
  double omega = 1.0;
  int k = 2;
  bool omega_sweep = false;
  bool k_sweep = false;
  std::vector<double> window{-2.0, 3.0, -2.0, 3.0};
  int resolution = 201;
};

struct ContourOptions {
  std::filesystem::path problem_file;
  std::string field = "pap";  // penalty | objective | pap
  double lambda = 5.0;
  double lambda1 = 5.0;
  double lambda2 = 0.5;
  double omega = 1.0;
  int k = 2;
  std::vector<double> window{-2.0, 3.0, -2.0, 3.0};
  int resolution = 201;
};

struct TrainOptions {
  std::filesystem::path config;
  std::optional<int> epochs;
  std::optional<int> freeze_discriminator_after;
  int progress_every = 0;
};

struct CompareOptions {
  std::vector<std::filesystem::path> runs;
};

/// Creates `out` (refusing a non-empty directory unless force is set).
void prepare_output_dir(const std::filesystem::path& out, bool force);

int cmd_verify(const GlobalOptions& g, double lambda1, double lambda2, std::ostream& log);
int cmd_linear(const GlobalOptions& g, const LinearOptions& o, std::ostream& log);
int cmd_contour(const GlobalOptions& g, const ContourOptions& o, std::ostream& log);
int cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& log);
int cmd_compare(const GlobalOptions& g, const CompareOptions& o, std::ostream& log);

/// Full CLI: parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, char** argv, std::ostream& log, std::ostream& err);

}  // namespace pan::cli
