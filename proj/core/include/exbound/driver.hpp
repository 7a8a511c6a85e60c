#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "exbound/config.hpp"
#include "exbound/errors.hpp"
#include "exbound/mesh.hpp"

namespace exbound {

// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O and other runtime errors
  kExitConfig = 2,
  kExitNotConverged = 3,
  kExitBoundViolation = 4,
};

// A computed lower bound exceeded an upper bound. Always a bug.
class BoundViolationError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::optional<std::string> out_dir;  // overrides the config's output_dir
  bool sequential = false;             // runs are sequential either way
};

// <geometry>_R<radius>_<n_radial>x<n_angular>
std::string run_label(const RunConfig& config, const LadderEntry& entry);
TetMesh generate_mesh(const RunConfig& config, const LadderEntry& entry);

// Each command returns an exit code; errors other than non-convergence are
// thrown. Files go to the output directory, progress to `log`.
int cmd_meshgen(const RunConfig& config, const RunOptions& options, std::ostream& log);
int cmd_solve(const RunConfig& config, const RunOptions& options, std::ostream& log);
int cmd_bounds(const RunConfig& config, const RunOptions& options, std::ostream& log);
int cmd_nonconforming(const RunConfig& config, const RunOptions& options, std::ostream& log);

// Loads the config, dispatches, and maps exceptions to exit codes with a
// message on `err`.
int run_command(std::string_view command, const std::string& config_path,
                const RunOptions& options, std::ostream& log, std::ostream& err);

}  // namespace exbound
