#pragma once

#include <iosfwd>
#include <string>

namespace pricer {

enum ExitCode { kOk = 0, kValidationFailure = 2, kNumericalFailure = 3 };

/// Runs one command ("price", "compare", "convergence", "symmetry-check") on
/// the JSON config at `config_path`. The report goes to output.path when
/// set, otherwise to `out`; messages go to `err`.
int run(const std::string& command, const std::string& config_path, std::ostream& out,
        std::ostream& err);

}  // namespace pricer
