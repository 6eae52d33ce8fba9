#ifndef WCF_TOOLS_CLI_HPP
#define WCF_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcf/dual_cert.hpp"

namespace wcf::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kRejected = 3,
  kResourceLimit = 4,
};

/// Runs one command line (argv[0] is the program name) and returns the exit
/// code. Results go to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses a comma/whitespace separated list of reals. Throws
/// InvalidArgument naming the first malformed token.
std::vector<double> parse_real_list(const std::string& text);

nlohmann::json certificate_to_json(const DualCertificate& cert, const CertReport& report);
DualCertificate certificate_from_json(const nlohmann::json& doc);

}  // namespace wcf::cli

#endif  // WCF_TOOLS_CLI_HPP
