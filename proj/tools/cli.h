#ifndef GSCP_TOOLS_CLI_H_
#define GSCP_TOOLS_CLI_H_

#include <map>
#include <string>
#include <vector>

namespace gscp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

// Flat key=value file. Blank lines and '#' comments are skipped; keys may
// carry leading dashes. Throws std::runtime_error naming the bad line.
std::map<std::string, std::string> read_config_file(const std::string& path);

// Inserts config entries as "--key=value" directly after the subcommand
// name so that flags given on the command line, which come later, win.
std::vector<std::string> splice_config(const std::vector<std::string>& args);

int run(int argc, char** argv);

}  // namespace gscp::cli

#endif  // GSCP_TOOLS_CLI_H_
