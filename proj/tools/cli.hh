#ifndef HOMFORGE_HEADER_CLI_HH
#define HOMFORGE_HEADER_CLI_HH 1

#include <ostream>
#include <string>
#include <vector>

namespace homforge::cli
{
    enum ExitCode : int
    {
        exit_yes = 0,
        exit_no = 1,
        exit_usage = 2,
        exit_resource = 3
    };

    /// Runs one invocation; args excludes the program name. Decision output goes to out as one JSON document.
    auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;
}

#endif
