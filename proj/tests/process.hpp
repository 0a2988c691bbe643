#pragma once

// Runs the command-line tool and captures stdout and the exit status.

#include <array>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <sys/wait.h>

namespace bilinear::testing {

struct ProcessResult {
    int exit_code = -1;
    std::string out;
};

inline ProcessResult run_cli(const std::string& args) {
    const std::string cmd = std::string(BILINEAR_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        throw std::runtime_error("popen failed: " + cmd);
    ProcessResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

inline std::string data_file(const std::string& name) {
    return std::string(BILINEAR_DATA_DIR) + "/" + name;
}

}  // namespace bilinear::testing
