#pragma once

// Runs the nyts binary through the shell and captures its exit status and output.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fixtures {

struct cli_result {
    int status = -1;
    std::string output;
};

inline cli_result run_cli(const std::string &args, const std::filesystem::path &log) {
    const std::string command = std::string{ "\"" } + NYTS_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int raw = std::system(command.c_str());
    cli_result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in{ log };
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

inline std::string slurp(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace fixtures
