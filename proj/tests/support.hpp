// Helpers shared by the CLI tests and the acceptance runner.
#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace support {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string output;  // stdout and stderr
};

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Fresh scratch directory under the build tree, removed on construction.
inline fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(STRATIWAVE_TEST_SCRATCH) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

inline Run cli(const std::string& args, const fs::path& log) {
    const std::string cmd = quote(STRATIWAVE_CLI) + " " + args + " > " + quote(log.string()) + " 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = slurp(log);
    return r;
}

inline fs::path config_path(const std::string& name) { return fs::path(STRATIWAVE_CONFIG_DIR) / name; }

}  // namespace support
