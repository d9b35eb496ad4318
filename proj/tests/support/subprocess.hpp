#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "temp_dir.hpp"

namespace support {

struct RunResult {
    int status = -1;
    std::string out;
    std::string err;

    bool ok() const { return status == 0; }
};

inline std::string shell_quote(const std::string& arg) {
    std::string quoted = "'";
    for (char c : arg) {
        if (c == '\'')
            quoted += "'\\''";
        else
            quoted += c;
    }
    quoted += "'";
    return quoted;
}

// Runs a program with arguments through the shell, capturing both streams.
// stdin_text, when set, is piped in through a file so "-" inputs work.
inline RunResult run(const std::vector<std::string>& argv, const std::string& stdin_text = "") {
    if (argv.empty()) throw std::runtime_error("run: empty argv");
    TempDir scratch;
    auto out_path = scratch.file("stdout");
    auto err_path = scratch.file("stderr");

    // stdin always comes from a file so a run can never block on a terminal.
    auto in_path = scratch.write("stdin", stdin_text);

    std::ostringstream cmd;
    for (const auto& arg : argv) cmd << shell_quote(arg) << " ";
    cmd << "< " << shell_quote(in_path) << " > " << shell_quote(out_path) << " 2> "
        << shell_quote(err_path);

    int raw = std::system(cmd.str().c_str());

    RunResult result;
    if (raw == -1)
        result.status = -1;
    else if (WIFEXITED(raw))
        result.status = WEXITSTATUS(raw);
    else
        result.status = 128;

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

}  // namespace support
