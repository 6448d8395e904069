#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace candlecast::cli {

// Stable exit codes for scripting.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "CANDLECAST_OUT_DIR";

int run(int argc, char** argv);

/// Same as run() with explicit streams; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "40", "40,50,70", "30:70" or "40:70:10".
[[nodiscard]] std::vector<std::size_t> parse_range(const std::string& text);

}  // namespace candlecast::cli
