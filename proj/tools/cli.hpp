#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noesis::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoFailure = 1;  // output not writable, address not bindable
inline constexpr int kParse = 2;      // unreadable or malformed input, bad flags
inline constexpr int kValidation = 3;
inline constexpr int kProtocol = 4;

// Runs one `noesis` command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        bool color = false);

}  // namespace noesis::cli
