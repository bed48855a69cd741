#pragma once

#include <stdexcept>
#include <string>

namespace foleylab {

enum class ErrorCode {
    invalid_argument = 1, // precondition violated by the caller
    io_error = 2,         // filesystem / stream failure
    format_error = 3,     // malformed input file
    unsupported = 4,      // recognized but unsupported encoding/feature
    estimation_error = 5, // metric undefined for this input (e.g. silence)
    agent_error = 6,      // an agent port failed
    internal = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
    throw Error(ErrorCode::invalid_argument, msg);
}

} // namespace foleylab
