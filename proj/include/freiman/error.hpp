#pragma once

#include <stdexcept>
#include <string>

namespace freiman {

enum class ErrorCode {
    invalid_argument = 1,
    parse_error,
    invalid_element,
    group_mismatch,
    overflow,
    empty_set,
    cap_exceeded,
    io_error,
    internal_error,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace freiman
