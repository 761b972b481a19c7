#ifndef BLOCKPROJ_ERRORS_HPP
#define BLOCKPROJ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blockproj {

enum class ErrorCode {
    invalid_argument,
    not_prime,
    division_by_zero,
    parse_error,
    not_monic,
    not_irreducible,
    sequence_too_short,
    dimension_mismatch,
    insufficient_irreducibles,
    limit_exceeded,
};

/// Domain error carrying a stable code for the C API boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace blockproj

#endif
