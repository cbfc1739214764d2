#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hilbert16 {

enum class errc {
    syntax_error,
    unknown_identifier,
    exponent_overflow,
    identically_zero,
    degenerate_divergence,
    degenerate_system,
    not_generic,
    solver_inconclusive,
    invalid_degree,
    wrong_degree,
    non_integer,
    winding_broken,
    irregular_path,
    non_finite,
    not_critical,
    unassigned_contact,
    blowup,
    no_return,
    not_converged,
    non_isolated,
    usage,
};

const char* errc_name(errc c);

// CLI exit-code buckets: 1 domain, 2 usage, 3 numeric failure.
int errc_exit_code(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

// Parse failure carrying the byte offset into the input text.
class ParseError : public Error {
public:
    ParseError(errc code, const std::string& msg, std::size_t offset)
        : Error(code, msg + " (byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace hilbert16
