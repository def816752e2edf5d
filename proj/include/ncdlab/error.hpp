#pragma once

#include <stdexcept>
#include <string>

namespace ncdlab {

enum class ErrorKind {
    Input,             // malformed or inconsistent user input
    Parse,             // text formats (frequency lists, grammars, Newick, CSV)
    InvalidSpec,       // codec spec out of range
    CodecUnavailable,  // external compressor missing or failing
    UndefinedDistance, // NCD of two empty inputs, silhouettes over one class
    Domain,            // mathematical domain violations (KL support, singularities)
    Unsupported,       // operation not defined for this input (recursive grammar, ...)
    Resource,          // size limits exceeded
    Contract,          // caller violated a documented precondition
    Runaway,           // grammar expansion exceeded the depth bound
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// CLI exit status for an error kind: 2 for input problems, 3 for external codec failures.
int exit_code(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

}  // namespace ncdlab
