#include "ncdlab/error.hpp"

namespace ncdlab {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::CodecUnavailable: return 3;
        case ErrorKind::Io: return 1;
        default: return 2;
    }
}

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Input: return "input error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::InvalidSpec: return "invalid codec spec";
        case ErrorKind::CodecUnavailable: return "codec unavailable";
        case ErrorKind::UndefinedDistance: return "undefined distance";
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Unsupported: return "unsupported";
        case ErrorKind::Resource: return "resource limit";
        case ErrorKind::Contract: return "contract violation";
        case ErrorKind::Runaway: return "runaway grammar";
        case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

}  // namespace ncdlab
