#include "ncdlab/codec.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "ncdlab/bwt.hpp"
#include "ncdlab/error.hpp"
#include "ncdlab/lz.hpp"
#include "ncdlab/ppm.hpp"

namespace ncdlab {
namespace {

// Removes the temporary input file on scope exit.
struct TempFile {
    std::string path;
    ~TempFile() {
        if (!path.empty()) ::unlink(path.c_str());
    }
};

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

CodeLength external_size(Bytes data, const std::string& command) {
    const char* tmpdir = std::getenv("TMPDIR");
    std::string pattern = std::string(tmpdir && *tmpdir ? tmpdir : "/tmp") + "/ncdlab-XXXXXX";
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error(ErrorKind::Io, std::string("cannot create temporary file: ") + std::strerror(errno));
    TempFile guard{pattern};
    std::size_t written = 0;
    while (written < data.size()) {
        const auto w = ::write(fd, data.data() + written, data.size() - written);
        if (w < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            throw Error(ErrorKind::Io, std::string("cannot write temporary file: ") + std::strerror(errno));
        }
        written += static_cast<std::size_t>(w);
    }
    ::close(fd);

    const std::string line = "(" + command + ") < " + shell_quote(pattern) + " 2>/dev/null";
    FILE* pipe = ::popen(line.c_str(), "r");
    if (!pipe) throw Error(ErrorKind::CodecUnavailable, "cannot start external codec '" + command + "'");
    std::uint64_t bytes = 0;
    char buf[1 << 15];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) bytes += got;
    const int status = ::pclose(pipe);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        throw Error(ErrorKind::CodecUnavailable, "external codec '" + command + "' failed (exit status " +
                                                     std::to_string(code) + ")");
    }
    return CodeLength::from_bytes(bytes);
}

}  // namespace

CodecSpec CodecSpec::parse(std::string_view text) {
    CodecSpec spec;
    if (text == "lz") {
        spec = lz();
    } else if (text == "bwt") {
        spec = bwt();
    } else if (text.starts_with("ppm:")) {
        const auto digits = text.substr(4);
        int order = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), order);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
            throw Error(ErrorKind::InvalidSpec, "bad PPM order in codec spec '" + std::string(text) + "'");
        spec = ppm(order);
    } else if (text == "ppm") {
        spec = ppm(kDefaultPpmOrder);
    } else if (text.starts_with("ext:")) {
        spec = external(std::string(text.substr(4)));
    } else {
        throw Error(ErrorKind::InvalidSpec, "unknown codec spec '" + std::string(text) +
                                                "' (expected ppm:N, lz, bwt or ext:<command>)");
    }
    spec.validate();
    return spec;
}

std::string CodecSpec::str() const {
    switch (family) {
        case CodecFamily::Ppm: return "ppm:" + std::to_string(order);
        case CodecFamily::Lz: return "lz";
        case CodecFamily::Bwt: return "bwt";
        case CodecFamily::External: return "ext:" + command;
    }
    return {};
}

void CodecSpec::validate() const {
    if (family == CodecFamily::Ppm && (order < kMinPpmOrder || order > kMaxPpmOrder))
        throw Error(ErrorKind::InvalidSpec, "PPM order must be in 1..16, got " + std::to_string(order));
    if (family == CodecFamily::External && command.find_first_not_of(" \t") == std::string::npos)
        throw Error(ErrorKind::InvalidSpec, "external codec needs a command");
}

CodeLength CodeLength::from_bits(double bits) {
    return {bits, static_cast<std::uint64_t>(std::ceil(bits / 8.0))};
}

CodeLength compressed_size(Bytes data, const CodecSpec& codec) {
    codec.validate();
    if (data.empty()) return {};
    switch (codec.family) {
        case CodecFamily::Ppm: return ppm_code_length(data, codec.order);
        case CodecFamily::Lz: return lz_compress(data);
        case CodecFamily::Bwt: return bwt_compress(data);
        case CodecFamily::External: return external_size(data, codec.command);
    }
    throw Error(ErrorKind::InvalidSpec, "unknown codec family");
}

}  // namespace ncdlab
