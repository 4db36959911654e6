#pragma once

#include <stdexcept>
#include <string>

namespace eyesec::codec {

enum class CodecErrc {
    TruncatedFrame,
    BadChecksum,
    PayloadTooLarge,
    MalformedFrame,
    MalformedDatagram,
    BadUdpChecksum,
    NonDerivableAddress,
    BadMagic,
    UnsupportedLinkType,
    MalformedCapture,
};

const char* to_string(CodecErrc code);

class CodecError : public std::runtime_error {
public:
    CodecError(CodecErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    CodecErrc code() const noexcept { return code_; }

private:
    CodecErrc code_;
};

} // namespace eyesec::codec
