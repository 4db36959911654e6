#include "eyesec/sniffer/records.hpp"

#include <stdexcept>

namespace eyesec::sniffer {

const char* to_string(SignatureStatus s)
{
    switch (s) {
    case SignatureStatus::Unchecked: return "unchecked";
    case SignatureStatus::Valid: return "valid";
    case SignatureStatus::Invalid: return "invalid";
    case SignatureStatus::UnknownKey: return "unknown_key";
    case SignatureStatus::Unsigned: return "unsigned";
    }
    return "?";
}

SignatureStatus parse_signature_status(const std::string& text)
{
    for (auto s : {SignatureStatus::Unchecked, SignatureStatus::Valid, SignatureStatus::Invalid,
                   SignatureStatus::UnknownKey, SignatureStatus::Unsigned}) {
        if (text == to_string(s)) return s;
    }
    throw std::invalid_argument("unknown signature status: " + text);
}

const char* to_string(Admission a) { return a == Admission::Admitted ? "admitted" : "duplicate"; }

bool HopRecord::is_first_hop() const
{
    try {
        return codec::ipv6_to_mac(src_ip) == src_mac;
    } catch (const codec::CodecError&) {
        return false;
    }
}

} // namespace eyesec::sniffer
