#include "eyesec/codec/pcap.hpp"

#include <fstream>
#include <iterator>

namespace eyesec::codec {

namespace {

void put_le32(Bytes& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_le16(Bytes& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint32_t get_le32(ByteView b, std::size_t off)
{
    return static_cast<std::uint32_t>(b[off]) | static_cast<std::uint32_t>(b[off + 1]) << 8
        | static_cast<std::uint32_t>(b[off + 2]) << 16 | static_cast<std::uint32_t>(b[off + 3]) << 24;
}

std::uint16_t get_le16(ByteView b, std::size_t off)
{
    return static_cast<std::uint16_t>(b[off] | b[off + 1] << 8);
}

void check_link_type(std::uint32_t link_type)
{
    if (link_type != kLinkTypeIeee802154WithFcs) {
        throw CodecError(CodecErrc::UnsupportedLinkType,
                         "link type " + std::to_string(link_type) + " is not IEEE 802.15.4 with FCS (195)");
    }
}

} // namespace

PcapCapture read_pcap(ByteView bytes)
{
    if (bytes.size() < kPcapGlobalHeaderSize) throw CodecError(CodecErrc::BadMagic, "file shorter than PCAP global header");
    if (get_le32(bytes, 0) != kPcapMagic) throw CodecError(CodecErrc::BadMagic, "not a little-endian microsecond PCAP file");
    if (get_le16(bytes, 4) != 2 || get_le16(bytes, 6) != 4) {
        throw CodecError(CodecErrc::MalformedCapture, "unsupported PCAP version");
    }
    PcapCapture capture;
    capture.link_type = get_le32(bytes, 20);
    check_link_type(capture.link_type);

    std::size_t off = kPcapGlobalHeaderSize;
    std::chrono::microseconds last{0};
    while (off < bytes.size()) {
        if (bytes.size() - off < kPcapRecordHeaderSize) throw CodecError(CodecErrc::MalformedCapture, "truncated record header");
        const auto sec = get_le32(bytes, off);
        const auto usec = get_le32(bytes, off + 4);
        const auto incl = get_le32(bytes, off + 8);
        const auto orig = get_le32(bytes, off + 12);
        off += kPcapRecordHeaderSize;
        if (usec >= 1'000'000) throw CodecError(CodecErrc::MalformedCapture, "microsecond field out of range");
        if (incl != orig) throw CodecError(CodecErrc::MalformedCapture, "snapped records are not supported");
        if (bytes.size() - off < incl) throw CodecError(CodecErrc::MalformedCapture, "truncated record body");
        PcapRecord rec;
        rec.timestamp = std::chrono::seconds(sec) + std::chrono::microseconds(usec);
        if (rec.timestamp < last) throw CodecError(CodecErrc::MalformedCapture, "record timestamps go backwards");
        last = rec.timestamp;
        rec.frame.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off), bytes.begin() + static_cast<std::ptrdiff_t>(off + incl));
        off += incl;
        capture.records.push_back(std::move(rec));
    }
    return capture;
}

Bytes write_pcap(const PcapCapture& capture)
{
    check_link_type(capture.link_type);
    Bytes out;
    put_le32(out, kPcapMagic);
    put_le16(out, 2);
    put_le16(out, 4);
    put_le32(out, 0); // thiszone
    put_le32(out, 0); // sigfigs
    put_le32(out, kPcapSnapLen);
    put_le32(out, capture.link_type);

    std::chrono::microseconds last{0};
    for (const auto& rec : capture.records) {
        if (rec.timestamp < last || rec.timestamp.count() < 0) {
            throw CodecError(CodecErrc::MalformedCapture, "record timestamps must be nonnegative and nondecreasing");
        }
        last = rec.timestamp;
        const auto us = rec.timestamp.count();
        put_le32(out, static_cast<std::uint32_t>(us / 1'000'000));
        put_le32(out, static_cast<std::uint32_t>(us % 1'000'000));
        put_le32(out, static_cast<std::uint32_t>(rec.frame.size()));
        put_le32(out, static_cast<std::uint32_t>(rec.frame.size()));
        out.insert(out.end(), rec.frame.begin(), rec.frame.end());
    }
    return out;
}

PcapCapture read_pcap_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_pcap(bytes);
}

void write_pcap_file(const std::filesystem::path& path, const PcapCapture& capture)
{
    auto bytes = write_pcap(capture);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

} // namespace eyesec::codec
