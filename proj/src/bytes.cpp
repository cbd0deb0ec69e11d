#include "skg/bytes.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include "skg/errors.hpp"

namespace skg::bytes {

void write_raw(std::ostream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void read_raw(std::istream& in, void* data, std::size_t n) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw FormatError("unexpected end of stream");
}

void write_u8(std::ostream& out, uint8_t v) { write_raw(out, &v, 1); }

void write_u32(std::ostream& out, uint32_t v) {
    uint8_t buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
    write_raw(out, buf, 4);
}

void write_u64(std::ostream& out, uint64_t v) {
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(v >> (8 * i));
    write_raw(out, buf, 8);
}

void write_varint(std::ostream& out, uint64_t v) {
    while (v >= 0x80) {
        write_u8(out, static_cast<uint8_t>(v) | 0x80);
        v >>= 7;
    }
    write_u8(out, static_cast<uint8_t>(v));
}

void write_string(std::ostream& out, std::string_view s) {
    if (s.size() > std::numeric_limits<uint32_t>::max())
        throw FormatError("string too long to serialize");
    write_u32(out, static_cast<uint32_t>(s.size()));
    write_raw(out, s.data(), s.size());
}

uint8_t read_u8(std::istream& in) {
    uint8_t v;
    read_raw(in, &v, 1);
    return v;
}

uint32_t read_u32(std::istream& in) {
    uint8_t buf[4];
    read_raw(in, buf, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[i]) << (8 * i);
    return v;
}

uint64_t read_u64(std::istream& in) {
    uint8_t buf[8];
    read_raw(in, buf, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[i]) << (8 * i);
    return v;
}

uint64_t read_varint(std::istream& in) {
    uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        uint8_t b = read_u8(in);
        v |= static_cast<uint64_t>(b & 0x7F) << shift;
        if (!(b & 0x80)) return v;
    }
    throw FormatError("varint too long");
}

std::string read_string(std::istream& in) {
    uint32_t n = read_u32(in);
    std::string s(n, '\0');
    if (n) read_raw(in, s.data(), n);
    return s;
}

}  // namespace skg::bytes
