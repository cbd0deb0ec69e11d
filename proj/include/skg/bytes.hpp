#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace skg::bytes {

// Little-endian primitives shared by every serialized format in the project.
// All readers throw FormatError on a short read.

void write_u8(std::ostream& out, uint8_t v);
void write_u32(std::ostream& out, uint32_t v);
void write_u64(std::ostream& out, uint64_t v);
void write_varint(std::ostream& out, uint64_t v);  // unsigned LEB128
void write_string(std::ostream& out, std::string_view s);  // u32 length prefix

uint8_t read_u8(std::istream& in);
uint32_t read_u32(std::istream& in);
uint64_t read_u64(std::istream& in);
uint64_t read_varint(std::istream& in);
std::string read_string(std::istream& in);

void write_raw(std::ostream& out, const void* data, std::size_t n);
void read_raw(std::istream& in, void* data, std::size_t n);

}  // namespace skg::bytes
