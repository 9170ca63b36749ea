#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace kcgg::io {

/// Little-endian binary primitives shared by the checkpoint and dataset
/// formats. The host is assumed little-endian (x86/ARM); a big-endian host
/// fails loudly at the first magic check rather than corrupting silently.

void write_u16(std::ostream& out, std::uint16_t v);
std::uint16_t read_u16(std::istream& in);

void write_u64(std::ostream& out, std::uint64_t v);
std::uint64_t read_u64(std::istream& in);

void write_f64_array(std::ostream& out, const double* data, std::size_t count);
void read_f64_array(std::istream& in, double* data, std::size_t count);

/// Length-prefixed UTF-8 JSON block (u64 byte count, then the document).
void write_json_block(std::ostream& out, const nlohmann::json& j);
nlohmann::json read_json_block(std::istream& in);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace kcgg::io
