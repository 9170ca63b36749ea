#include "kcgg/io_util.hpp"

#include <fstream>
#include <sstream>

#include "kcgg/errors.hpp"

namespace kcgg::io {

void write_u16(std::ostream& out, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

std::uint16_t read_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    if (!in) throw IoError("read_u16: unexpected end of stream");
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("read_u64: unexpected end of stream");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void write_f64_array(std::ostream& out, const double* data, std::size_t count) {
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
}

void read_f64_array(std::istream& in, double* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw IoError("read_f64_array: unexpected end of stream");
}

void write_json_block(std::ostream& out, const nlohmann::json& j) {
    std::string text = j.dump();
    write_u64(out, text.size());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

nlohmann::json read_json_block(std::istream& in) {
    std::uint64_t len = read_u64(in);
    if (len > (1ULL << 30)) throw IoError("read_json_block: implausible header length");
    std::string text(len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(len));
    if (!in) throw IoError("read_json_block: truncated header");
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("read_json_block: malformed header: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_text_file: cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_text_file: cannot open '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write_text_file: write failed for '" + path + "'");
}

} // namespace kcgg::io
