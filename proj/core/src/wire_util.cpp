#include "wire_util.hpp"

#include <zlib.h>

namespace bwtglue::wire {

std::uint32_t crc32_of(std::string_view data) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    std::size_t off = 0;
    while (off < data.size()) {
        uInt chunk = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data() + off), chunk);
        off += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::string_view check_crc(std::string_view data) {
    if (data.size() < 4) throw FormatError("truncated payload");
    std::string_view body = data.substr(0, data.size() - 4);
    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i)
        stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[body.size() + i])) << (8 * i);
    if (crc32_of(body) != stored) throw FormatError("checksum mismatch");
    return body;
}

}  // namespace bwtglue::wire
