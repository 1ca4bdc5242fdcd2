#ifndef BWTGLUE_WIRE_UTIL_HPP
#define BWTGLUE_WIRE_UTIL_HPP

// Little-endian primitives shared by the index and grammar file formats.

#include <cstdint>
#include <string>
#include <string_view>

#include "bwtglue/errors.hpp"

namespace bwtglue::wire {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

/// Sequential reader over a byte buffer; throws FormatError on underrun.
class Reader {
public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::string_view bytes(std::uint64_t len) {
        need(len);
        std::string_view v = data_.substr(pos_, len);
        pos_ += len;
        return v;
    }

    std::uint64_t offset() const { return pos_; }
    std::uint64_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::uint64_t len) const {
        if (len > data_.size() - pos_) throw FormatError("truncated payload");
    }

    std::string_view data_;
    std::uint64_t pos_ = 0;
};

/// IEEE CRC-32 of `data` (zlib polynomial).
std::uint32_t crc32_of(std::string_view data);

/// Appends the CRC of everything currently in `out`.
inline void append_crc(std::string& out) {
    put_u32(out, crc32_of(out));
}

/// Splits payload+CRC, verifies, returns payload. Throws FormatError.
std::string_view check_crc(std::string_view data);

}  // namespace bwtglue::wire

#endif
