#ifndef GRACT_BYTE_IO_HPP
#define GRACT_BYTE_IO_HPP

#include "gract/error.hpp"

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gract {

/// Appends little-endian integers to a growing byte buffer.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

    void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    void words(std::span<const std::uint64_t> w) {
        u64(w.size());
        for (auto x : w) u64(x);
    }

    /// Writes `payload` prefixed by its u64 length.
    void section(const ByteWriter& payload) {
        u64(payload.size());
        bytes(payload.data());
    }

    std::size_t size() const { return buf_.size(); }
    std::span<const std::uint8_t> data() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    void put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    std::vector<std::uint8_t> buf_;
};

/// Cursor over a byte span; every read past the end throws FormatError.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::string str() {
        auto n = u32();
        auto b = bytes(n);
        return std::string(b.begin(), b.end());
    }

    std::vector<std::uint64_t> words() {
        auto n = u64();
        if (n > remaining() / 8) throw FormatError("truncated word array");
        std::vector<std::uint64_t> w(n);
        for (auto& x : w) x = u64();
        return w;
    }

    /// Reads a u64 length and returns a reader over exactly that many bytes.
    ByteReader section() {
        auto n = u64();
        return ByteReader(bytes(n));
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool at_end() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const {
        if (n > remaining()) throw FormatError("unexpected end of data");
    }

    std::uint64_t get_le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t(data_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace gract

#endif // GRACT_BYTE_IO_HPP
