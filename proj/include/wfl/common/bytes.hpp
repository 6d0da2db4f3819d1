#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wfl {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView bytes);

/// Parses lowercase or uppercase hex. Throws std::invalid_argument on bad input.
Bytes from_hex(std::string_view hex);

// Little-endian fixed-width writer used by every canonical encoding.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void raw(std::string_view s) { raw(as_bytes(s)); }
    /// u32 length prefix followed by the bytes.
    void str(std::string_view s);
    void boolean(bool b) { u8(b ? 1 : 0); }

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }

private:
    template <typename T>
    void put_le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }

    Bytes out_;
};

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bounds-checked reader; every failure is a DecodeError.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
    ByteView raw(std::size_t n);
    std::string str();
    bool boolean();

    /// Checks that `count` items of at least `min_item_size` bytes can still follow.
    void expect_items(std::uint64_t count, std::size_t min_item_size) const;

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

private:
    template <typename T>
    T get_le() {
        auto b = raw(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<T>(b[i]) << (8 * i);
        }
        return v;
    }

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace wfl
