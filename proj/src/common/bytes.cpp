#include "wfl/common/bytes.hpp"

namespace wfl {

std::string to_hex(ByteView bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void ByteWriter::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s);
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

ByteView ByteReader::raw(std::size_t n) {
    if (n > remaining()) throw DecodeError("unexpected end of input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::string ByteReader::str() {
    auto n = u32();
    auto b = raw(n);
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

bool ByteReader::boolean() {
    auto v = u8();
    if (v > 1) throw DecodeError("invalid boolean byte");
    return v == 1;
}

void ByteReader::expect_items(std::uint64_t count, std::size_t min_item_size) const {
    if (min_item_size != 0 && count > remaining() / min_item_size) {
        throw DecodeError("declared count exceeds remaining input");
    }
}

}  // namespace wfl
