#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "wfl/common/bytes.hpp"
#include "wfl/common/sha256.hpp"

namespace wfl::cas {

// Content identifier: SHA-256 of the exact blob bytes.
// Text form is "sha256-" followed by 64 lowercase hex digits.
class Cid {
public:
    static constexpr std::string_view prefix = "sha256-";

    Cid() = default;
    explicit Cid(const Digest& digest) : digest_(digest) {}

    static Cid of(ByteView bytes) { return Cid(sha256(bytes)); }

    /// Throws CasError{InvalidCid} unless `text` is exactly prefix + 64 hex digits.
    static Cid parse(std::string_view text);

    const Digest& digest() const { return digest_; }
    std::string hex() const { return to_hex(digest_); }
    std::string str() const { return std::string(prefix) + hex(); }

    auto operator<=>(const Cid&) const = default;

private:
    Digest digest_{};
};

/// True iff sha256(bytes) equals the cid digest.
bool verify(const Cid& cid, ByteView bytes);

}  // namespace wfl::cas
