#include "wfl/cas/cid.hpp"

#include "wfl/cas/blob_store.hpp"

namespace wfl::cas {

Cid Cid::parse(std::string_view text) {
    if (!text.starts_with(prefix) || text.size() != prefix.size() + 64) {
        throw CasError(CasErrc::InvalidCid, std::string(text));
    }
    auto hex = text.substr(prefix.size());
    for (char c : hex) {
        bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) throw CasError(CasErrc::InvalidCid, std::string(text));
    }
    Digest d{};
    auto raw = from_hex(hex);
    std::copy(raw.begin(), raw.end(), d.begin());
    return Cid(d);
}

bool verify(const Cid& cid, ByteView bytes) { return sha256(bytes) == cid.digest(); }

}  // namespace wfl::cas
