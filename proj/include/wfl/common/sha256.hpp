#pragma once

#include <array>
#include <cstdint>

#include "wfl/common/bytes.hpp"

namespace wfl {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

// Streaming variant for large files.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(ByteView data);
    Digest finish();

private:
    void* ctx_;
};

}  // namespace wfl
