#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "wfl/cas/cid.hpp"

namespace wfl::cas {

enum class CasErrc { StorageFailure, NotFound, IntegrityViolation, InvalidCid };

const char* to_string(CasErrc code);

class CasError : public std::runtime_error {
public:
    CasError(CasErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    CasErrc code() const { return code_; }

private:
    CasErrc code_;
};

/// Flat on-disk blob store: `<root>/<first-2-hex>/<full-hex>`.
///
/// Blobs are immutable once written. Every read re-hashes the file, so a blob
/// modified behind the store's back surfaces as IntegrityViolation rather than
/// as silently wrong bytes. Reads may run concurrently; puts are idempotent and
/// publish through a rename, so concurrent identical puts are harmless.
class BlobStore {
public:
    /// Opens (creating if needed) the store at `root` and indexes existing blobs.
    explicit BlobStore(std::filesystem::path root);

    Cid put(ByteView bytes);
    Bytes get(const Cid& cid) const;
    bool contains(const Cid& cid) const;
    std::optional<std::uint64_t> size_of(const Cid& cid) const;
    std::size_t count() const;

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path path_for(const Cid& cid) const;

private:
    std::filesystem::path root_;
    mutable std::shared_mutex mu_;
    std::map<Cid, std::uint64_t> index_;
};

}  // namespace wfl::cas
