#include "wfl/cas/blob_store.hpp"

#include <fstream>
#include <mutex>

#include "wfl/common/files.hpp"

namespace fs = std::filesystem;

namespace wfl::cas {

const char* to_string(CasErrc code) {
    switch (code) {
        case CasErrc::StorageFailure: return "StorageFailure";
        case CasErrc::NotFound: return "NotFound";
        case CasErrc::IntegrityViolation: return "IntegrityViolation";
        case CasErrc::InvalidCid: return "InvalidCid";
    }
    return "Unknown";
}

namespace {
bool is_hex64(const std::string& s) {
    if (s.size() != 64) return false;
    for (char c : s) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}
}  // namespace

BlobStore::BlobStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) {
        throw CasError(CasErrc::StorageFailure, "cannot open store root " + root_.string());
    }
    for (const auto& shard : fs::directory_iterator(root_)) {
        if (!shard.is_directory() || shard.path().filename().string().size() != 2) continue;
        for (const auto& entry : fs::directory_iterator(shard.path())) {
            auto name = entry.path().filename().string();
            if (!entry.is_regular_file() || !is_hex64(name)) continue;
            if (name.compare(0, 2, shard.path().filename().string()) != 0) continue;
            index_.emplace(Cid::parse(std::string(Cid::prefix) + name), entry.file_size());
        }
    }
}

fs::path BlobStore::path_for(const Cid& cid) const {
    auto hex = cid.hex();
    return root_ / hex.substr(0, 2) / hex;
}

Cid BlobStore::put(ByteView bytes) {
    auto cid = Cid::of(bytes);
    {
        std::shared_lock lock(mu_);
        if (index_.contains(cid)) return cid;
    }
    auto path = path_for(cid);
    try {
        fs::create_directories(path.parent_path());
        write_file_atomic(path, bytes);
    } catch (const std::exception& e) {
        throw CasError(CasErrc::StorageFailure, e.what());
    }
    std::unique_lock lock(mu_);
    index_.emplace(cid, bytes.size());
    return cid;
}

Bytes BlobStore::get(const Cid& cid) const {
    {
        std::shared_lock lock(mu_);
        if (!index_.contains(cid)) throw CasError(CasErrc::NotFound, cid.str());
    }
    Bytes data;
    try {
        data = read_file(path_for(cid));
    } catch (const std::exception&) {
        // Indexed but unreadable: the blob was removed out-of-band.
        throw CasError(CasErrc::IntegrityViolation, cid.str() + " is missing from disk");
    }
    if (!verify(cid, data)) throw CasError(CasErrc::IntegrityViolation, cid.str());
    return data;
}

bool BlobStore::contains(const Cid& cid) const {
    std::shared_lock lock(mu_);
    return index_.contains(cid);
}

std::optional<std::uint64_t> BlobStore::size_of(const Cid& cid) const {
    std::shared_lock lock(mu_);
    auto it = index_.find(cid);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t BlobStore::count() const {
    std::shared_lock lock(mu_);
    return index_.size();
}

}  // namespace wfl::cas
