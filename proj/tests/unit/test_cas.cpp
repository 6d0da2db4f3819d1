#include <fstream>
#include <thread>

#include "doctest.h"
#include "support/sha256_reference.hpp"
#include "support/temp_dir.hpp"
#include "wfl/cas/blob_store.hpp"
#include "wfl/common/rng.hpp"

using namespace wfl;
using namespace wfl::cas;
using wfl::testing::TempDir;

namespace {
Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next());
    return b;
}
}  // namespace

TEST_CASE("sha256 matches published vectors and the reference implementation") {
    CHECK(to_hex(sha256({})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(sha256(as_bytes("abc"))) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha256(as_bytes("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");

    Rng rng(7);
    for (std::size_t n : {0u, 1u, 55u, 56u, 63u, 64u, 65u, 119u, 1000u, 4097u}) {
        auto data = random_bytes(rng, n);
        CHECK(sha256(data) == wfl::testing::sha256_reference(data));
    }
}

TEST_CASE("cid text form") {
    auto cid = Cid::of({});
    CHECK(cid.str() == "sha256-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(Cid::parse(cid.str()) == cid);

    CHECK_THROWS_AS(Cid::parse("sha256-abc"), CasError);
    CHECK_THROWS_AS(Cid::parse("md5-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"), CasError);
    // Uppercase hex is not the canonical form.
    CHECK_THROWS_AS(Cid::parse("sha256-E3B0C44298FC1C149AFBF4C8996FB92427AE41E4649B934CA495991B7852B855"), CasError);
}

TEST_CASE("put is idempotent and lays blobs out by digest prefix") {
    TempDir dir;
    BlobStore store(dir.path());
    Bytes b{1, 2, 3, 4};
    auto c1 = store.put(b);
    auto c2 = store.put(b);
    CHECK(c1 == c2);
    CHECK(store.count() == 1);
    CHECK(c1.digest() == wfl::testing::sha256_reference(b));

    auto hex = c1.hex();
    CHECK(std::filesystem::exists(dir.path() / hex.substr(0, 2) / hex));
    CHECK(store.size_of(c1) == 4u);

    auto empty = store.put({});
    CHECK(empty.str() == "sha256-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(store.get(empty).empty());
}

TEST_CASE("one flipped bit yields a distinct cid") {
    TempDir dir;
    BlobStore store(dir.path());
    Bytes b(100, 0x5a);
    auto base = store.put(b);
    b[37] ^= 0x01;
    CHECK(store.put(b) != base);
}

TEST_CASE("get round-trips, reports unknown cids and detects tampering") {
    TempDir dir;
    BlobStore store(dir.path());
    Bytes b{9, 8, 7};
    auto cid = store.put(b);
    CHECK(store.get(cid) == b);

    auto unknown = Cid::of(as_bytes("never stored"));
    try {
        store.get(unknown);
        FAIL("expected NotFound");
    } catch (const CasError& e) {
        CHECK(e.code() == CasErrc::NotFound);
    }

    {
        std::ofstream out(store.path_for(cid), std::ios::binary | std::ios::trunc);
        out << "evil";
    }
    try {
        store.get(cid);
        FAIL("expected IntegrityViolation");
    } catch (const CasError& e) {
        CHECK(e.code() == CasErrc::IntegrityViolation);
    }
}

TEST_CASE("deleting a blob out-of-band is an integrity violation") {
    TempDir dir;
    BlobStore store(dir.path());
    auto cid = store.put(as_bytes("model"));
    std::filesystem::remove(store.path_for(cid));
    try {
        store.get(cid);
        FAIL("expected IntegrityViolation");
    } catch (const CasError& e) {
        CHECK(e.code() == CasErrc::IntegrityViolation);
    }
}

TEST_CASE("reopening a store re-indexes existing blobs") {
    TempDir dir;
    Cid cid;
    {
        BlobStore store(dir.path());
        cid = store.put(as_bytes("persisted"));
    }
    BlobStore reopened(dir.path());
    CHECK(reopened.contains(cid));
    CHECK(reopened.get(cid) == Bytes(as_bytes("persisted").begin(), as_bytes("persisted").end()));
}

TEST_CASE("verify rejects any mutation") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        auto b = random_bytes(rng, 1 + rng.below(256));
        auto cid = Cid::of(b);
        REQUIRE(verify(cid, b));
        auto mutated = b;
        switch (rng.below(3)) {
            case 0: mutated[rng.below(mutated.size())] ^= static_cast<std::uint8_t>(1 + rng.below(255)); break;
            case 1: mutated.push_back(static_cast<std::uint8_t>(rng.next())); break;
            default: mutated.pop_back(); break;
        }
        CHECK_FALSE(verify(cid, mutated));
    }
}

TEST_CASE("concurrent identical puts converge on one blob") {
    TempDir dir;
    BlobStore store(dir.path());
    Bytes b(4096, 0x42);
    std::vector<std::thread> threads;
    std::vector<Cid> cids(8);
    for (std::size_t t = 0; t < cids.size(); ++t) {
        threads.emplace_back([&, t] { cids[t] = store.put(b); });
    }
    for (auto& t : threads) t.join();
    for (const auto& c : cids) CHECK(c == cids.front());
    CHECK(store.count() == 1);
    CHECK(store.get(cids.front()) == b);
}
