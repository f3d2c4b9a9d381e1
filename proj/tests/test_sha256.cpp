#include <catch2/catch_amalgamated.hpp>

#include "csseal/sha256.hpp"

using namespace csseal;
using namespace csseal::hash;

TEST_CASE("FIPS 180 vectors") {
    CHECK(to_hex(sha256("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(to_hex(sha256("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(to_hex(sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    std::string million(1000000, 'a');
    CHECK(to_hex(sha256(million)) ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("streaming equals one-shot across split points") {
    std::string msg = "The quick brown fox jumps over the lazy dog, again and again, 0123456789";
    auto ref = sha256(msg);
    for (size_t split : {size_t(1), size_t(17), size_t(63), size_t(64), msg.size() - 1}) {
        Sha256 h;
        h.update(msg.substr(0, split));
        h.update(msg.substr(split));
        CHECK(h.finish() == ref);
    }
}

TEST_CASE("keystream regression") {
    // secret = 0x01..0x20, label "PHI", epoch parameter 3
    Bytes secret(32);
    for (int i = 0; i < 32; ++i) secret[i] = uint8_t(i + 1);
    Keystream ks(secret, "PHI", {3});
    std::array<uint8_t, 16> head{};
    ks.fill(head);
    CHECK(to_hex(head) == "0381bc321b9a601c27a35440bc4a9070");

    Keystream ks2(secret, "SHF", {3, 7});
    std::array<uint8_t, 16> head2{};
    ks2.fill(head2);
    CHECK(to_hex(head2) == "85f74fdd2e9093fd8f9a281eeae892c6");
}

TEST_CASE("keystream draws below a bound are in range and deterministic") {
    Bytes secret(32, 0xab);
    Keystream a(secret, "T", {1});
    Keystream b(secret, "T", {1});
    for (uint32_t bound : {2u, 3u, 7u, 100u, 1u << 20}) {
        for (int i = 0; i < 200; ++i) {
            uint32_t va = a.next_below(bound);
            CHECK(va < bound);
            CHECK(va == b.next_below(bound));
        }
    }
}
