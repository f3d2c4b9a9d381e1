#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "csseal/field256.hpp"
#include "oracle_fe.hpp"

using namespace csseal;
using namespace csseal::field256;

namespace {

FieldElement fe_from_hex(std::string_view hex) {
    Bytes32 b = bytes32_from_hex(hex);
    return from_bytes(std::span<const uint8_t, 32>(b));
}

Bytes32 random_bytes(std::mt19937_64& rng) {
    Bytes32 b{};
    for (auto& x : b) x = uint8_t(rng());
    return b;
}

const Bytes32 kPBytes = bytes32_from_hex(
    "edffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff7f");

} // namespace

TEST_CASE("identities and wraparound") {
    FieldElement p = from_bytes(std::span<const uint8_t, 32>(kPBytes));
    FieldElement pm1 = sub(p, fe_one());

    CHECK(to_bytes(add(fe_zero(), pm1)) == to_bytes(pm1));        // add(0, a) = a
    CHECK(to_bytes(add(pm1, fe_one())) == to_bytes(fe_zero()));   // (p-1)+1 = 0
    CHECK(to_bytes(sub(pm1, pm1)) == to_bytes(fe_zero()));        // a-a = 0
    CHECK(to_bytes(sub(fe_zero(), fe_one())) == to_bytes(pm1));   // 0-1 = p-1
    CHECK(to_bytes(mul(fe_one(), pm1)) == to_bytes(pm1));         // mul(1, a) = a
    CHECK(to_bytes(square(fe_zero())) == to_bytes(fe_zero()));
    CHECK(to_bytes(square(pm1)) == to_bytes(fe_one()));           // (-1)^2 = 1
}

TEST_CASE("freeze canonicalizes") {
    FieldElement p = from_bytes(std::span<const uint8_t, 32>(kPBytes));
    CHECK(to_bytes(p) == to_bytes(fe_zero()));                    // freeze(p) = 0
    FieldElement pm1 = sub(p, fe_one());
    CHECK(freeze(pm1).limbs == freeze(freeze(pm1)).limbs);        // freeze(p-1) stable
    // 2p - 1 -> p - 1
    FieldElement two_p_m1 = sub(add(p, p), fe_one());
    CHECK(to_bytes(two_p_m1) == to_bytes(pm1));
    // canonical value is below p
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        Bytes32 raw = random_bytes(rng);
        FieldElement f = freeze(from_bytes(std::span<const uint8_t, 32>(raw)));
        Bytes32 out = to_bytes(f);
        oracle::Val v = oracle::from_bytes(out);
        CHECK(oracle::cmp(v, oracle::kP) < 0);
    }
}

TEST_CASE("inverse basics") {
    CHECK(to_bytes(invert(fe_one())) == to_bytes(fe_one()));
    CHECK(to_bytes(invert(fe_zero())) == to_bytes(fe_zero())); // defined fallback
    // invert(2) = (p+1)/2
    CHECK(to_hex(to_bytes(invert(fe_from_u32(2)))) ==
          "f7ffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff3f");
    CHECK(to_bytes(mul(fe_from_u32(2), invert(fe_from_u32(2)))) == to_bytes(fe_one()));

    std::mt19937_64 rng(2);
    for (int i = 0; i < 250; ++i) {
        FieldElement a = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
        if (to_bytes(a) == to_bytes(fe_zero())) continue;
        CHECK(to_bytes(mul(a, invert(a))) == to_bytes(fe_one()));
    }
}

TEST_CASE("frozen cross-implementation vectors") {
    struct V {
        const char *a, *b, *mul, *add, *sub, *sqr, *inv;
    };
    // computed with an unrelated big-integer implementation
    const V vs[] = {
        {"22a605176844aad958c45f619b4c4707a9872019671b8e7ef57cc6ca31fb653f",
         "466e32853305de1eabf39d34ebc552590604225bde3f50312c015563658a3061",
         "5371ac772ccdfa634df79cf0b296ef19d9bf2e2ad1fabd5dc9300758a7c87b52",
         "7b14389c9b4988f803b8fd9586129a60af8b4274455bdeaf217e1b2e97859620",
         "c937d391343fccbaadd0c12cb086f4ada283febd88db3d4dc97b7167cc70355e",
         "3b39eb2e85d4caf75921abca144d977b3fcf85dc4979bbf5e5b0577431d53859",
         "868bbb0ab0f78bc940cb1eec666075021d75ae7e680229c12382049329ad0374"},
        {"709aa11a61df8e5af12eeec20c43c327f5a68850775ddb85e4c1dfcd060e3a05",
         "1c09f02c501dd4826c2c00dfe89a7b4724277143805aaef9f0f8426bff53c51a",
         "a7fd152476d50c374c85951ea48637f1435201a60fa2242015c399bd44c51f14",
         "8ca39147b1fc62dd5d5beea1f5dd3e6f19cef993f7b7897fd5ba22390662ff1f",
         "4191b1ed10c2bad78402eee323a847e0d07f170df7022d8cf3c89c6207ba746a",
         "fde7e955a404cad9f58c9cb07c03f1035bff966ea53c1019e999f22e187a3f2b",
         "6a758b9fcc710ef60198bb998236d9737c5d685b83e231be3742383f1e5d6a47"},
        {"824f519b24dada1198a29fcf3abe3536eaee70360bd1b053119b3f3e8704ca3e",
         "f3ea2a8648ff685bf3a179defc46b05c53bc40f9ddeb1be4992273d4dad40068",
         "54bc2a48747fd59d51f488624569978130821b6552242c03603cf2a85d01aa49",
         "883a7c216dd9436d8b4419ae3705e6923dabb12fe9bccc37abbdb21262d9ca26",
         "7c642615dcda71b6a40026f13d7785d99632303d2de5946f7778cc69ac2fc956",
         "276693764f0c3e9d1718c14543f7b584f8ebef49ddad688303505294ceaf7213",
         "314edc7fdfbfa1a26bdfad1305d8ff98fcd03e041c37c930719930444efee50e"},
    };
    for (const V& v : vs) {
        FieldElement a = fe_from_hex(v.a), b = fe_from_hex(v.b);
        CHECK(to_hex(to_bytes(mul(a, b))) == v.mul);
        CHECK(to_hex(to_bytes(add(a, b))) == v.add);
        CHECK(to_hex(to_bytes(sub(a, b))) == v.sub);
        CHECK(to_hex(to_bytes(square(a))) == v.sqr);
        CHECK(to_hex(to_bytes(invert(a))) == v.inv);
    }
    // the in-test oracle agrees with those vectors too
    for (const V& v : vs) {
        oracle::Val a = oracle::from_bytes(bytes32_from_hex(v.a));
        oracle::Val b = oracle::from_bytes(bytes32_from_hex(v.b));
        CHECK(to_hex(oracle::to_bytes(oracle::mulmod(a, b))) == v.mul);
        CHECK(to_hex(oracle::to_bytes(oracle::addmod(a, b))) == v.add);
        CHECK(to_hex(oracle::to_bytes(oracle::submod(a, b))) == v.sub);
        CHECK(to_hex(oracle::to_bytes(oracle::invmod(a))) == v.inv);
    }
}

TEST_CASE("property: agree with oracle on random unfrozen inputs") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 4000; ++i) {
        Bytes32 ab = random_bytes(rng), bb = random_bytes(rng);
        FieldElement a = from_bytes(std::span<const uint8_t, 32>(ab));
        FieldElement b = from_bytes(std::span<const uint8_t, 32>(bb));
        oracle::Val oa = oracle::from_bytes(ab), ob = oracle::from_bytes(bb);
        CHECK(to_bytes(mul(a, b)) == oracle::to_bytes(oracle::mulmod(oa, ob)));
        CHECK(to_bytes(add(a, b)) == oracle::to_bytes(oracle::addmod(oa, ob)));
        CHECK(to_bytes(sub(a, b)) == oracle::to_bytes(oracle::submod(oa, ob)));
        CHECK(to_bytes(square(a)) == oracle::to_bytes(oracle::mulmod(oa, oa)));
    }
}

TEST_CASE("square equals mul(a,a); mul commutes and associates") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 500; ++i) {
        FieldElement a = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
        FieldElement b = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
        FieldElement c = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
        CHECK(to_bytes(square(a)) == to_bytes(mul(a, a)));
        CHECK(to_bytes(mul(a, b)) == to_bytes(mul(b, a)));
        CHECK(to_bytes(mul(mul(a, b), c)) == to_bytes(mul(a, mul(b, c))));
    }
}

TEST_CASE("op traces depend on the operation, not the operands") {
    std::mt19937_64 rng(5);
    auto trace_of = [](auto&& fn) {
        OpTrace t;
        TraceScope scope(t);
        fn();
        return t;
    };
    FieldElement a = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
    FieldElement b = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
    FieldElement c = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));
    FieldElement d = from_bytes(std::span<const uint8_t, 32>(random_bytes(rng)));

    CHECK(trace_of([&] { (void)mul(a, b); }) == trace_of([&] { (void)mul(c, d); }));
    CHECK(trace_of([&] { (void)add(a, b); }) == trace_of([&] { (void)add(c, d); }));
    CHECK(trace_of([&] { (void)sub(a, b); }) == trace_of([&] { (void)sub(c, d); }));
    CHECK(trace_of([&] { (void)square(a); }) == trace_of([&] { (void)square(d); }));
    CHECK(trace_of([&] { (void)freeze(a); }) == trace_of([&] { (void)freeze(d); }));
    CHECK(trace_of([&] { (void)invert(a); }) == trace_of([&] { (void)invert(d); }));
    // and a composite expression
    auto ta = trace_of([&] { (void)mul(add(a, b), sub(square(c), d)); });
    auto tb = trace_of([&] { (void)mul(add(d, c), sub(square(b), a)); });
    CHECK(ta == tb);
    CHECK(ta.size() == 4);
}
