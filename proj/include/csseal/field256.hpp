// Arithmetic over GF(p), p = 2^255 - 19, on eight 32-bit limbs.
//
// Values are kept in a lazy representation below 2^256; only freeze() maps to
// the canonical range [0, p). Every operation runs a fixed limb schedule with
// no data-dependent branches: conditional carries and folds are applied
// through all-ones/all-zero masks. Multiplication recurses through three
// Karatsuba levels (256 -> 128 -> 64 -> 32 bits); the base case is the
// explicit 32x32 -> 64 widening product. Squaring walks the same recursion
// with the duplicate cross products elided.
#ifndef CSSEAL_FIELD256_HPP
#define CSSEAL_FIELD256_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <span>

#include "csseal/bytes.hpp"
#include "csseal/optrace.hpp"

namespace csseal::field256 {

struct FieldElement {
    std::array<uint32_t, 8> limbs{};

    bool operator==(const FieldElement&) const = default; // representation equality
};

inline FieldElement fe_zero() { return FieldElement{}; }

inline FieldElement fe_one() {
    FieldElement r{};
    r.limbs[0] = 1;
    return r;
}

inline FieldElement fe_from_u32(uint32_t v) {
    FieldElement r{};
    r.limbs[0] = v;
    return r;
}

// p = 2^255 - 19, little-endian limbs.
inline constexpr std::array<uint32_t, 8> kPrime = {
    0xffffffedu, 0xffffffffu, 0xffffffffu, 0xffffffffu,
    0xffffffffu, 0xffffffffu, 0xffffffffu, 0x7fffffffu};

namespace detail {

// dst[i] = a[i] + b[i] with carry chain; returns the final carry bit.
template <int N>
inline uint32_t add_limbs(uint32_t* dst, const uint32_t* a, const uint32_t* b) {
    uint64_t carry = 0;
    for (int i = 0; i < N; ++i) {
        uint64_t t = uint64_t(a[i]) + b[i] + carry;
        dst[i] = static_cast<uint32_t>(t);
        carry = t >> 32;
    }
    return static_cast<uint32_t>(carry);
}

// dst[i..] += src (masked); propagates the carry through `len` limbs of dst.
inline void add_masked_at(uint32_t* dst, int dst_len, const uint32_t* src, int src_len,
                          uint32_t mask) {
    uint64_t carry = 0;
    for (int i = 0; i < src_len; ++i) {
        uint64_t t = uint64_t(dst[i]) + (src[i] & mask) + carry;
        dst[i] = static_cast<uint32_t>(t);
        carry = t >> 32;
    }
    for (int i = src_len; i < dst_len; ++i) {
        uint64_t t = uint64_t(dst[i]) + carry;
        dst[i] = static_cast<uint32_t>(t);
        carry = t >> 32;
    }
}

// dst[0..len) -= src[0..src_len) with borrow propagation across all of dst.
inline void sub_at(uint32_t* dst, int dst_len, const uint32_t* src, int src_len) {
    uint64_t borrow = 0;
    for (int i = 0; i < src_len; ++i) {
        uint64_t t = uint64_t(dst[i]) - src[i] - borrow;
        dst[i] = static_cast<uint32_t>(t);
        borrow = (t >> 32) & 1;
    }
    for (int i = src_len; i < dst_len; ++i) {
        uint64_t t = uint64_t(dst[i]) - borrow;
        dst[i] = static_cast<uint32_t>(t);
        borrow = (t >> 32) & 1;
    }
}

// Karatsuba product, fixed schedule. out has 2N limbs.
template <int N>
inline void kmul(uint32_t* out, const uint32_t* a, const uint32_t* b) {
    if constexpr (N == 1) {
        uint64_t p = uint64_t(a[0]) * uint64_t(b[0]); // explicit 32x32 -> 64
        out[0] = static_cast<uint32_t>(p);
        out[1] = static_cast<uint32_t>(p >> 32);
    } else {
        constexpr int H = N / 2;
        uint32_t z0[N], z2[N], sa[H], sb[H], m[N + 1];
        kmul<H>(z0, a, b);
        kmul<H>(z2, a + H, b + H);
        uint32_t ca = add_limbs<H>(sa, a, a + H);
        uint32_t cb = add_limbs<H>(sb, b, b + H);
        kmul<H>(m, sa, sb);
        m[N] = 0;
        // (sa + ca*2^(32H)) * (sb + cb*2^(32H)) expansion, branch-free.
        add_masked_at(m + H, N + 1 - H, sb, H, 0u - ca);
        add_masked_at(m + H, N + 1 - H, sa, H, 0u - cb);
        m[N] += ca & cb;
        sub_at(m, N + 1, z0, N);
        sub_at(m, N + 1, z2, N);
        std::memcpy(out, z0, sizeof z0);
        std::memcpy(out + N, z2, sizeof z2);
        add_masked_at(out + H, 2 * N - H, m, N + 1, 0xffffffffu);
    }
}

// Karatsuba squaring: same recursion, three half-size squarings per level.
template <int N>
inline void ksqr(uint32_t* out, const uint32_t* a) {
    if constexpr (N == 1) {
        uint64_t p = uint64_t(a[0]) * uint64_t(a[0]);
        out[0] = static_cast<uint32_t>(p);
        out[1] = static_cast<uint32_t>(p >> 32);
    } else {
        constexpr int H = N / 2;
        uint32_t z0[N], z2[N], sa[H], m[N + 1];
        ksqr<H>(z0, a);
        ksqr<H>(z2, a + H);
        uint32_t ca = add_limbs<H>(sa, a, a + H);
        ksqr<H>(m, sa);
        m[N] = 0;
        // (sa + ca*2^(32H))^2 = sa^2 + 2*ca*sa*2^(32H) + ca*2^(64H)
        add_masked_at(m + H, N + 1 - H, sa, H, 0u - ca);
        add_masked_at(m + H, N + 1 - H, sa, H, 0u - ca);
        m[N] += ca;
        sub_at(m, N + 1, z0, N);
        sub_at(m, N + 1, z2, N);
        std::memcpy(out, z0, sizeof z0);
        std::memcpy(out + N, z2, sizeof z2);
        add_masked_at(out + H, 2 * N - H, m, N + 1, 0xffffffffu);
    }
}

// Fold a 512-bit product back below 2^256 using 2^256 = 38 (mod p).
inline FieldElement reduce512(const uint32_t* t) {
    uint32_t r[9];
    uint64_t carry = 0;
    for (int i = 0; i < 8; ++i) {
        uint64_t v = uint64_t(t[i]) + uint64_t(38) * t[8 + i] + carry;
        r[i] = static_cast<uint32_t>(v);
        carry = v >> 32;
    }
    r[8] = static_cast<uint32_t>(carry); // <= 38

    // second fold: r8 * 38 back into limb 0
    uint64_t c = uint64_t(r[0]) + uint64_t(r[8]) * 38;
    r[0] = static_cast<uint32_t>(c);
    c >>= 32;
    for (int i = 1; i < 8; ++i) {
        c += r[i];
        r[i] = static_cast<uint32_t>(c);
        c >>= 32;
    }
    // third fold: at most one wrap remains
    uint32_t mask = 0u - static_cast<uint32_t>(c);
    c = uint64_t(r[0]) + (38u & mask);
    r[0] = static_cast<uint32_t>(c);
    c >>= 32;
    for (int i = 1; i < 8; ++i) {
        c += r[i];
        r[i] = static_cast<uint32_t>(c);
        c >>= 32;
    }
    FieldElement out;
    std::memcpy(out.limbs.data(), r, 32);
    return out;
}

// One branch-free conditional subtraction of p.
inline void cond_sub_p(std::array<uint32_t, 8>& v) {
    uint32_t t[8];
    uint64_t borrow = 0;
    for (int i = 0; i < 8; ++i) {
        uint64_t d = uint64_t(v[i]) - kPrime[i] - borrow;
        t[i] = static_cast<uint32_t>(d);
        borrow = (d >> 32) & 1;
    }
    uint32_t keep = 0u - static_cast<uint32_t>(borrow); // all-ones if v < p
    for (int i = 0; i < 8; ++i) v[i] = (v[i] & keep) | (t[i] & ~keep);
}

} // namespace detail

inline FieldElement add(const FieldElement& a, const FieldElement& b) {
    trace_detail::record(FieldOp::Add);
    uint32_t r[8];
    uint32_t carry = detail::add_limbs<8>(r, a.limbs.data(), b.limbs.data());
    // fold the 2^256 wrap twice, both unconditionally
    for (int pass = 0; pass < 2; ++pass) {
        uint32_t mask = 0u - carry;
        uint64_t c = uint64_t(r[0]) + (38u & mask);
        r[0] = static_cast<uint32_t>(c);
        c >>= 32;
        for (int i = 1; i < 8; ++i) {
            c += r[i];
            r[i] = static_cast<uint32_t>(c);
            c >>= 32;
        }
        carry = static_cast<uint32_t>(c);
    }
    FieldElement out;
    std::memcpy(out.limbs.data(), r, 32);
    return out;
}

inline FieldElement sub(const FieldElement& a, const FieldElement& b) {
    trace_detail::record(FieldOp::Sub);
    uint32_t r[8];
    uint64_t borrow = 0;
    for (int i = 0; i < 8; ++i) {
        uint64_t d = uint64_t(a.limbs[i]) - b.limbs[i] - borrow;
        r[i] = static_cast<uint32_t>(d);
        borrow = (d >> 32) & 1;
    }
    // a - b = r - borrow*2^256 = r - borrow*38 (mod p); two masked folds
    for (int pass = 0; pass < 2; ++pass) {
        uint32_t mask = 0u - static_cast<uint32_t>(borrow);
        uint64_t bw = 0;
        uint64_t d = uint64_t(r[0]) - (38u & mask);
        r[0] = static_cast<uint32_t>(d);
        bw = (d >> 32) & 1;
        for (int i = 1; i < 8; ++i) {
            d = uint64_t(r[i]) - bw;
            r[i] = static_cast<uint32_t>(d);
            bw = (d >> 32) & 1;
        }
        borrow = bw;
    }
    FieldElement out;
    std::memcpy(out.limbs.data(), r, 32);
    return out;
}

inline FieldElement mul(const FieldElement& a, const FieldElement& b) {
    trace_detail::record(FieldOp::Mul);
    uint32_t t[16];
    detail::kmul<8>(t, a.limbs.data(), b.limbs.data());
    return detail::reduce512(t);
}

inline FieldElement square(const FieldElement& a) {
    trace_detail::record(FieldOp::Sqr);
    uint32_t t[16];
    detail::ksqr<8>(t, a.limbs.data());
    return detail::reduce512(t);
}

inline FieldElement freeze(const FieldElement& a) {
    trace_detail::record(FieldOp::Freeze);
    FieldElement out = a;
    detail::cond_sub_p(out.limbs); // value < 2^256 < 3p: two passes reach [0, p)
    detail::cond_sub_p(out.limbs);
    return out;
}

// a^(p-2) by a fixed square-and-multiply chain (254 squarings, 11 multiplies).
// invert(0) = 0 by construction; callers treat that as a protocol-level failure.
inline FieldElement invert(const FieldElement& z) {
    auto sqr_n = [](FieldElement v, int n) {
        for (int i = 0; i < n; ++i) v = square(v);
        return v;
    };
    FieldElement z2 = square(z);                       // 2
    FieldElement z9 = mul(sqr_n(z2, 2), z);            // 9
    FieldElement z11 = mul(z9, z2);                    // 11
    FieldElement z_5_0 = mul(square(z11), z9);         // 2^5 - 2^0
    FieldElement z_10_0 = mul(sqr_n(z_5_0, 5), z_5_0); // 2^10 - 2^0
    FieldElement z_20_0 = mul(sqr_n(z_10_0, 10), z_10_0);
    FieldElement z_40_0 = mul(sqr_n(z_20_0, 20), z_20_0);
    FieldElement z_50_0 = mul(sqr_n(z_40_0, 10), z_10_0);
    FieldElement z_100_0 = mul(sqr_n(z_50_0, 50), z_50_0);
    FieldElement z_200_0 = mul(sqr_n(z_100_0, 100), z_100_0);
    FieldElement z_250_0 = mul(sqr_n(z_200_0, 50), z_50_0);
    return mul(sqr_n(z_250_0, 5), z11); // 2^255 - 21 = p - 2
}

// 32-byte little-endian decode; the value may be >= p (lazy form is fine).
inline FieldElement from_bytes(std::span<const uint8_t, 32> in) {
    FieldElement r;
    for (int i = 0; i < 8; ++i) r.limbs[i] = load32_le(in.data() + 4 * i);
    return r;
}

// Canonical 32-byte little-endian encoding of the frozen value.
inline Bytes32 to_bytes(const FieldElement& a) {
    FieldElement f = freeze(a);
    Bytes32 out{};
    for (int i = 0; i < 8; ++i) store32_le(out.data() + 4 * i, f.limbs[i]);
    return out;
}

inline bool equal_mod_p(const FieldElement& a, const FieldElement& b) {
    return freeze(a).limbs == freeze(b).limbs;
}

} // namespace csseal::field256

#endif
