// x-coordinate scalar multiplication on Curve25519 (y^2 = x^3 + 486662x^2 + x
// over GF(2^255-19)) via the Montgomery ladder, plus key generation and
// Diffie-Hellman.
//
// Two ladder drivers are provided. scalar_mult_original() walks the classic
// conditional-swap loop and is deliberately not trace-constant: it is kept as
// a differential-testing oracle and as the positive control for the timing
// detector. scalar_mult_ct() replaces the swaps with the Ladderstep0/1 pair,
// whose two routings perform identical operation sequences, and randomizes
// the initial projective coordinates on every execution.
#ifndef CSSEAL_X25519_HPP
#define CSSEAL_X25519_HPP

#include <cstdint>
#include <random>
#include <utility>

#include "csseal/field256.hpp"

namespace csseal::x25519 {

using field256::FieldElement;

struct Scalar {
    Bytes32 bytes{};

    // bit t of the little-endian scalar
    int bit(int t) const { return (bytes[t >> 3] >> (t & 7)) & 1; }
};

struct CurvePoint {
    FieldElement X;
    FieldElement Z; // affine x = X/Z; Z == 0 encodes the point at infinity
};

struct KeyPair {
    Scalar private_key; // clamped
    Bytes32 public_key; // x-coordinate of private * G, G = (x=9, ...)
};

// Clear bits 0-2 and 255, set bit 254.
inline Scalar clamp(const Bytes32& seed) {
    Scalar s{seed};
    s.bytes[0] &= 0xf8;
    s.bytes[31] &= 0x7f;
    s.bytes[31] |= 0x40;
    return s;
}

// Public keys encode only 255 bits; the top bit is masked on decode.
inline FieldElement decode_public(const Bytes32& in) {
    Bytes32 copy = in;
    copy[31] &= 0x7f;
    return field256::from_bytes(std::span<const uint8_t, 32>(copy));
}

namespace detail {

inline constexpr uint32_t kA24 = 121665; // (486662 - 2) / 4

// One combined differential addition and doubling:
// returns (2P, P+Q) given the affine x of Q-P.
inline std::pair<CurvePoint, CurvePoint> ladderstep(const CurvePoint& p, const CurvePoint& q,
                                                    const FieldElement& x_base) {
    using namespace field256;
    FieldElement a = add(p.X, p.Z);
    FieldElement b = sub(p.X, p.Z);
    FieldElement aa = square(a);
    FieldElement bb = square(b);
    FieldElement e = sub(aa, bb);
    FieldElement c = add(q.X, q.Z);
    FieldElement d = sub(q.X, q.Z);
    FieldElement da = mul(d, a);
    FieldElement cb = mul(c, b);
    FieldElement t0 = add(da, cb);
    FieldElement t1 = sub(da, cb);
    CurvePoint sum{square(t0), mul(x_base, square(t1))};
    CurvePoint dbl{mul(aa, bb), mul(e, add(aa, mul(fe_from_u32(kA24), e)))};
    return {dbl, sum};
}

inline FieldElement random_fe() {
    std::random_device rd;
    Bytes32 raw{};
    for (int i = 0; i < 8; ++i) store32_le(raw.data() + 4 * i, rd());
    return field256::from_bytes(std::span<const uint8_t, 32>(raw));
}

} // namespace detail

// Ladderstep0/1: the branch-target pair of the hardened loop. Both run the
// identical operation sequence; they differ only in how the working points
// are routed through it.
inline std::pair<CurvePoint, CurvePoint> ladderstep0(const CurvePoint& p, const CurvePoint& q,
                                                     const FieldElement& x_base) {
    return detail::ladderstep(p, q, x_base);
}

inline std::pair<CurvePoint, CurvePoint> ladderstep1(const CurvePoint& p, const CurvePoint& q,
                                                     const FieldElement& x_base) {
    auto [dbl, sum] = detail::ladderstep(q, p, x_base);
    return {sum, dbl};
}

// Classic ladder with conditional swaps; swap work is recorded in the trace
// only when a scalar bit is set, so the trace leaks the bit pattern.
inline FieldElement scalar_mult_original(const Scalar& s, const FieldElement& x_base) {
    using namespace field256;
    CurvePoint p{fe_one(), fe_zero()};
    CurvePoint q{x_base, fe_one()};
    for (int t = 254; t >= 0; --t) {
        int b = s.bit(t);
        if (b) {
            trace_detail::record(FieldOp::Swap);
            std::swap(p, q);
        }
        auto [dbl, sum] = detail::ladderstep(p, q, x_base);
        p = dbl;
        q = sum;
        if (b) {
            trace_detail::record(FieldOp::Swap);
            std::swap(p, q);
        }
    }
    return mul(p.X, invert(p.Z));
}

// Hardened ladder: per-bit dispatch to Ladderstep0/Ladderstep1 with identical
// operation schedules, plus random projection of the initial coordinates.
// `projection` overrides the randomizer (deterministic test mode).
inline FieldElement scalar_mult_ct(const Scalar& s, const FieldElement& x_base,
                                   const FieldElement* projection = nullptr) {
    using namespace field256;
    FieldElement lambda = freeze(projection ? *projection : detail::random_fe());
    if (lambda == fe_zero()) lambda = fe_one();
    CurvePoint p{fe_one(), fe_zero()};
    CurvePoint q{mul(x_base, lambda), lambda};
    for (int t = 254; t >= 0; --t) {
        if (s.bit(t) == 0) {
            auto [np, nq] = ladderstep0(p, q, x_base);
            p = np;
            q = nq;
        } else {
            auto [np, nq] = ladderstep1(p, q, x_base);
            p = np;
            q = nq;
        }
    }
    return mul(p.X, invert(p.Z));
}

// RFC-style X25519 function: clamp the scalar, multiply, serialize.
inline Bytes32 x25519_scalarmult(const Bytes32& scalar_bytes, const Bytes32& u_bytes,
                      const FieldElement* projection = nullptr) {
    Scalar s = clamp(scalar_bytes);
    return field256::to_bytes(scalar_mult_ct(s, decode_public(u_bytes), projection));
}

inline KeyPair keypair_from_seed(const Bytes32& seed) {
    KeyPair kp;
    kp.private_key = clamp(seed);
    kp.public_key =
        field256::to_bytes(scalar_mult_ct(kp.private_key, field256::fe_from_u32(9)));
    return kp;
}

inline KeyPair keypair_random() {
    std::random_device rd;
    Bytes32 seed{};
    for (int i = 0; i < 8; ++i) store32_le(seed.data() + 4 * i, rd());
    return keypair_from_seed(seed);
}

// All-zero output signals a degenerate peer point; callers decide what to do
// (the protocol layer aborts the handshake). No branch here.
inline Bytes32 shared_secret(const KeyPair& mine, const Bytes32& theirs_public) {
    return field256::to_bytes(scalar_mult_ct(mine.private_key, decode_public(theirs_public)));
}

} // namespace csseal::x25519

#endif
