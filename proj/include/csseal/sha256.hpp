// SHA-256 and a counter-mode keystream built on it. The keystream is the
// deterministic expander behind sensing-matrix and shuffle derivation: block i
// is SHA256(context || i_be64), where the context is the caller's secret,
// label, and parameters. Both sides of a session derive identical bytes.
#ifndef CSSEAL_SHA256_HPP
#define CSSEAL_SHA256_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

#include "csseal/bytes.hpp"

namespace csseal::hash {

class Sha256 {
public:
    Sha256() { reset(); }

    void reset() {
        state_ = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                  0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
        total_ = 0;
        buffered_ = 0;
    }

    void update(std::span<const uint8_t> data) {
        total_ += data.size();
        size_t off = 0;
        if (buffered_ > 0) {
            size_t take = std::min<size_t>(64 - buffered_, data.size());
            std::memcpy(buf_.data() + buffered_, data.data(), take);
            buffered_ += take;
            off += take;
            if (buffered_ == 64) {
                compress(buf_.data());
                buffered_ = 0;
            }
        }
        while (off + 64 <= data.size()) {
            compress(data.data() + off);
            off += 64;
        }
        if (off < data.size()) {
            buffered_ = data.size() - off;
            std::memcpy(buf_.data(), data.data() + off, buffered_);
        }
    }

    void update(std::string_view s) {
        update(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }

    Bytes32 finish() {
        uint64_t bit_len = total_ * 8;
        uint8_t pad[72] = {0x80};
        size_t pad_len = (buffered_ < 56) ? (56 - buffered_) : (120 - buffered_);
        update(std::span<const uint8_t>(pad, pad_len));
        uint8_t len_be[8];
        store64_be(len_be, bit_len);
        // update() counts these bytes too, but state is final after this block
        update(std::span<const uint8_t>(len_be, 8));
        Bytes32 out{};
        for (int i = 0; i < 8; ++i) store32_be(out.data() + 4 * i, state_[i]);
        return out;
    }

private:
    static constexpr std::array<uint32_t, 64> k_ = {
        0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
        0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
        0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
        0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
        0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
        0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
        0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
        0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
        0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
        0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
        0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void compress(const uint8_t* block) {
        uint32_t w[64];
        for (int i = 0; i < 16; ++i) w[i] = load32_be(block + 4 * i);
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
        uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t t1 = h + s1 + ch + k_[i] + w[i];
            uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t t2 = s0 + maj;
            h = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        state_[0] += a; state_[1] += b; state_[2] += c; state_[3] += d;
        state_[4] += e; state_[5] += f; state_[6] += g; state_[7] += h;
    }

    std::array<uint32_t, 8> state_{};
    std::array<uint8_t, 64> buf_{};
    uint64_t total_ = 0;
    size_t buffered_ = 0;
};

inline Bytes32 sha256(std::span<const uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

inline Bytes32 sha256(std::string_view s) {
    Sha256 h;
    h.update(s);
    return h.finish();
}

// Deterministic byte expander: block i = SHA256(context || i_be64).
class Keystream {
public:
    Keystream(std::span<const uint8_t> secret, std::string_view label,
              std::initializer_list<uint64_t> params = {}) {
        context_.assign(secret.begin(), secret.end());
        context_.insert(context_.end(), label.begin(), label.end());
        for (uint64_t p : params) {
            uint8_t be[8];
            store64_be(be, p);
            context_.insert(context_.end(), be, be + 8);
        }
    }

    uint8_t next_byte() {
        if (pos_ == block_.size()) refill();
        return block_[pos_++];
    }

    void fill(std::span<uint8_t> out) {
        for (auto& b : out) b = next_byte();
    }

    uint32_t next_u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | next_byte();
        return v;
    }

    // Unbiased draw in [0, bound) by rejection on 32-bit words.
    uint32_t next_below(uint32_t bound) {
        const uint64_t span = uint64_t(UINT32_MAX) + 1;
        const uint32_t limit = static_cast<uint32_t>(span - span % bound);
        for (;;) {
            uint32_t v = next_u32();
            if (v < limit || limit == 0) return v % bound;
        }
    }

private:
    void refill() {
        Sha256 h;
        h.update(context_);
        uint8_t be[8];
        store64_be(be, counter_++);
        h.update(std::span<const uint8_t>(be, 8));
        block_ = h.finish();
        pos_ = 0;
    }

    Bytes context_;
    Bytes32 block_{};
    size_t pos_ = 32; // force refill on first use
    uint64_t counter_ = 0;
};

} // namespace csseal::hash

#endif
