// Key-derived sensing matrices, per-window transforms, and the mixed-signal
// encoder pipeline.
//
// Matrix entries are 4-bit level codes k in [-7, 7] standing for k/8. They
// are expanded from a counter-mode keystream: each entry consumes 8 bytes,
// whose sum S (an Irwin-Hall-shaped variate centered at 1020) is quantized
// by level = clamp(round(3*(S - 1020) / 209), -7, 7), giving an integer-only
// approximation of a zero-mean Gaussian over the level alphabet.
//
// The per-window transform has three parts, all derived from the shared
// secret: a column permutation, a row sign vector, and an additive mod-2^16
// mask applied to the 16-bit measurement words on the wire. Permutation and
// signs churn the effective matrix inside the level alphabet; the mask is
// what actually hides measurement energy (any alphabet-preserving reshuffle
// leaves ||y||^2 proportional to ||x||^2 on average, so shuffling alone
// cannot mask energy features). The receiver removes the mask exactly by
// modular subtraction.
//
// encode_window_hw() reproduces the measurement hardware bit for bit: the
// input sample is amplified at gains {4,5,6,7}, digitized by a 10-bit ADC
// model, and the per-level contribution is assembled by shifts and
// complementation; rows accumulate in saturating 16-bit registers.
#ifndef CSSEAL_CS_CODEC_HPP
#define CSSEAL_CS_CODEC_HPP

#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csseal/sha256.hpp"

namespace csseal::codec {

struct SensingMatrix {
    int rows = 0; // M
    int cols = 0; // N
    uint64_t key_id = 0; // epoch the matrix was derived for
    std::vector<int8_t> levels; // row-major, codes in [-7, 7]

    int8_t at(int r, int c) const { return levels[size_t(r) * cols + c]; }
    int8_t& at(int r, int c) { return levels[size_t(r) * cols + c]; }
    double value(int r, int c) const { return at(r, c) / 8.0; }
};

struct WindowTransform {
    uint64_t epoch = 0;
    uint64_t window = 0;
    std::vector<uint32_t> perm;    // column permutation, size N
    std::vector<int8_t> row_sign;  // +1 / -1 per row, size M
    std::vector<int16_t> mask;     // additive measurement mask, size M
};

struct Measurement {
    std::vector<int16_t> acr; // accumulator outputs, size M
    uint32_t saturation_count = 0;
};

inline void validate_dims(int m, int n) {
    if (m != 64 && m != 96 && m != 128)
        throw std::invalid_argument("M must be one of 64, 96, 128");
    if (n <= 0 || n % m != 0)
        throw std::invalid_argument("N must be an integer multiple of M");
    int cr = n / m;
    if (cr < 2 || cr > 16)
        throw std::invalid_argument("compression ratio must be in [2, 16]");
}

namespace detail {

inline int8_t level_from_chunk(const uint8_t* chunk) {
    int s = 0;
    for (int i = 0; i < 8; ++i) s += chunk[i];
    int q = 3 * (s - 1020);
    int mag = (std::abs(q) + 104) / 209; // round-half-away-from-zero for /209
    int lv = q >= 0 ? mag : -mag;
    return static_cast<int8_t>(std::max(-7, std::min(7, lv)));
}

} // namespace detail

// Deterministic expansion of the shared secret into an epoch matrix.
inline SensingMatrix derive_matrix(std::span<const uint8_t> shared_secret, uint64_t epoch,
                                   int m, int n) {
    validate_dims(m, n);
    SensingMatrix phi;
    phi.rows = m;
    phi.cols = n;
    phi.key_id = epoch;
    phi.levels.resize(size_t(m) * n);
    hash::Keystream ks(shared_secret, "PHI", {epoch});
    uint8_t chunk[8];
    for (auto& lv : phi.levels) {
        ks.fill(chunk);
        lv = detail::level_from_chunk(chunk);
    }
    return phi;
}

// Per-window transform: Fisher-Yates permutation, then M sign bits, then M
// 16-bit mask words, in that keystream order.
inline WindowTransform derive_window_transform(std::span<const uint8_t> shared_secret,
                                               uint64_t epoch, uint64_t window, int m, int n) {
    validate_dims(m, n);
    WindowTransform t;
    t.epoch = epoch;
    t.window = window;
    hash::Keystream ks(shared_secret, "SHF", {epoch, window});

    t.perm.resize(n);
    std::iota(t.perm.begin(), t.perm.end(), 0u);
    for (int i = n - 1; i >= 1; --i) {
        uint32_t j = ks.next_below(uint32_t(i) + 1);
        std::swap(t.perm[i], t.perm[j]);
    }

    t.row_sign.resize(m);
    uint8_t byte = 0;
    for (int j = 0; j < m; ++j) {
        if (j % 8 == 0) byte = ks.next_byte();
        t.row_sign[j] = (byte >> (j % 8)) & 1 ? int8_t(-1) : int8_t(1);
    }

    t.mask.resize(m);
    for (int j = 0; j < m; ++j) {
        uint16_t lo = ks.next_byte();
        uint16_t hi = ks.next_byte();
        t.mask[j] = static_cast<int16_t>(uint16_t(lo | (hi << 8)));
    }
    return t;
}

// Effective matrix: entry (j, i) = sign_j * phi(j, perm[i]).
inline SensingMatrix apply_transform(const SensingMatrix& phi, const WindowTransform& t) {
    if (int(t.perm.size()) != phi.cols || int(t.row_sign.size()) != phi.rows)
        throw std::invalid_argument("transform dimensions do not match matrix");
    SensingMatrix out = phi;
    for (int j = 0; j < phi.rows; ++j)
        for (int i = 0; i < phi.cols; ++i)
            out.at(j, i) = static_cast<int8_t>(t.row_sign[j] * phi.at(j, t.perm[i]));
    return out;
}

inline SensingMatrix apply_transform_inverse(const SensingMatrix& eff, const WindowTransform& t) {
    if (int(t.perm.size()) != eff.cols || int(t.row_sign.size()) != eff.rows)
        throw std::invalid_argument("transform dimensions do not match matrix");
    SensingMatrix out = eff;
    for (int j = 0; j < eff.rows; ++j)
        for (int i = 0; i < eff.cols; ++i)
            out.at(j, t.perm[i]) = static_cast<int8_t>(t.row_sign[j] * eff.at(j, i));
    return out;
}

// Wire masking: wrap-around 16-bit addition, exactly invertible.
inline void mask_measurement(std::span<int16_t> y, std::span<const int16_t> mask) {
    for (size_t j = 0; j < y.size(); ++j)
        y[j] = static_cast<int16_t>(uint16_t(uint16_t(y[j]) + uint16_t(mask[j])));
}

inline void unmask_measurement(std::span<int16_t> y, std::span<const int16_t> mask) {
    for (size_t j = 0; j < y.size(); ++j)
        y[j] = static_cast<int16_t>(uint16_t(uint16_t(y[j]) - uint16_t(mask[j])));
}

// 10-bit ADC after a programmable-gain stage: d = clamp(round(g*x*512)).
inline int32_t digitize(double x, int gain) {
    long d = std::lround(double(gain) * x * 512.0);
    if (d > 511) d = 511;
    if (d < -512) d = -512;
    return static_cast<int32_t>(d);
}

// Bit-exact encoder pipeline. Expects the matrix already transformed for
// this window; saturation is counted, never raised.
inline Measurement encode_window_hw(std::span<const double> x, const SensingMatrix& phi) {
    if (int(x.size()) != phi.cols)
        throw std::invalid_argument("window length does not match matrix columns");
    Measurement out;
    out.acr.assign(phi.rows, 0);
    std::vector<int32_t> acc(phi.rows, 0);

    for (int i = 0; i < phi.cols; ++i) {
        // one input period: four PGA gains sampled and digitized in sequence
        int32_t d4 = digitize(x[i], 4);
        int32_t d5 = digitize(x[i], 5);
        int32_t d6 = digitize(x[i], 6);
        int32_t d7 = digitize(x[i], 7);
        // contribution per |level|; x1 path is x4 shifted right twice
        const int32_t contrib[8] = {0,      d4 >> 2, d4 >> 1, d6 >> 1,
                                    d4,     d5,      d6,      d7};
        for (int j = 0; j < phi.rows; ++j) {
            int8_t k = phi.at(j, i);
            int32_t c = contrib[k < 0 ? -k : k];
            if (k < 0) c = -c; // digital complementation
            int32_t next = acc[j] + c;
            if (next > 32767) {
                next = 32767;
                ++out.saturation_count;
            } else if (next < -32768) {
                next = -32768;
                ++out.saturation_count;
            }
            acc[j] = next;
        }
    }
    for (int j = 0; j < phi.rows; ++j) out.acr[j] = static_cast<int16_t>(acc[j]);
    return out;
}

// Exact real-arithmetic reference of y = Phi x (entries k/8).
inline std::vector<double> encode_window_float(std::span<const double> x,
                                               const SensingMatrix& phi) {
    if (int(x.size()) != phi.cols)
        throw std::invalid_argument("window length does not match matrix columns");
    std::vector<double> y(phi.rows, 0.0);
    for (int j = 0; j < phi.rows; ++j) {
        double s = 0.0;
        const int8_t* row = phi.levels.data() + size_t(j) * phi.cols;
        for (int i = 0; i < phi.cols; ++i) s += row[i] * x[i];
        y[j] = s / 8.0;
    }
    return y;
}

// Debug/interop dump: "PHI M N epoch" then M lines of N signed level codes.
inline void dump_matrix(std::ostream& os, const SensingMatrix& phi) {
    os << "PHI " << phi.rows << ' ' << phi.cols << ' ' << phi.key_id << '\n';
    for (int j = 0; j < phi.rows; ++j) {
        for (int i = 0; i < phi.cols; ++i) {
            if (i) os << ' ';
            os << int(phi.at(j, i));
        }
        os << '\n';
    }
}

inline SensingMatrix parse_matrix(std::istream& is) {
    std::string tag;
    SensingMatrix phi;
    if (!(is >> tag) || tag != "PHI") throw std::runtime_error("bad matrix header");
    if (!(is >> phi.rows >> phi.cols >> phi.key_id)) throw std::runtime_error("bad matrix header");
    validate_dims(phi.rows, phi.cols);
    phi.levels.resize(size_t(phi.rows) * phi.cols);
    for (auto& lv : phi.levels) {
        int v;
        if (!(is >> v) || v < -7 || v > 7) throw std::runtime_error("bad matrix entry");
        lv = static_cast<int8_t>(v);
    }
    return phi;
}

} // namespace csseal::codec

#endif
