// Synthetic test signals and signal-file I/O.
//
// Three generator kinds: `sparse` builds windows with exactly K nonzero DCT
// coefficients; `eeg` synthesizes a 1/f-shaped spectrum with occasional
// oscillatory bursts, band-limited by construction to the DCT atoms below
// the 250 Hz-equivalent cutoff; `burst` is a low-level background with
// strong transient events in a labeled subset of windows.
//
// Files are CSV (one decimal sample per line, optional "# rate=<S/s>"
// header) or the binary cache: magic "CSS1", u32-le count, f32-le samples.
#ifndef CSSEAL_SIGNAL_HPP
#define CSSEAL_SIGNAL_HPP

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "csseal/reconstruct.hpp"

namespace csseal::sig {

struct SignalData {
    std::vector<double> samples;
    double rate = 500.0; // informational, S/s
};

enum class SignalKind { Sparse, Eeg, Burst };

struct GenConfig {
    SignalKind kind = SignalKind::Eeg;
    int n = 1024;       // window length
    int windows = 16;
    uint64_t seed = 1;
    int sparsity = 8;   // sparse kind: nonzero DCT coefficients per window
    double rate = 500.0;
    double rms = 0.1;   // stream RMS target, full-scale units
    double slope = 1.7; // eeg kind: power spectral decay exponent
};

struct LabeledSignal {
    SignalData data;
    std::vector<uint8_t> window_event; // 1 where the window carries a burst
};

inline SignalKind kind_from_name(const std::string& name) {
    if (name == "sparse") return SignalKind::Sparse;
    if (name == "eeg") return SignalKind::Eeg;
    if (name == "burst") return SignalKind::Burst;
    throw std::invalid_argument("unknown signal kind: " + name);
}

namespace detail {

inline void scale_to_rms(std::vector<double>& x, double target) {
    double ss = 0;
    for (double v : x) ss += v * v;
    double rms = std::sqrt(ss / double(x.size()));
    if (rms == 0) return;
    double g = target / rms;
    for (double& v : x) v *= g;
}

// 1/f window through the orthonormal DCT: coefficient k sits at frequency
// k * rate / (2N); amplitudes fall as f^(-slope/2) up to the 250 Hz cutoff.
inline std::vector<double> one_over_f_window(const recon::SparseBasis& psi, int n, double rate,
                                             double slope, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> coeffs(n, 0.0);
    for (int k = 1; k < n; ++k) {
        double f = k * rate / (2.0 * n);
        if (f > 250.0) break;
        coeffs[k] = g(rng) * std::pow(f, -slope / 2.0);
    }
    return psi.synthesize(coeffs);
}

inline void add_burst(std::vector<double>& x, double rate, double freq, double center,
                      double width, double amp) {
    for (size_t i = 0; i < x.size(); ++i) {
        double t = double(i) / rate;
        double env = std::exp(-0.5 * (t - center) * (t - center) / (width * width));
        x[i] += amp * env * std::sin(2.0 * M_PI * freq * t);
    }
}

} // namespace detail

inline LabeledSignal generate_labeled(const GenConfig& cfg) {
    if (cfg.n < 16 || cfg.windows < 1) throw std::invalid_argument("bad generator dimensions");
    std::mt19937_64 rng(cfg.seed);
    recon::SparseBasis psi(recon::BasisKind::Dct, cfg.n);
    LabeledSignal out;
    out.data.rate = cfg.rate;
    out.data.samples.reserve(size_t(cfg.n) * cfg.windows);
    out.window_event.assign(cfg.windows, 0);

    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int w = 0; w < cfg.windows; ++w) {
        std::vector<double> x;
        switch (cfg.kind) {
        case SignalKind::Sparse: {
            std::vector<double> coeffs(cfg.n, 0.0);
            int placed = 0;
            while (placed < cfg.sparsity) {
                int k = int(rng() % uint64_t(cfg.n));
                if (coeffs[k] != 0.0) continue;
                coeffs[k] = (rng() & 1 ? 1.0 : -1.0) * mag(rng);
                ++placed;
            }
            x = psi.synthesize(coeffs);
            break;
        }
        case SignalKind::Eeg: {
            x = detail::one_over_f_window(psi, cfg.n, cfg.rate, cfg.slope, rng);
            // sporadic oscillatory bursts riding on the 1/f floor
            if (unit(rng) < 0.3) {
                double dur = cfg.n / cfg.rate;
                detail::add_burst(x, cfg.rate, 4.0 + 26.0 * unit(rng), dur * unit(rng),
                                  dur * 0.08, 0.8 * mag(rng) * std::sqrt(cfg.n) * 0.05);
            }
            break;
        }
        case SignalKind::Burst: {
            x = detail::one_over_f_window(psi, cfg.n, cfg.rate, 1.0, rng);
            detail::scale_to_rms(x, 1.0); // unit background
            if (unit(rng) < 0.35) {
                out.window_event[w] = 1;
                double dur = cfg.n / cfg.rate;
                detail::add_burst(x, cfg.rate, 3.0 + 12.0 * unit(rng),
                                  dur * (0.2 + 0.6 * unit(rng)), dur * 0.15,
                                  (5.0 + 4.0 * unit(rng)));
            }
            break;
        }
        }
        out.data.samples.insert(out.data.samples.end(), x.begin(), x.end());
    }
    detail::scale_to_rms(out.data.samples, cfg.rms); // one global factor
    return out;
}

inline SignalData generate(const GenConfig& cfg) { return generate_labeled(cfg).data; }

inline int window_count(const SignalData& s, int n) { return int(s.samples.size() / size_t(n)); }

inline std::span<const double> window(const SignalData& s, int n, int idx) {
    return std::span<const double>(s.samples.data() + size_t(idx) * n, size_t(n));
}

inline void write_csv(const std::string& path, const SignalData& s) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "# rate=%.17g\n", s.rate);
    os << buf;
    for (double v : s.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline void write_cache(const std::string& path, const SignalData& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write("CSS1", 4);
    uint8_t cnt[4];
    store32_le(cnt, uint32_t(s.samples.size()));
    os.write(reinterpret_cast<const char*>(cnt), 4);
    for (double v : s.samples) {
        float f = float(v);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        uint8_t le[4];
        store32_le(le, bits);
        os.write(reinterpret_cast<const char*>(le), 4);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline SignalData read_signal(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4] = {0, 0, 0, 0};
    is.read(magic, 4);
    SignalData out;
    if (is.gcount() == 4 && std::memcmp(magic, "CSS1", 4) == 0) {
        uint8_t cnt[4];
        is.read(reinterpret_cast<char*>(cnt), 4);
        if (is.gcount() != 4) throw std::runtime_error("truncated cache: " + path);
        uint32_t n = load32_le(cnt);
        out.samples.resize(n);
        for (uint32_t i = 0; i < n; ++i) {
            uint8_t le[4];
            is.read(reinterpret_cast<char*>(le), 4);
            if (is.gcount() != 4) throw std::runtime_error("truncated cache: " + path);
            uint32_t bits = load32_le(le);
            float f;
            std::memcpy(&f, &bits, 4);
            out.samples[i] = f;
        }
        return out;
    }
    // CSV path
    is.clear();
    is.seekg(0);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("rate=");
            if (pos != std::string::npos) out.rate = std::strtod(line.c_str() + pos + 5, nullptr);
            continue;
        }
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str()) throw std::runtime_error("bad sample line in " + path);
        if (!std::isfinite(v)) throw std::runtime_error("non-finite sample in " + path);
        out.samples.push_back(v);
    }
    return out;
}

} // namespace csseal::sig

#endif
