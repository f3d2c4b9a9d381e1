// Session protocol: length-prefixed CRC-protected frames, pluggable insecure
// transports (in-memory queue pair and TCP loopback), an eavesdropper tap,
// and the Alice/Bob state machine (key exchange, config push, per-window
// streaming with synchronized matrix shuffle and epoch update).
//
// Wire format, all header fields big-endian:
//   magic 0xC5A1 (2) | version 0x01 (1) | type (1) | epoch (2) | seq (4) |
//   payload_len (2) | payload | crc16 (2, CRC-16/CCITT-FALSE over everything
//   before it)
// DATA payloads are M little-endian signed 16-bit accumulator words.
//
// Handshake recovery: handshake frames carry an attempt number in `seq`.
// A corrupted frame makes the receiver bump the attempt and emit a HELLO
// trigger; stale-attempt frames are ignored, so both sides re-converge on
// the highest attempt without timeouts. DATA frames are fire-and-forget:
// every frame is self-describing through its (epoch, seq) pair, and the
// receiver re-derives the matrix and transform for exactly that pair.
#ifndef CSSEAL_PROTOCOL_HPP
#define CSSEAL_PROTOCOL_HPP

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "csseal/cs_codec.hpp"
#include "csseal/reconstruct.hpp"
#include "csseal/x25519.hpp"

namespace csseal::proto {

// ---------------------------------------------------------------- framing

inline constexpr uint16_t kMagic = 0xC5A1;
inline constexpr uint8_t kVersion = 0x01;
inline constexpr size_t kHeaderSize = 12;
inline constexpr size_t kMaxPayload = 4096;

enum class FrameType : uint8_t { Hello = 1, Pubkey = 2, Config = 3, Data = 4, Close = 5 };

struct Frame {
    FrameType type = FrameType::Hello;
    uint16_t epoch = 0;
    uint32_t seq = 0;
    Bytes payload;
};

enum class DecodeStatus : uint8_t {
    Ok = 0,
    Truncated,
    BadMagic,
    BadVersion,
    BadType,
    BadLength,
    BadCrc,
};

// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xor-out.
inline uint16_t crc16(std::span<const uint8_t> data) {
    static const auto table = [] {
        std::array<uint16_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint16_t crc = uint16_t(i << 8);
            for (int b = 0; b < 8; ++b)
                crc = crc & 0x8000 ? uint16_t((crc << 1) ^ 0x1021) : uint16_t(crc << 1);
            t[i] = crc;
        }
        return t;
    }();
    uint16_t crc = 0xffff;
    for (uint8_t byte : data) crc = uint16_t((crc << 8) ^ table[uint8_t(crc >> 8) ^ byte]);
    return crc;
}

inline Bytes frame_encode(const Frame& f) {
    if (f.payload.size() > kMaxPayload) throw std::invalid_argument("payload too large");
    Bytes out(kHeaderSize + f.payload.size() + 2);
    store16_be(out.data(), kMagic);
    out[2] = kVersion;
    out[3] = static_cast<uint8_t>(f.type);
    store16_be(out.data() + 4, f.epoch);
    store32_be(out.data() + 6, f.seq);
    store16_be(out.data() + 10, uint16_t(f.payload.size()));
    std::copy(f.payload.begin(), f.payload.end(), out.begin() + kHeaderSize);
    uint16_t crc = crc16(std::span<const uint8_t>(out.data(), out.size() - 2));
    store16_be(out.data() + out.size() - 2, crc);
    return out;
}

inline DecodeStatus frame_decode(std::span<const uint8_t> in, Frame& out) {
    if (in.size() < kHeaderSize + 2) return DecodeStatus::Truncated;
    if (load16_be(in.data()) != kMagic) return DecodeStatus::BadMagic;
    if (in[2] != kVersion) return DecodeStatus::BadVersion;
    uint8_t ty = in[3];
    if (ty < 1 || ty > 5) return DecodeStatus::BadType;
    uint16_t len = load16_be(in.data() + 10);
    if (len > kMaxPayload) return DecodeStatus::BadLength;
    if (in.size() != kHeaderSize + size_t(len) + 2) return DecodeStatus::BadLength;
    uint16_t want = load16_be(in.data() + in.size() - 2);
    if (crc16(in.first(in.size() - 2)) != want) return DecodeStatus::BadCrc;
    out.type = static_cast<FrameType>(ty);
    out.epoch = load16_be(in.data() + 4);
    out.seq = load32_be(in.data() + 6);
    out.payload.assign(in.begin() + kHeaderSize, in.end() - 2);
    return DecodeStatus::Ok;
}

// ------------------------------------------------------------- transports

// Append-only log of everything that crossed the channel, in send order.
class EveTap {
public:
    void record(std::span<const uint8_t> frame) {
        std::lock_guard lock(mu_);
        log_.insert(log_.end(), frame.begin(), frame.end());
        ++frames_;
    }
    Bytes snapshot() const {
        std::lock_guard lock(mu_);
        return log_;
    }
    size_t frame_count() const {
        std::lock_guard lock(mu_);
        return frames_;
    }

private:
    mutable std::mutex mu_;
    Bytes log_;
    size_t frames_ = 0;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(std::span<const uint8_t> frame) = 0;
    virtual std::optional<Bytes> recv() = 0; // blocking; nullopt = closed
    virtual void close() {}
};

namespace detail {

struct MemoryChannel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> queue;
    bool closed = false;
};

} // namespace detail

// One endpoint of an in-memory duplex link. A send filter models channel
// faults: it may mutate the frame or return false to drop it entirely.
class MemoryTransport : public Transport {
public:
    using SendFilter = std::function<bool(Bytes&)>;

    MemoryTransport(std::shared_ptr<detail::MemoryChannel> out,
                    std::shared_ptr<detail::MemoryChannel> in, EveTap* tap)
        : out_(std::move(out)), in_(std::move(in)), tap_(tap) {}

    ~MemoryTransport() override { close(); }

    void send(std::span<const uint8_t> frame) override {
        Bytes bytes(frame.begin(), frame.end());
        if (filter_ && !filter_(bytes)) return; // dropped on the air
        if (tap_) tap_->record(bytes);
        {
            std::lock_guard lock(out_->mu);
            if (out_->closed) throw std::runtime_error("send on closed transport");
            out_->queue.push_back(std::move(bytes));
        }
        out_->cv.notify_one();
    }

    std::optional<Bytes> recv() override {
        std::unique_lock lock(in_->mu);
        in_->cv.wait(lock, [&] { return !in_->queue.empty() || in_->closed; });
        if (in_->queue.empty()) return std::nullopt;
        Bytes b = std::move(in_->queue.front());
        in_->queue.pop_front();
        return b;
    }

    void close() override {
        for (auto& ch : {out_, in_}) {
            {
                std::lock_guard lock(ch->mu);
                ch->closed = true;
            }
            ch->cv.notify_all();
        }
    }

    void set_send_filter(SendFilter f) { filter_ = std::move(f); }

private:
    std::shared_ptr<detail::MemoryChannel> out_, in_;
    EveTap* tap_;
    SendFilter filter_;
};

inline std::pair<std::unique_ptr<MemoryTransport>, std::unique_ptr<MemoryTransport>>
make_memory_pair(EveTap* tap = nullptr) {
    auto ab = std::make_shared<detail::MemoryChannel>();
    auto ba = std::make_shared<detail::MemoryChannel>();
    return {std::make_unique<MemoryTransport>(ab, ba, tap),
            std::make_unique<MemoryTransport>(ba, ab, tap)};
}

// Raw frames over a TCP stream, no extra envelope.
class TcpTransport : public Transport {
public:
    explicit TcpTransport(int fd, EveTap* tap = nullptr) : fd_(fd), tap_(tap) {}
    ~TcpTransport() override { close(); }

    void send(std::span<const uint8_t> frame) override {
        if (tap_) tap_->record(frame);
        size_t off = 0;
        while (off < frame.size()) {
            ssize_t n = ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
            if (n <= 0) throw std::runtime_error("socket send failed");
            off += size_t(n);
        }
    }

    std::optional<Bytes> recv() override {
        Bytes header(kHeaderSize);
        if (!read_exact(header.data(), kHeaderSize)) return std::nullopt;
        uint16_t len = load16_be(header.data() + 10);
        if (load16_be(header.data()) != kMagic || len > kMaxPayload)
            throw std::runtime_error("stream desynchronized");
        Bytes frame(kHeaderSize + size_t(len) + 2);
        std::copy(header.begin(), header.end(), frame.begin());
        if (!read_exact(frame.data() + kHeaderSize, size_t(len) + 2)) return std::nullopt;
        return frame;
    }

    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    bool read_exact(uint8_t* dst, size_t n) {
        size_t off = 0;
        while (off < n) {
            ssize_t r = ::read(fd_, dst + off, n - off);
            if (r == 0) return false;
            if (r < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            off += size_t(r);
        }
        return true;
    }

    int fd_;
    EveTap* tap_;
};

class TcpListener {
public:
    explicit TcpListener(uint16_t port = 0) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw std::runtime_error("socket() failed");
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        addr.sin_port = htons(port);
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            throw std::runtime_error("bind() failed");
        if (::listen(fd_, 1) != 0) throw std::runtime_error("listen() failed");
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }

    uint16_t port() const { return port_; }

    std::unique_ptr<TcpTransport> accept(EveTap* tap = nullptr) {
        int cfd = ::accept(fd_, nullptr, nullptr);
        if (cfd < 0) throw std::runtime_error("accept() failed");
        return std::make_unique<TcpTransport>(cfd, tap);
    }

private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

inline std::unique_ptr<TcpTransport> tcp_connect(const std::string& host, uint16_t port,
                                                 EveTap* tap = nullptr, int retries = 50) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::runtime_error("bad address: " + host);
    for (int attempt = 0;; ++attempt) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw std::runtime_error("socket() failed");
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0)
            return std::make_unique<TcpTransport>(fd, tap);
        ::close(fd);
        if (attempt >= retries) throw std::runtime_error("connect() failed");
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

// ---------------------------------------------------------------- session

struct SessionConfig {
    uint16_t m = 128;
    uint16_t cr = 8;
    uint32_t epoch_len = 256; // windows per key epoch
    uint32_t sample_rate = 500;

    int n() const { return int(m) * cr; }
    void validate() const {
        codec::validate_dims(m, n());
        if (epoch_len < 1) throw std::invalid_argument("epoch length must be >= 1");
    }
};

struct SessionOptions {
    recon::SolverConfig solver;
    recon::BasisKind basis = recon::BasisKind::Dct;
    int handshake_retries = 6;
    uint8_t suite_id = 0x01; // curve25519 + this codec
};

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Phase { Init, PubkeySent, Established, Streaming, Closed };
enum class Role { Alice, Bob };

struct WindowResult {
    uint16_t epoch = 0;
    uint32_t seq = 0;
    std::vector<int16_t> y_raw; // unmasked accumulator words
    recon::ReconstructionResult recon;
};

class Session {
public:
    Session(Role role, x25519::KeyPair kp, SessionConfig cfg = {}, SessionOptions opt = {})
        : role_(role), keypair_(std::move(kp)), config_(cfg), options_(opt) {
        config_.validate();
    }

    Role role() const { return role_; }
    Phase phase() const { return phase_; }
    const SessionConfig& config() const { return config_; }
    const Bytes32& shared_secret() const { return secret_; }
    uint32_t window_seq() const { return window_seq_; }
    uint64_t saturation_total() const { return saturation_total_; }

    // Fig. 2 steps 1-5: hello, public keys, shared secret, config, epoch-0 key.
    void handshake(Transport& t) {
        if (phase_ != Phase::Init) throw ProtocolError("handshake in wrong phase");
        uint32_t attempt = 0;
        std::optional<Frame> pending;
        for (int budget = options_.handshake_retries; budget >= 0; --budget) {
            HsOutcome out =
                role_ == Role::Alice ? alice_pass(t, attempt) : bob_pass(t, attempt, pending);
            if (out.done) {
                phase_ = Phase::Established;
                secret_ = out.secret;
                matrices_.clear();
                current_epoch_ = 0;
                (void)matrix_for_epoch(0); // step 5: both sides derive the epoch-0 key
                return;
            }
            attempt = out.next_attempt;
            pending = std::move(out.pending);
        }
        throw ProtocolError("handshake retries exhausted");
    }

    // Fig. 2 step 6 + 8/9: encode with the shuffled epoch key and emit DATA.
    void send_window(Transport& t, std::span<const double> x) {
        require_established("send_window");
        if (role_ != Role::Alice) throw ProtocolError("only the recorder side streams");
        uint64_t epoch64 = window_seq_ / config_.epoch_len;
        if (epoch64 > 0xffff) throw ProtocolError("epoch counter exhausted");
        uint16_t epoch = uint16_t(epoch64);
        const codec::SensingMatrix& base = matrix_for_epoch(epoch);
        codec::WindowTransform tr = codec::derive_window_transform(
            secret_, epoch, window_seq_, config_.m, config_.n());
        codec::SensingMatrix eff = codec::apply_transform(base, tr);
        codec::Measurement meas = codec::encode_window_hw(x, eff);
        saturation_total_ += meas.saturation_count;
        codec::mask_measurement(meas.acr, tr.mask);

        Frame f;
        f.type = FrameType::Data;
        f.epoch = epoch;
        f.seq = window_seq_;
        f.payload.resize(meas.acr.size() * 2);
        for (size_t j = 0; j < meas.acr.size(); ++j) {
            uint16_t u = uint16_t(meas.acr[j]);
            f.payload[2 * j] = uint8_t(u);
            f.payload[2 * j + 1] = uint8_t(u >> 8);
        }
        t.send(frame_encode(f));
        phase_ = Phase::Streaming;
        ++window_seq_;
    }

    // Fig. 2 step 7: recover x from y with the re-derived key material.
    // Returns nullopt when the peer closes. Corrupt DATA frames are dropped.
    std::optional<WindowResult> receive_window(Transport& t) {
        require_established("receive_window");
        for (;;) {
            auto bytes = t.recv();
            if (!bytes) return std::nullopt;
            Frame f;
            if (frame_decode(*bytes, f) != DecodeStatus::Ok) continue; // telemetry: drop
            if (f.type == FrameType::Close) {
                phase_ = Phase::Closed;
                return std::nullopt;
            }
            if (f.type != FrameType::Data) throw ProtocolError("unexpected frame type");
            if (f.payload.size() != size_t(config_.m) * 2) continue; // malformed, drop
            uint64_t expect_epoch = f.seq / config_.epoch_len;
            if (expect_epoch != f.epoch) throw ProtocolError("epoch/seq mismatch");
            if (f.epoch > current_epoch_ + 1) throw ProtocolError("epoch jump beyond current+1");

            WindowResult out;
            out.epoch = f.epoch;
            out.seq = f.seq;
            out.y_raw.resize(config_.m);
            for (int j = 0; j < config_.m; ++j)
                out.y_raw[j] =
                    int16_t(uint16_t(f.payload[2 * j] | (uint16_t(f.payload[2 * j + 1]) << 8)));

            codec::WindowTransform tr = codec::derive_window_transform(
                secret_, f.epoch, f.seq, config_.m, config_.n());
            codec::unmask_measurement(out.y_raw, tr.mask);
            const codec::SensingMatrix& base = matrix_for_epoch(f.epoch);
            codec::SensingMatrix eff = codec::apply_transform(base, tr);

            std::vector<double> y(config_.m);
            for (int j = 0; j < config_.m; ++j) y[j] = out.y_raw[j] / 4096.0;
            out.recon = recon::solve_bpdn(y, eff, basis(), options_.solver);

            current_epoch_ = std::max<uint64_t>(current_epoch_, f.epoch);
            phase_ = Phase::Streaming;
            return out;
        }
    }

    void send_close(Transport& t) {
        Frame f;
        f.type = FrameType::Close;
        f.seq = window_seq_;
        f.epoch = uint16_t(window_seq_ / config_.epoch_len);
        t.send(frame_encode(f));
        phase_ = Phase::Closed;
    }

    // The effective matrix the peer must agree on for a given (epoch, seq).
    codec::SensingMatrix effective_matrix(uint16_t epoch, uint32_t seq) {
        codec::WindowTransform tr =
            codec::derive_window_transform(secret_, epoch, seq, config_.m, config_.n());
        return codec::apply_transform(matrix_for_epoch(epoch), tr);
    }

private:
    struct HsOutcome {
        bool done = false;
        uint32_t next_attempt = 0;
        std::optional<Frame> pending;
        Bytes32 secret{};
    };

    enum class ExpectResult { Accepted, RestartBump, RestartAt };

    void require_established(const char* what) const {
        if (phase_ != Phase::Established && phase_ != Phase::Streaming)
            throw ProtocolError(std::string(what) + " before handshake");
    }

    recon::SparseBasis& basis() {
        if (!basis_) basis_.emplace(options_.basis, config_.n());
        return *basis_;
    }

    const codec::SensingMatrix& matrix_for_epoch(uint16_t epoch) {
        auto it = matrices_.find(epoch);
        if (it == matrices_.end())
            it = matrices_
                     .emplace(epoch,
                              codec::derive_matrix(secret_, epoch, config_.m, config_.n()))
                     .first;
        return it->second;
    }

    void send_hs(Transport& t, FrameType type, uint32_t attempt, Bytes payload = {}) {
        Frame f;
        f.type = type;
        f.seq = attempt;
        f.epoch = 0;
        f.payload = std::move(payload);
        t.send(frame_encode(f));
    }

    // Receive the next relevant handshake frame for this attempt. Stale
    // frames and duplicate HELLOs are ignored; a fresher HELLO restarts at
    // the peer's attempt; corruption or a fresh mismatch bumps the attempt.
    ExpectResult expect(Transport& t, FrameType want, uint32_t attempt, Frame& out,
                        uint32_t& restart_at) {
        for (;;) {
            auto bytes = t.recv();
            if (!bytes) throw ProtocolError("transport closed during handshake");
            Frame f;
            if (frame_decode(*bytes, f) != DecodeStatus::Ok) return ExpectResult::RestartBump;
            if (f.type == FrameType::Data || f.type == FrameType::Close)
                return ExpectResult::RestartBump;
            if (f.seq < attempt) continue; // stale attempt
            if (f.type == FrameType::Hello) {
                if (f.seq == attempt) {
                    if (want == FrameType::Hello) {
                        out = f;
                        return ExpectResult::Accepted;
                    }
                    continue; // duplicate trigger
                }
                // fresher attempt: re-converge on the peer's counter
                restart_at = f.seq;
                out = f;
                return ExpectResult::RestartAt;
            }
            if (f.type == want && f.seq == attempt) {
                out = f;
                return ExpectResult::Accepted;
            }
            return ExpectResult::RestartBump;
        }
    }

    void check_suite(const Frame& hello) const {
        if (hello.payload.size() != 1 || hello.payload[0] != options_.suite_id)
            throw ProtocolError("domain parameter mismatch");
    }

    Bytes32 finish_secret(const Frame& pubkey_frame) const {
        if (pubkey_frame.payload.size() != 32) throw ProtocolError("bad public key length");
        Bytes32 peer{};
        std::copy(pubkey_frame.payload.begin(), pubkey_frame.payload.end(), peer.begin());
        Bytes32 secret = x25519::shared_secret(keypair_, peer);
        if (is_all_zero(secret)) throw ProtocolError("degenerate shared secret");
        return secret;
    }

    Bytes config_payload() const {
        Bytes p(11);
        store16_be(p.data(), config_.m);
        p[2] = uint8_t(config_.cr);
        store32_be(p.data() + 3, config_.epoch_len);
        store32_be(p.data() + 7, config_.sample_rate);
        return p;
    }

    void adopt_config(const Frame& f) {
        if (f.payload.size() != 11) throw ProtocolError("bad config payload");
        SessionConfig cfg;
        cfg.m = load16_be(f.payload.data());
        cfg.cr = f.payload[2];
        cfg.epoch_len = load32_be(f.payload.data() + 3);
        cfg.sample_rate = load32_be(f.payload.data() + 7);
        cfg.validate();
        config_ = cfg; // the recorder side is authoritative
        basis_.reset();
    }

    HsOutcome alice_pass(Transport& t, uint32_t attempt) {
        HsOutcome out;
        Frame f;
        uint32_t at = 0;
        send_hs(t, FrameType::Hello, attempt, {options_.suite_id});
        switch (expect(t, FrameType::Hello, attempt, f, at)) {
        case ExpectResult::Accepted: break;
        case ExpectResult::RestartBump: out.next_attempt = attempt + 1; return out;
        case ExpectResult::RestartAt: out.next_attempt = at; return out;
        }
        check_suite(f);
        send_hs(t, FrameType::Pubkey, attempt,
                Bytes(keypair_.public_key.begin(), keypair_.public_key.end()));
        phase_ = Phase::PubkeySent;
        switch (expect(t, FrameType::Pubkey, attempt, f, at)) {
        case ExpectResult::Accepted: break;
        case ExpectResult::RestartBump: out.next_attempt = attempt + 1; return out;
        case ExpectResult::RestartAt: out.next_attempt = at; return out;
        }
        out.secret = finish_secret(f);
        send_hs(t, FrameType::Config, attempt, config_payload());
        out.done = true;
        return out;
    }

    HsOutcome bob_pass(Transport& t, uint32_t attempt, std::optional<Frame> pending) {
        HsOutcome out;
        Frame f;
        uint32_t at = 0;
        if (pending) {
            f = *pending; // the HELLO that triggered this restart
        } else {
            switch (expect(t, FrameType::Hello, attempt, f, at)) {
            case ExpectResult::Accepted: break;
            case ExpectResult::RestartBump:
                out.next_attempt = attempt + 1;
                send_hs(t, FrameType::Hello, out.next_attempt, {options_.suite_id});
                return out;
            case ExpectResult::RestartAt: out.next_attempt = at; out.pending = f; return out;
            }
        }
        check_suite(f);
        attempt = f.seq; // adopt the initiator's attempt
        send_hs(t, FrameType::Hello, attempt, {options_.suite_id});
        switch (expect(t, FrameType::Pubkey, attempt, f, at)) {
        case ExpectResult::Accepted: break;
        case ExpectResult::RestartBump:
            out.next_attempt = attempt + 1;
            send_hs(t, FrameType::Hello, out.next_attempt, {options_.suite_id});
            return out;
        case ExpectResult::RestartAt: out.next_attempt = at; out.pending = f; return out;
        }
        Bytes32 secret = finish_secret(f);
        send_hs(t, FrameType::Pubkey, attempt,
                Bytes(keypair_.public_key.begin(), keypair_.public_key.end()));
        phase_ = Phase::PubkeySent;
        switch (expect(t, FrameType::Config, attempt, f, at)) {
        case ExpectResult::Accepted: break;
        case ExpectResult::RestartBump:
            out.next_attempt = attempt + 1;
            send_hs(t, FrameType::Hello, out.next_attempt, {options_.suite_id});
            return out;
        case ExpectResult::RestartAt: out.next_attempt = at; out.pending = f; return out;
        }
        adopt_config(f);
        out.secret = secret;
        out.done = true;
        return out;
    }

    Role role_;
    x25519::KeyPair keypair_;
    SessionConfig config_;
    SessionOptions options_;
    Phase phase_ = Phase::Init;
    Bytes32 secret_{};
    uint32_t window_seq_ = 0;
    uint64_t current_epoch_ = 0;
    uint64_t saturation_total_ = 0;
    std::map<uint16_t, codec::SensingMatrix> matrices_;
    std::optional<recon::SparseBasis> basis_;
};

} // namespace csseal::proto

#endif
