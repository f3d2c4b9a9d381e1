// Operation traces: an append-only sequence of field-operation tags collected
// per execution context. Traces stand in for execution timing when checking
// that scalar multiplication performs the same work for every input.
#ifndef CSSEAL_OPTRACE_HPP
#define CSSEAL_OPTRACE_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace csseal {

enum class FieldOp : uint8_t {
    Add = 1,
    Sub = 2,
    Mul = 3,
    Sqr = 4,
    Freeze = 5,
    Swap = 6, // point swap in the non-hardened ladder
};

class OpTrace {
public:
    void append(FieldOp op) { tags_.push_back(static_cast<uint8_t>(op)); }
    void clear() { tags_.clear(); }
    size_t size() const { return tags_.size(); }
    const std::vector<uint8_t>& tags() const { return tags_; }
    void reserve(size_t n) { tags_.reserve(n); }

    bool operator==(const OpTrace& other) const { return tags_ == other.tags_; }

    // Position of the first differing tag, or nullopt if one trace is a
    // prefix of the other and lengths match (i.e. traces are equal).
    static std::optional<size_t> first_divergence(const OpTrace& a, const OpTrace& b) {
        size_t n = std::min(a.tags_.size(), b.tags_.size());
        for (size_t i = 0; i < n; ++i)
            if (a.tags_[i] != b.tags_[i]) return i;
        if (a.tags_.size() != b.tags_.size()) return n;
        return std::nullopt;
    }

private:
    std::vector<uint8_t> tags_;
};

namespace trace_detail {
inline thread_local OpTrace* active = nullptr;

inline void record(FieldOp op) {
    if (active) active->append(op);
}
} // namespace trace_detail

// RAII activation: field operations on this thread append to `t` while the
// scope is alive. One trace per execution context; scopes may nest.
class TraceScope {
public:
    explicit TraceScope(OpTrace& t) : prev_(trace_detail::active) { trace_detail::active = &t; }
    ~TraceScope() { trace_detail::active = prev_; }
    TraceScope(const TraceScope&) = delete;
    TraceScope& operator=(const TraceScope&) = delete;

private:
    OpTrace* prev_;
};

} // namespace csseal

#endif
