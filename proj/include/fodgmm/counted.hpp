#pragma once

// Instrumented arithmetic: a double wrapper that tallies every addition,
// subtraction, multiplication and division into the currently active stage.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fodgmm {

/// Per-stage operation counts, in order of first appearance.
class OpTally {
public:
    void begin_stage(std::string_view name);
    void add(std::uint64_t n = 1) noexcept { stages_[current_].second += n; }

    const std::vector<std::pair<std::string, std::uint64_t>>& stages() const noexcept {
        return stages_;
    }
    /// Count for `name`, 0 when the stage never ran.
    std::uint64_t count(std::string_view name) const;
    std::uint64_t total() const;

private:
    std::vector<std::pair<std::string, std::uint64_t>> stages_{{"unstaged", 0}};
    std::size_t current_ = 0;
};

namespace detail {
inline thread_local OpTally* active_tally = nullptr;
inline void tick() noexcept {
    if (active_tally) active_tally->add();
}
}  // namespace detail

/// Routes counted operations on this thread into `tally` for its lifetime.
class TallyScope {
public:
    explicit TallyScope(OpTally& tally) : previous_(detail::active_tally) {
        detail::active_tally = &tally;
    }
    ~TallyScope() { detail::active_tally = previous_; }
    TallyScope(const TallyScope&) = delete;
    TallyScope& operator=(const TallyScope&) = delete;

private:
    OpTally* previous_;
};

class CountedReal {
public:
    CountedReal() = default;
    CountedReal(double v) : v_(v) {}  // NOLINT: implicit by intent

    double value() const noexcept { return v_; }

    CountedReal& operator+=(CountedReal o) noexcept { detail::tick(); v_ += o.v_; return *this; }
    CountedReal& operator-=(CountedReal o) noexcept { detail::tick(); v_ -= o.v_; return *this; }
    CountedReal& operator*=(CountedReal o) noexcept { detail::tick(); v_ *= o.v_; return *this; }
    CountedReal& operator/=(CountedReal o) noexcept { detail::tick(); v_ /= o.v_; return *this; }

    friend CountedReal operator+(CountedReal a, CountedReal b) noexcept { return a += b; }
    friend CountedReal operator-(CountedReal a, CountedReal b) noexcept { return a -= b; }
    friend CountedReal operator*(CountedReal a, CountedReal b) noexcept { return a *= b; }
    friend CountedReal operator/(CountedReal a, CountedReal b) noexcept { return a /= b; }

    friend auto operator<=>(CountedReal a, CountedReal b) noexcept { return a.v_ <=> b.v_; }
    friend bool operator==(CountedReal a, CountedReal b) noexcept { return a.v_ == b.v_; }

private:
    double v_ = 0.0;
};

// Comparisons and magnitudes are not flops.
inline double magnitude(double x) noexcept { return std::abs(x); }
inline double magnitude(CountedReal x) noexcept { return std::abs(x.value()); }
inline double to_double(double x) noexcept { return x; }
inline double to_double(CountedReal x) noexcept { return x.value(); }

/// Marks the start of a named pipeline stage; a no-op for plain doubles.
template <class Real>
inline void enter_stage(std::string_view) {}

template <>
inline void enter_stage<CountedReal>(std::string_view name) {
    if (detail::active_tally) detail::active_tally->begin_stage(name);
}

}  // namespace fodgmm
