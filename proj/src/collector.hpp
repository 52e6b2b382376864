#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "freiman/set_engine.hpp"

namespace freiman::detail {

inline constexpr std::uint64_t kDenseSpanLimit = std::uint64_t{1} << 26;

/// Payload interval [lo, lo + span) known to contain every value of interest.
struct Window {
    std::int64_t lo = 0;
    std::uint64_t span = 0;
};

inline std::optional<Window> finite_window(const GroupSpec& g) {
    if (auto order = g.order()) return Window{0, *order};
    return std::nullopt;
}

inline std::optional<Window> integer_window(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) return std::nullopt;
    return Window{lo, static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1};
}

/// Accumulates payloads and yields the deduplicated set. A bitmap is used when
/// the window is small relative to the number of insertions.
class Collector {
public:
    Collector(GroupSpec group, std::optional<Window> window, std::size_t expected)
        : group_(group) {
        if (window && window->span <= kDenseSpanLimit && window->span / 64 <= std::max<std::size_t>(expected, 1024)) {
            window_ = *window;
            bits_.assign((window->span + 63) / 64, 0);
        } else {
            values_.reserve(std::min<std::size_t>(expected, std::size_t{1} << 24));
        }
    }

    void add(std::int64_t v) {
        if (!bits_.empty()) {
            const auto i = static_cast<std::uint64_t>(v) - static_cast<std::uint64_t>(window_.lo);
            bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
        } else {
            values_.push_back(v);
        }
    }

    std::size_t count() {
        if (!bits_.empty()) {
            std::size_t total = 0;
            for (const auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
            return total;
        }
        std::sort(values_.begin(), values_.end());
        return static_cast<std::size_t>(std::unique(values_.begin(), values_.end()) - values_.begin());
    }

    FiniteSet finish() {
        std::vector<Elem> out;
        if (!bits_.empty()) {
            std::size_t total = 0;
            for (const auto w : bits_) total += static_cast<std::size_t>(std::popcount(w));
            out.reserve(total);
            for (std::size_t k = 0; k < bits_.size(); ++k) {
                auto w = bits_[k];
                while (w) {
                    const auto b = static_cast<std::uint64_t>(std::countr_zero(w));
                    out.push_back(Elem{static_cast<std::int64_t>(static_cast<std::uint64_t>(window_.lo) + k * 64 + b)});
                    w &= w - 1;
                }
            }
        } else {
            std::sort(values_.begin(), values_.end());
            values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
            out.reserve(values_.size());
            for (const auto v : values_) out.push_back(Elem{v});
        }
        return FiniteSet::from_sorted(group_, std::move(out));
    }

private:
    GroupSpec group_;
    Window window_{};
    std::vector<std::uint64_t> bits_;
    std::vector<std::int64_t> values_;
};

}  // namespace freiman::detail
