#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ihs {

using Cost = std::uint64_t;
using VarId = std::uint32_t;
using Value = std::uint32_t;

/// A vector with one cost per (possibly merged) cost function.
///
/// Ordering operators are lexicographic; domination is the separate partial
/// order provided by ihs::dominates().
class CostVector {
public:
    CostVector() = default;
    explicit CostVector(std::vector<Cost> values) : values_(std::move(values)) {}
    CostVector(std::initializer_list<Cost> values) : values_(values) {}

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    Cost operator[](std::size_t i) const { return values_[i]; }
    Cost& operator[](std::size_t i) { return values_[i]; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    const std::vector<Cost>& values() const { return values_; }

    auto operator<=>(const CostVector&) const = default;
    bool operator==(const CostVector&) const = default;

private:
    std::vector<Cost> values_;
};

/// One domain value per WCSP variable.
struct Assignment {
    std::vector<Value> values;

    std::size_t size() const { return values.size(); }
    Value operator[](std::size_t x) const { return values[x]; }
    bool operator==(const Assignment&) const = default;
};

/// Thrown by long-running engines when their deadline passes.
class Interrupted : public std::runtime_error {
public:
    Interrupted() : std::runtime_error("deadline reached") {}
};

/// Cooperative wall-clock deadline. A default-constructed deadline never
/// expires.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(Clock::time_point at) : at_(at) {}

    static Deadline after(double seconds)
    {
        return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(seconds)));
    }

    bool expired() const { return at_ && Clock::now() >= *at_; }

    void check() const
    {
        if (expired()) throw Interrupted();
    }

private:
    std::optional<Clock::time_point> at_;
};

}  // namespace ihs
