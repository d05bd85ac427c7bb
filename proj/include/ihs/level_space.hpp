#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ihs/types.hpp"

namespace ihs {

/// The cost-vector space: for each component, its sorted list of admissible
/// values. Vectors are handled either as costs (CostVector) or as per-component
/// level indices.
class LevelSpace {
public:
    LevelSpace() = default;
    explicit LevelSpace(std::vector<std::vector<Cost>> levels) : levels_(std::move(levels))
    {
        for (const auto& l : levels_) {
            if (l.empty()) throw std::invalid_argument("component without levels");
            if (!std::is_sorted(l.begin(), l.end()) || std::adjacent_find(l.begin(), l.end()) != l.end())
                throw std::invalid_argument("levels must be strictly increasing");
        }
    }

    std::size_t size() const { return levels_.size(); }
    const std::vector<Cost>& levels(std::size_t i) const { return levels_[i]; }
    std::size_t levelCount(std::size_t i) const { return levels_[i].size(); }
    Cost minLevel(std::size_t i) const { return levels_[i].front(); }
    Cost maxLevel(std::size_t i) const { return levels_[i].back(); }
    bool atMax(std::size_t i, Cost v) const { return v >= levels_[i].back(); }

    /// Componentwise-minimum vector, the starting point of every search.
    CostVector baseline() const
    {
        std::vector<Cost> v;
        v.reserve(size());
        for (const auto& l : levels_) v.push_back(l.front());
        return CostVector(std::move(v));
    }

    CostVector maxVector() const
    {
        std::vector<Cost> v;
        v.reserve(size());
        for (const auto& l : levels_) v.push_back(l.back());
        return CostVector(std::move(v));
    }

    std::size_t indexOf(std::size_t i, Cost c) const
    {
        const auto& l = levels_[i];
        auto it = std::lower_bound(l.begin(), l.end(), c);
        if (it == l.end() || *it != c) throw std::invalid_argument("value is not a level of its component");
        return static_cast<std::size_t>(it - l.begin());
    }

    bool contains(const CostVector& v) const
    {
        if (v.size() != size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (!std::binary_search(levels_[i].begin(), levels_[i].end(), v[i])) return false;
        return true;
    }

    /// The next level above c in component i (c must not be the max level).
    Cost nextLevel(std::size_t i, Cost c) const
    {
        const auto& l = levels_[i];
        auto it = std::upper_bound(l.begin(), l.end(), c);
        if (it == l.end()) throw std::out_of_range("no level above the maximum");
        return *it;
    }

private:
    std::vector<std::vector<Cost>> levels_;
};

}  // namespace ihs
