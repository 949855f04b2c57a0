#pragma once

#include <cstdint>
#include <vector>

#include "bconv/system.hpp"

namespace bconv::detail {

/// All words of length n in enumeration order, before any merging.
struct WordCloud {
    std::size_t d = 0;
    std::size_t words = 0;
    std::vector<double> coords; ///< words * d
    std::vector<double> weights;
    std::size_t key_width = 0;  ///< exact mode only
    std::vector<std::int64_t> keys;
    std::vector<std::size_t> axis_offset;
    std::vector<std::size_t> axis_width;
};

WordCloud enumerate_words(const SystemSpec& spec, int n, bool exact, std::uint64_t budget);

/// Sorts words by the key slice [offset, offset + width) and returns class
/// boundaries into the sorted order (last entry = words).
std::vector<std::size_t> key_classes(const WordCloud& w, std::size_t offset, std::size_t width,
                                     std::vector<std::size_t>* order_out);

} // namespace bconv::detail
