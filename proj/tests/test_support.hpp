#pragma once

// Fixture generators and brute-force oracles shared by the unit and
// acceptance suites. Oracles here never call the routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "bconv/measures.hpp"
#include "bconv/scales.hpp"

namespace bconv::fixtures {

/// Random finitely supported probability measure; coordinates on a 1/64 grid
/// inside [-spread, spread] so that convolutions merge genuinely.
inline DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t dim, std::size_t atoms,
                                      double spread = 1.0) {
    std::uniform_int_distribution<int> coord(-static_cast<int>(64 * spread),
                                             static_cast<int>(64 * spread));
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<double> coords;
    std::vector<double> weights;
    for (std::size_t i = 0; i < atoms; ++i) {
        for (std::size_t j = 0; j < dim; ++j) coords.push_back(coord(rng) / 64.0);
        weights.push_back(weight(rng));
    }
    return DiscreteMeasure::from_flat(dim, std::move(coords), std::move(weights)).normalized();
}

/// Random measure with irrational-looking coordinates.
inline DiscreteMeasure random_measure_real(std::mt19937_64& rng, std::size_t dim,
                                           std::size_t atoms, double spread = 1.0) {
    std::uniform_real_distribution<double> coord(-spread, spread);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::vector<double> coords;
    std::vector<double> weights;
    for (std::size_t i = 0; i < atoms; ++i) {
        for (std::size_t j = 0; j < dim; ++j) coords.push_back(coord(rng));
        weights.push_back(weight(rng));
    }
    return DiscreteMeasure::from_flat(dim, std::move(coords), std::move(weights)).normalized();
}

inline ScaleVector random_scale(std::mt19937_64& rng, std::size_t dim, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> r(dim);
    for (auto& v : r) v = u(rng);
    return ScaleVector(r);
}

inline ScaleVector random_integer_ratio(std::mt19937_64& rng, std::size_t dim, int max_ratio) {
    std::uniform_int_distribution<int> u(1, max_ratio);
    std::vector<double> r(dim);
    for (auto& v : r) v = u(rng);
    return ScaleVector(r);
}

/// Entropy in bits of a histogram given as a map key -> mass (masses normalized here).
template <class Key>
double histogram_entropy(const std::map<Key, double>& hist) {
    double total = 0.0;
    for (const auto& [k, m] : hist) total += m;
    double h = 0.0;
    for (const auto& [k, m] : hist) {
        if (m > 0.0) h -= (m / total) * std::log2(m / total);
    }
    return h;
}

/// Average entropy by the midpoint rule on a regular grid of `res^d` offsets.
inline double avg_entropy_midpoint(const DiscreteMeasure& mu, const ScaleVector& r, int res) {
    const std::size_t d = mu.dim();
    std::vector<int> idx(d, 0);
    double acc = 0.0;
    std::size_t cells = 0;
    while (true) {
        std::map<std::vector<long long>, double> hist;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            std::vector<long long> key(d);
            for (std::size_t j = 0; j < d; ++j) {
                const double u = (idx[j] + 0.5) / res;
                key[j] = static_cast<long long>(std::floor(mu.point(i)[j] / r[j] + u));
            }
            hist[key] += mu.weight(i);
        }
        acc += histogram_entropy(hist);
        ++cells;
        std::size_t j = 0;
        while (j < d && ++idx[j] == res) idx[j++] = 0;
        if (j == d) break;
    }
    return mu.mass() * acc / static_cast<double>(cells);
}

/// Sorted copy of the atoms for tolerance comparisons.
inline bool atoms_close(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
    if (a.dim() != b.dim() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (std::fabs(a.point(i)[j] - b.point(i)[j]) > tol) return false;
        }
        if (std::fabs(a.weight(i) - b.weight(i)) > tol) return false;
    }
    return true;
}

} // namespace bconv::fixtures
