#pragma once

#include <string>
#include <vector>

#include "bconv/entropy.hpp"
#include "bconv/measures.hpp"
#include "bconv/scales.hpp"

namespace bconv {

/// One Bernoulli component mass * (delta_x + delta_y) / 2.
struct BernoulliPair {
    Point x;
    Point y;
    double mass = 0.0;
    double rescaled_distance = 0.0; ///< |s_{n+2N}^{-1}(x - y)|
    double window_distance = 0.0;   ///< |s_n^{-1}(x - y)|
    bool window_ok = false;         ///< window_distance in [eps, 1/eps]
};

struct Decomposition {
    DiscreteMeasure theta; ///< residual
    std::vector<BernoulliPair> pairs;
    int scale_n = 0;
    int scale_N = 0;
    double paired_mass = 0.0;
    double lower = 1.0 / 6; ///< admissible rescaled distances [lower, upper]
    double upper = 0.0;
    std::string method;       ///< "max-flow" or "greedy"
    double optimality_gap = 0.0; ///< upper bound on the paired mass missed (0 for max-flow)
};

/// Atom count above which pairing switches to the greedy solver.
inline constexpr std::size_t kMatchingAtomLimit = 10'000;

/// Split nu into a residual and Bernoulli pairs whose separation, after
/// rescaling by s_{n+2N}^{-1}, lies in [1/6, 2|lambda^{-3N}|]. The paired mass
/// is maximal over all such splittings (atoms may be shared between pairs).
[[nodiscard]] Decomposition bernoulli_decompose(const DiscreteMeasure& nu, const ScaleVector& lambda, int n,
                                                int N, double eps);

struct IncreaseReport {
    double gain = 0.0; ///< H(nu*mu; lambda^t2 | lambda^t1) - H(mu; lambda^t2 | lambda^t1)
    double beta = 0.0; ///< H(nu; lambda^t2 | lambda^t1) / (t2 - t1)
    EntropyReport conv;
    EntropyReport base;
    EntropyReport nu_report;
};

[[nodiscard]] IncreaseReport entropy_increase_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                                  const ScaleVector& lambda, double t1, double t2,
                                                  const QuadratureSpec& q = {});

struct TubeRow {
    std::size_t axis = 0;
    int a = 0;          ///< floor(log2(k) / (2 chi_j))
    double value = 0.0; ///< bits per level
    double chi = 0.0;
    bool best = false;  ///< axis maximizing value - chi
};

/// Per-axis normalized conditional entropy of zeta^{*k}, zeta = (delta_x + delta_y)/2,
/// between E_{l-a} joined with the fine partition on the other axes and E_{l-a+m}.
[[nodiscard]] std::vector<TubeRow> tube_entropy_selfconv(const Point& x, const Point& y, std::size_t k,
                                                         const ScaleVector& lambda, int m, int l);

} // namespace bconv
