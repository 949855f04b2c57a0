#include "bconv/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Entropy (bits) of class masses; masses need not be normalized.
double entropy_of_masses(std::span<const double> masses) {
    const double total = compensated_sum(masses);
    if (!(total > 0.0)) throw InputError("entropy of a zero-mass measure");
    Neumaier h;
    for (double m : masses) h.add(plogp(m / total));
    return h.value();
}

/// Entropy of the partition induced by flat keys (width w per atom).
double keyed_entropy(std::span<const std::int64_t> keys, std::size_t width,
                     std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw InputError("entropy of an empty measure");
    if (width == 0) return 0.0;
    auto less = [&](std::size_t a, std::size_t b) {
        const std::int64_t* ka = keys.data() + a * width;
        const std::int64_t* kb = keys.data() + b * width;
        return std::lexicographical_compare(ka, ka + width, kb, kb + width);
    };
    auto equal = [&](std::size_t a, std::size_t b) {
        return std::equal(keys.data() + a * width, keys.data() + (a + 1) * width,
                          keys.data() + b * width);
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    bool sorted = true;
    for (std::size_t i = 1; i < n && sorted; ++i) sorted = !less(i, i - 1);
    if (!sorted) std::stable_sort(order.begin(), order.end(), less);

    std::vector<double> masses;
    for (std::size_t i = 0; i < n;) {
        Neumaier cls;
        std::size_t k = i;
        while (k < n && equal(order[i], order[k])) {
            cls.add(weights[order[k]]);
            ++k;
        }
        masses.push_back(cls.value());
        i = k;
    }
    return entropy_of_masses(masses);
}

std::vector<std::int64_t> compute_keys(const DiscreteMeasure& mu, const Keying& k) {
    std::vector<std::int64_t> keys(mu.size() * k.width());
    for (std::size_t i = 0; i < mu.size(); ++i) k.apply(mu.point(i), keys.data() + i * k.width());
    return keys;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<unsigned> first_primes(std::size_t count) {
    std::vector<unsigned> primes;
    for (unsigned c = 2; primes.size() < count; ++c) {
        bool prime = true;
        for (unsigned p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Exact integration over the offset cube.
//
// For each axis the integrand floor(x/r + u) is piecewise constant in u with a
// jump at u = 1 - frac(x/r). The product of per-axis intervals is traversed in
// reflected mixed-radix Gray order so each step moves one axis by one interval
// and only the atoms whose breakpoint is crossed change class.
// ---------------------------------------------------------------------------

constexpr std::size_t kMaxExactDim = 10;

struct AxisBreaks {
    std::vector<double> lengths;                   // m + 1 interval lengths
    std::vector<std::vector<std::uint32_t>> flips; // flips[s]: atoms whose bit turns on entering interval s
};

struct ExactPlan {
    std::size_t dim = 0;
    std::vector<std::int64_t> base;   // floor(x/r), A x d
    std::vector<std::uint32_t> rank;  // breakpoint rank per atom/axis, 0 = none
    std::vector<AxisBreaks> axes;
    double cells = 1.0;
};

ExactPlan make_plan(const DiscreteMeasure& mu, const ScaleVector& r) {
    const std::size_t d = mu.dim();
    const std::size_t n = mu.size();
    ExactPlan plan;
    plan.dim = d;
    plan.base.resize(n * d);
    plan.rank.assign(n * d, 0);
    plan.axes.resize(d);
    std::vector<double> brk(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> distinct;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = mu.point(i)[j] / r[j];
            const double f = std::floor(v);
            if (!(std::fabs(f) < 0x1p62)) throw InputError("coordinate too large for scale");
            plan.base[i * d + j] = static_cast<std::int64_t>(f);
            const double frac = v - f;
            const double b = 1.0 - frac;
            brk[i] = (frac > 0.0 && b < 1.0) ? b : 1.0;
            if (brk[i] < 1.0) distinct.push_back(brk[i]);
        }
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        AxisBreaks& ax = plan.axes[j];
        const std::size_t m = distinct.size();
        ax.lengths.resize(m + 1);
        double prev = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            ax.lengths[s] = distinct[s] - prev;
            prev = distinct[s];
        }
        ax.lengths[m] = 1.0 - prev;
        ax.flips.assign(m + 1, {});
        for (std::size_t i = 0; i < n; ++i) {
            if (brk[i] < 1.0) {
                const auto s = static_cast<std::uint32_t>(
                    std::lower_bound(distinct.begin(), distinct.end(), brk[i]) - distinct.begin() + 1);
                plan.rank[i * d + j] = s;
                ax.flips[s].push_back(static_cast<std::uint32_t>(i));
            }
        }
        plan.cells *= static_cast<double>(m + 1);
    }
    return plan;
}

double integrate_exact(const DiscreteMeasure& mu, const ExactPlan& plan) {
    const std::size_t d = plan.dim;
    const std::size_t n = mu.size();
    const std::size_t masks = std::size_t{1} << d;

    // Enumerate every key an atom can take and number the distinct ones.
    std::vector<std::int64_t> cand;
    std::vector<std::size_t> cand_slot;
    cand.reserve(n * masks * d);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t valid = 0;
        for (std::size_t j = 0; j < d; ++j) {
            if (plan.rank[i * d + j] != 0) valid |= std::size_t{1} << j;
        }
        for (std::size_t mask = 0; mask < masks; ++mask) {
            if ((mask & ~valid) != 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                cand.push_back(plan.base[i * d + j] + static_cast<std::int64_t>((mask >> j) & 1U));
            }
            cand_slot.push_back(i * masks + mask);
        }
    }
    const std::size_t nc = cand_slot.size();
    std::vector<std::size_t> order(nc);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key_less = [&](std::size_t a, std::size_t b) {
        return std::lexicographical_compare(cand.begin() + a * d, cand.begin() + (a + 1) * d,
                                            cand.begin() + b * d, cand.begin() + (b + 1) * d);
    };
    std::sort(order.begin(), order.end(), key_less);
    std::vector<std::int32_t> table(n * masks, -1);
    std::int32_t classes = 0;
    for (std::size_t t = 0; t < nc; ++t) {
        if (t > 0 && key_less(order[t - 1], order[t])) ++classes;
        table[cand_slot[order[t]]] = classes;
    }
    ++classes;

    // Fixed-point weights make class-mass updates exact.
    const double total = mu.mass();
    std::vector<std::int64_t> w(n);
    std::int64_t big_m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::llround(std::ldexp(mu.weight(i) / total, 60));
        big_m += w[i];
    }
    const double inv_m = 1.0 / static_cast<double>(big_m);
    std::vector<std::int64_t> cmass(static_cast<std::size_t>(classes), 0);
    std::vector<std::uint32_t> state(n, 0);
    for (std::size_t i = 0; i < n; ++i) cmass[static_cast<std::size_t>(table[i * masks])] += w[i];

    auto F = [&](std::int64_t m) { return plogp(static_cast<double>(m) * inv_m); };
    auto recompute = [&]() {
        Neumaier s;
        for (auto m : cmass) s.add(F(m));
        return s.value();
    };
    double h = recompute();
    std::size_t since_recompute = 0;
    const std::size_t recompute_every = std::max<std::size_t>(1024, 4 * cmass.size());

    auto move_atom = [&](std::uint32_t i, std::uint32_t new_state) {
        const auto co = static_cast<std::size_t>(table[i * masks + state[i]]);
        const auto cn = static_cast<std::size_t>(table[i * masks + new_state]);
        state[i] = new_state;
        if (co == cn) return;
        h -= F(cmass[co]) + F(cmass[cn]);
        cmass[co] -= w[i];
        cmass[cn] += w[i];
        h += F(cmass[co]) + F(cmass[cn]);
        if (++since_recompute >= recompute_every) {
            h = recompute();
            since_recompute = 0;
        }
    };

    std::vector<std::size_t> t(d, 0);
    std::vector<int> dir(d, 1);
    Neumaier integral;
    while (true) {
        double vol = 1.0;
        for (std::size_t j = 0; j < d; ++j) vol *= plan.axes[j].lengths[t[j]];
        integral.add(vol * h);

        std::size_t j = 0;
        while (j < d) {
            const auto next = static_cast<long long>(t[j]) + dir[j];
            if (next >= 0 && next < static_cast<long long>(plan.axes[j].lengths.size())) break;
            dir[j] = -dir[j];
            ++j;
        }
        if (j == d) break;
        const std::uint32_t bit = 1U << j;
        if (dir[j] > 0) {
            ++t[j];
            for (auto i : plan.axes[j].flips[t[j]]) move_atom(i, state[i] | bit);
        } else {
            for (auto i : plan.axes[j].flips[t[j]]) move_atom(i, state[i] & ~bit);
            --t[j];
        }
    }
    return integral.value();
}

double grid_entropy_at(const DiscreteMeasure& mu, const ScaleVector& r, std::span<const double> u,
                       std::vector<std::int64_t>& scratch) {
    const std::size_t d = mu.dim();
    scratch.resize(mu.size() * d);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto x = mu.point(i);
        for (std::size_t j = 0; j < d; ++j) scratch[i * d + j] = grid_index(x[j], r[j], u[j]);
    }
    return keyed_entropy(scratch, d, mu.weights());
}

struct QmcResult {
    std::vector<double> values; // one per scale
    std::vector<double> errors;
};

QmcResult integrate_qmc(const DiscreteMeasure& mu, std::span<const ScaleVector> scales,
                        const QuadratureSpec& q) {
    const std::size_t d = mu.dim();
    const std::size_t count = std::max<std::size_t>(q.offsets, 1);
    const auto offsets = qmc_offsets(d, count, q.seed);
    constexpr std::size_t kBlocks = 16;
    QmcResult res;
    std::vector<std::int64_t> scratch;
    for (const auto& r : scales) {
        std::vector<Neumaier> blocks(kBlocks);
        std::vector<std::size_t> block_n(kBlocks, 0);
        Neumaier all;
        for (std::size_t k = 0; k < count; ++k) {
            const double h = grid_entropy_at(mu, r, std::span(offsets).subspan(k * d, d), scratch);
            all.add(h);
            blocks[k * kBlocks / count].add(h);
            ++block_n[k * kBlocks / count];
        }
        const double mean = all.value() / static_cast<double>(count);
        double var = 0.0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < kBlocks; ++b) {
            if (block_n[b] == 0) continue;
            const double bm = blocks[b].value() / static_cast<double>(block_n[b]);
            var += (bm - mean) * (bm - mean);
            ++used;
        }
        const double se = used > 1 ? std::sqrt(var / static_cast<double>(used - 1) /
                                               static_cast<double>(used))
                                   : 0.0;
        res.values.push_back(mean);
        res.errors.push_back(2.0 * se);
    }
    return res;
}

void check_avg_entropy_args(const DiscreteMeasure& mu, const ScaleVector& r) {
    if (mu.empty() || !(mu.mass() > 0.0)) throw InputError("average entropy of a zero-mass measure");
    if (r.size() != mu.dim()) throw InputError("scale/measure dimension mismatch");
}

bool exact_feasible(const DiscreteMeasure& mu, double cells, const QuadratureSpec& q) {
    return mu.dim() <= kMaxExactDim && cells <= static_cast<double>(q.cell_budget);
}

double exact_error_bound(const DiscreteMeasure& mu) {
    return 1e-12 * (1.0 + std::log2(static_cast<double>(mu.size()) + 1.0));
}

} // namespace

Keying::Keying(std::size_t width, Fn fn, std::string name)
    : width_(width), fn_(std::move(fn)), name_(std::move(name)) {}

Keying Keying::en(int n, const ScaleVector& lambda) {
    const auto levels = en_levels(lyapunov_exponents(lambda), n);
    const std::size_t d = lambda.size();
    return Keying(
        d,
        [levels, d](std::span<const double> x, std::int64_t* out) {
            if (x.size() != d) throw InputError("point/partition dimension mismatch");
            for (std::size_t j = 0; j < d; ++j) out[j] = dyadic_index(x[j], levels[j]);
        },
        "E_" + std::to_string(n));
}

Keying Keying::en_join_projected(int n, int m, std::vector<std::size_t> axes,
                                 const ScaleVector& lambda) {
    const std::size_t d = lambda.size();
    std::sort(axes.begin(), axes.end());
    axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
    for (auto j : axes) {
        if (j >= d) throw InputError("projection axis out of range");
    }
    const auto chi = lyapunov_exponents(lambda);
    const auto coarse = en_levels(chi, n);
    const auto fine = en_levels(chi, n + m);
    return Keying(
        d + axes.size(),
        [coarse, fine, axes, d](std::span<const double> x, std::int64_t* out) {
            if (x.size() != d) throw InputError("point/partition dimension mismatch");
            for (std::size_t j = 0; j < d; ++j) out[j] = dyadic_index(x[j], coarse[j]);
            for (std::size_t k = 0; k < axes.size(); ++k) {
                out[d + k] = dyadic_index(x[axes[k]], fine[axes[k]]);
            }
        },
        "E_" + std::to_string(n) + " v proj^-1 E_" + std::to_string(n + m));
}

Keying Keying::grid(const ScaleVector& r, Point offset) {
    const std::size_t d = r.size();
    if (offset.size() != d) throw InputError("grid offset dimension mismatch");
    for (double u : offset) {
        if (!(u >= 0.0 && u < 1.0)) throw InputError("grid offset must lie in [0,1)");
    }
    return Keying(
        d,
        [r, offset, d](std::span<const double> x, std::int64_t* out) {
            if (x.size() != d) throw InputError("point/grid dimension mismatch");
            for (std::size_t j = 0; j < d; ++j) out[j] = grid_index(x[j], r[j], offset[j]);
        },
        "grid");
}

Keying Keying::identity(std::size_t dim) {
    return Keying(
        dim,
        [dim](std::span<const double> x, std::int64_t* out) {
            for (std::size_t j = 0; j < dim; ++j) {
                const double v = x[j] + 0.0;
                std::int64_t bits = 0;
                std::memcpy(&bits, &v, sizeof bits);
                out[j] = bits;
            }
        },
        "identity");
}

Keying Keying::trivial() {
    return Keying(0, [](std::span<const double>, std::int64_t*) {}, "trivial");
}

Keying Keying::join(const Keying& other) const {
    const std::size_t wa = width_;
    return Keying(
        width_ + other.width_,
        [a = fn_, b = other.fn_, wa](std::span<const double> x, std::int64_t* out) {
            a(x, out);
            b(x, out + wa);
        },
        name_ + " v " + other.name_);
}

std::string method_name(QuadMethod m) {
    switch (m) {
    case QuadMethod::Auto: return "auto";
    case QuadMethod::Exact: return "exact-breakpoint";
    case QuadMethod::Qmc: return "quasi-random";
    }
    return "unknown";
}

QuadMethod parse_quad_method(const std::string& s) {
    if (s == "auto") return QuadMethod::Auto;
    if (s == "exact") return QuadMethod::Exact;
    if (s == "qmc") return QuadMethod::Qmc;
    throw InputError("unknown quadrature method '" + s + "' (expected exact|qmc|auto)");
}

double partition_entropy(const DiscreteMeasure& mu, const Keying& k) {
    if (mu.empty() || !(mu.mass() > 0.0)) throw InputError("entropy of a zero-mass measure");
    const auto keys = compute_keys(mu, k);
    return keyed_entropy(keys, k.width(), mu.weights());
}

double conditional_entropy(const DiscreteMeasure& mu, const Keying& fine, const Keying& coarse) {
    return partition_entropy(mu, fine.join(coarse)) - partition_entropy(mu, coarse);
}

double shannon_entropy(const DiscreteMeasure& mu) {
    if (mu.empty() || !(mu.mass() > 0.0)) throw InputError("entropy of a zero-mass measure");
    return entropy_of_masses(mu.weights());
}

std::vector<double> qmc_offsets(std::size_t dim, std::size_t count, std::uint64_t seed) {
    const auto primes = first_primes(dim);
    std::uint64_t state = seed;
    std::vector<double> shift(dim);
    for (auto& s : shift) s = static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
    std::vector<double> out(dim * count);
    for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t j = 0; j < dim; ++j) {
            double u = radical_inverse(k + 1, primes[j]) + shift[j];
            if (u >= 1.0) u -= 1.0;
            out[k * dim + j] = u;
        }
    }
    return out;
}

double exact_cell_count(const DiscreteMeasure& mu, const ScaleVector& r) {
    check_avg_entropy_args(mu, r);
    return make_plan(mu, r).cells;
}

EntropyReport avg_entropy(const DiscreteMeasure& mu, const ScaleVector& r, const QuadratureSpec& q) {
    check_avg_entropy_args(mu, r);
    const double c = mu.mass();
    EntropyReport rep;
    if (mu.dim() == 0 || mu.size() == 1) {
        rep.method = q.method == QuadMethod::Qmc ? QuadMethod::Qmc : QuadMethod::Exact;
        return rep;
    }
    if (q.method != QuadMethod::Qmc) {
        const ExactPlan plan = make_plan(mu, r);
        if (exact_feasible(mu, plan.cells, q)) {
            rep.value = c * integrate_exact(mu, plan);
            rep.method = QuadMethod::Exact;
            rep.offsets_used = static_cast<std::size_t>(plan.cells);
            rep.error_bound = c * exact_error_bound(mu);
            return rep;
        }
        if (q.method == QuadMethod::Exact) {
            throw BudgetError("exact average entropy needs " + std::to_string(plan.cells) +
                              " offset cells, over budget " + std::to_string(q.cell_budget));
        }
    }
    const ScaleVector scales[] = {r};
    const auto res = integrate_qmc(mu.normalized(), scales, q);
    rep.value = c * res.values[0];
    rep.method = QuadMethod::Qmc;
    rep.offsets_used = std::max<std::size_t>(q.offsets, 1);
    rep.error_bound = c * res.errors[0];
    return rep;
}

EntropyReport avg_cond_entropy(const DiscreteMeasure& mu, const ScaleVector& r,
                               const ScaleVector& r_coarse, const QuadratureSpec& q) {
    check_avg_entropy_args(mu, r);
    check_avg_entropy_args(mu, r_coarse);
    EntropyReport rep;
    if (mu.dim() == 0 || mu.size() == 1) {
        rep.method = q.method == QuadMethod::Qmc ? QuadMethod::Qmc : QuadMethod::Exact;
        return rep;
    }
    const double c = mu.mass();
    if (q.method != QuadMethod::Qmc) {
        const ExactPlan fine = make_plan(mu, r);
        const ExactPlan coarse = make_plan(mu, r_coarse);
        if (exact_feasible(mu, fine.cells, q) && exact_feasible(mu, coarse.cells, q)) {
            rep.value = c * (integrate_exact(mu, fine) - integrate_exact(mu, coarse));
            rep.method = QuadMethod::Exact;
            rep.offsets_used = static_cast<std::size_t>(fine.cells + coarse.cells);
            rep.error_bound = 2.0 * c * exact_error_bound(mu);
            return rep;
        }
        if (q.method == QuadMethod::Exact) {
            throw BudgetError("exact conditional average entropy exceeds the cell budget");
        }
    }
    const ScaleVector scales[] = {r, r_coarse};
    const auto res = integrate_qmc(mu.normalized(), scales, q);
    rep.value = c * (res.values[0] - res.values[1]);
    rep.method = QuadMethod::Qmc;
    rep.offsets_used = std::max<std::size_t>(q.offsets, 1);
    rep.error_bound = c * (res.errors[0] + res.errors[1]);
    return rep;
}

} // namespace bconv
