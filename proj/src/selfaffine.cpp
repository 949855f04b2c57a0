#include <algorithm>
#include <cmath>
#include <numeric>

#include "bconv/entropy.hpp"
#include "bconv/errors.hpp"
#include "bconv/selfaffine.hpp"
#include "words.hpp"

namespace bconv {

namespace {

void check_budget(const SystemSpec& spec, int n, std::uint64_t budget) {
    if (n < 1) throw InputError("level n must be at least 1");
    const double words = std::pow(static_cast<double>(spec.size()), n);
    if (words > static_cast<double>(budget)) {
        throw BudgetError("level " + std::to_string(n) + " needs " + std::to_string(words) +
                          " words, over the budget of " + std::to_string(budget));
    }
}

} // namespace

namespace detail {

WordCloud enumerate_words(const SystemSpec& spec, int n, bool exact, std::uint64_t budget) {
    check_budget(spec, n, budget);
    if (exact && !spec.has_exact()) throw InputError("exact arithmetic needs a minimal polynomial for every axis");
    const std::size_t d = spec.dim();
    const std::size_t nmaps = spec.size();
    const auto un = static_cast<std::size_t>(n);
    WordCloud w;
    w.d = d;
    w.words = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(nmaps), n)));

    std::vector<double> lam(d);
    for (std::size_t j = 0; j < d; ++j) lam[j] = exact ? spec.exact()[j].to_double() : spec.lambda()[j];

    // Exact keys: axis j occupies width_j entries; row k of its table is added for digit position k.
    std::vector<std::vector<std::vector<std::int64_t>>> tables;
    if (exact) {
        std::int64_t amax = 0;
        for (const auto& m : spec.maps()) {
            for (auto v : m.a) amax = std::max<std::int64_t>(amax, std::llabs(v));
        }
        for (std::size_t j = 0; j < d; ++j) {
            const auto t = power_table(spec.exact()[j], un);
            w.axis_offset.push_back(w.key_width);
            w.axis_width.push_back(t.width);
            w.key_width += t.width;
            BigInt tmax = 0;
            for (const auto& row : t.rows) {
                for (const auto& v : row) tmax = std::max(tmax, BigInt(boost::multiprecision::abs(v)));
            }
            if (tmax * amax * static_cast<unsigned>(n) >= (BigInt(1) << 62)) {
                throw BudgetError("exact representation at level " + std::to_string(n) + " exceeds 64-bit keys");
            }
            std::vector<std::vector<std::int64_t>> rows;
            for (const auto& row : t.rows) {
                std::vector<std::int64_t> r;
                for (const auto& v : row) r.push_back(v.convert_to<std::int64_t>());
                rows.push_back(std::move(r));
            }
            tables.push_back(std::move(rows));
        }
    }
    const std::size_t kw = w.key_width;
    w.coords.resize(w.words * d);
    w.weights.resize(w.words);
    w.keys.resize(w.words * kw);

    // Depth-first over u_{n-1}, ..., u_0 with Horner updates; level l fixes u_{n-1-l}.
    std::vector<double> val((un + 1) * d, 0.0);
    std::vector<double> wt(un + 1, 1.0);
    std::vector<std::int64_t> key((un + 1) * kw, 0);
    std::vector<std::size_t> digit(un, 0);
    std::size_t leaf = 0;
    std::size_t level = 0;
    while (true) {
        if (digit[level] == nmaps) {
            if (level == 0) break;
            digit[level] = 0;
            --level;
            ++digit[level];
            continue;
        }
        const auto& m = spec.maps()[digit[level]];
        const std::size_t pos = un - 1 - level;
        for (std::size_t j = 0; j < d; ++j) {
            val[(level + 1) * d + j] = val[level * d + j] * lam[j] + static_cast<double>(m.a[j]);
        }
        wt[level + 1] = wt[level] * m.p;
        for (std::size_t j = 0; j < w.axis_width.size(); ++j) {
            const auto& row = tables[j][pos];
            for (std::size_t i = 0; i < row.size(); ++i) {
                const std::size_t at = w.axis_offset[j] + i;
                key[(level + 1) * kw + at] = key[level * kw + at] + m.a[j] * row[i];
            }
        }
        if (level + 1 == un) {
            std::copy_n(&val[un * d], d, &w.coords[leaf * d]);
            w.weights[leaf] = wt[un];
            std::copy_n(key.begin() + static_cast<std::ptrdiff_t>(un * kw), kw,
                        w.keys.begin() + static_cast<std::ptrdiff_t>(leaf * kw));
            ++leaf;
            ++digit[level];
        } else {
            ++level;
        }
    }
    for (auto& c : w.coords) {
        if (c == 0.0) c = 0.0; // no negative zero
    }
    return w;
}

std::vector<std::size_t> key_classes(const WordCloud& w, std::size_t offset, std::size_t width,
                                     std::vector<std::size_t>* order_out) {
    std::vector<std::size_t> order(w.words);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < width; ++i) {
            const auto x = w.keys[a * w.key_width + offset + i];
            const auto y = w.keys[b * w.key_width + offset + i];
            if (x != y) return x < y;
        }
        return a < b;
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::size_t> starts;
    for (std::size_t r = 0; r < order.size(); ++r) {
        bool same = r > 0;
        for (std::size_t i = 0; same && i < width; ++i) {
            same = w.keys[order[r] * w.key_width + offset + i] == w.keys[order[r - 1] * w.key_width + offset + i];
        }
        if (!same) starts.push_back(r);
    }
    starts.push_back(order.size());
    if (order_out) *order_out = std::move(order);
    return starts;
}

} // namespace detail

std::string arithmetic_name(Arithmetic a) { return a == Arithmetic::Exact ? "exact" : "float"; }

DiscreteMeasure build_level_n(const SystemSpec& spec, int n, const BuildOptions& opt) {
    const bool exact = opt.arithmetic == Arithmetic::Exact;
    auto w = detail::enumerate_words(spec, n, exact, opt.budget);
    if (!exact) return DiscreteMeasure::from_flat(w.d, std::move(w.coords), std::move(w.weights));
    std::vector<std::size_t> order;
    const auto starts = detail::key_classes(w, 0, w.key_width, &order);
    std::vector<double> coords;
    std::vector<double> weights;
    std::vector<double> part;
    for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        // The class point is the float image of its first word in enumeration order.
        std::size_t first = order[starts[c]];
        part.clear();
        for (std::size_t r = starts[c]; r < starts[c + 1]; ++r) {
            first = std::min(first, order[r]);
            part.push_back(w.weights[order[r]]);
        }
        coords.insert(coords.end(), w.coords.begin() + static_cast<std::ptrdiff_t>(first * w.d),
                      w.coords.begin() + static_cast<std::ptrdiff_t>((first + 1) * w.d));
        weights.push_back(compensated_sum(part));
    }
    return DiscreteMeasure::from_flat(w.d, std::move(coords), std::move(weights));
}

DiscreteMeasure build_factor(const SystemSpec& spec, int a, int b, const BuildOptions& opt) {
    if (a < 0) throw InputError("factor start must be nonnegative");
    if (b <= a) throw InputError("empty factor range: need b > a");
    auto base = build_level_n(spec, b - a, opt);
    if (a == 0) return base;
    return pushforward(base, spec.lambda().pow(a));
}

LyapunovReport lyapunov_dimension(const SystemSpec& spec) {
    const auto& chi = spec.chi();
    const std::size_t d = chi.size();
    const double h = spec.entropy_p();
    LyapunovReport r;
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        r.bounds.push_back(static_cast<double>(j) + (h - acc) / chi[j]);
        acc += chi[j];
    }
    acc = 0.0;
    std::size_t m = 0;
    while (m < d && acc + chi[m] <= h) acc += chi[m++];
    r.m = static_cast<int>(m);
    if (m < d) {
        r.dim = static_cast<double>(m) + (h - acc) / chi[m];
    } else {
        r.dim = static_cast<double>(d) * h / acc;
    }
    r.gamma = std::min(static_cast<double>(d), r.dim);
    return r;
}

KappaReport kappa_estimate(const SystemSpec& spec, int n, const BuildOptions& opt) {
    KappaReport r;
    r.n = n;
    const auto mu = build_level_n(spec, n, opt);
    const auto keying = Keying::en(n, spec.lambda());
    r.entropy_bits = partition_entropy(mu, keying);
    r.kappa = r.entropy_bits / n;
    if (std::pow(static_cast<double>(spec.size()), n + 5) <= static_cast<double>(opt.budget)) {
        r.stability_n = n + 5;
        r.stability_kappa = partition_entropy(build_level_n(spec, n + 5, opt), keying) / n;
    }
    if (n == 1) r.warning = "single level: the estimate reflects H(p) and the first partition only";
    return r;
}

double dim_from_kappa(double kappa, const ScaleVector& lambda) {
    const auto chi = lyapunov_exponents(lambda);
    const std::size_t d = chi.size();
    double s = kappa;
    for (std::size_t j = 0; j + 1 < d; ++j) s += chi[d - 1] - chi[j];
    return std::clamp(s / chi[d - 1], 0.0, static_cast<double>(d));
}

namespace {

double entropy_of_parts(const std::vector<double>& masses) {
    double h = 0.0;
    for (double m : masses) {
        if (m > 0.0) h -= m * std::log2(m);
    }
    return h;
}

} // namespace

RwReport rw_entropy_upper(const SystemSpec& spec, int n, const BuildOptions& opt) {
    RwReport r;
    r.n = n;
    r.arithmetic = opt.arithmetic;
    if (opt.arithmetic == Arithmetic::Exact) {
        const auto w = detail::enumerate_words(spec, n, true, opt.budget);
        std::vector<std::size_t> order;
        const auto starts = detail::key_classes(w, 0, w.key_width, &order);
        std::vector<double> masses;
        std::vector<double> part;
        for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
            part.clear();
            for (std::size_t i = starts[c]; i < starts[c + 1]; ++i) part.push_back(w.weights[order[i]]);
            masses.push_back(compensated_sum(part));
        }
        r.words = w.words;
        r.classes = masses.size();
        r.value = entropy_of_parts(masses) / n;
        r.verdict = r.classes < r.words ? "exact overlap" : "no exact overlap";
        return r;
    }
    const auto mu = build_level_n(spec, n, opt);
    r.words = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(spec.size()), n)));
    r.classes = mu.size();
    r.value = shannon_entropy(mu) / n;
    r.verdict = r.classes < r.words ? "collision detected" : "no collision detected";
    return r;
}

NonSatReport non_saturation_profile(const DiscreteMeasure& mu, const ScaleVector& lambda, double eps, int m,
                                    int n_lo, int n_hi) {
    if (m < 1) throw InputError("m must be at least 1");
    if (n_lo < 0 || n_hi < n_lo) throw InputError("bad n range");
    if (mu.dim() != lambda.size()) throw InputError("measure and lambda dimensions differ");
    const auto chi = lyapunov_exponents(lambda);
    const std::size_t d = lambda.size();
    NonSatReport rep;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto fine = Keying::en(n + m, lambda);
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<std::size_t> others;
            for (std::size_t i = 0; i < d; ++i) {
                if (i != j) others.push_back(i);
            }
            const auto coarse = Keying::en_join_projected(n, m, others, lambda);
            NonSatRow row;
            row.axis = j;
            row.n = n;
            row.value = conditional_entropy(mu, fine, coarse) / m;
            row.threshold = chi[j] - eps;
            row.below = row.value < row.threshold;
            rep.non_saturated = rep.non_saturated && row.below;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

std::vector<SeparationRow> separation_profile(const SystemSpec& spec, int n_max, const BuildOptions& opt) {
    if (n_max < 1) throw InputError("n_max must be at least 1");
    const bool exact = opt.arithmetic == Arithmetic::Exact;
    std::vector<SeparationRow> out;
    for (int n = 1; n <= n_max; ++n) {
        const auto w = detail::enumerate_words(spec, n, exact, opt.budget);
        for (std::size_t j = 0; j < w.d; ++j) {
            SeparationRow row;
            row.n = n;
            row.axis = j;
            if (exact) {
                const auto starts = detail::key_classes(w, w.axis_offset[j], w.axis_width[j], nullptr);
                row.exact_collision = starts.size() - 1 < w.words;
            }
            if (row.exact_collision || w.words < 2) {
                row.delta = w.words < 2 ? INFINITY : 0.0;
            } else {
                std::vector<double> v(w.words);
                for (std::size_t i = 0; i < w.words; ++i) v[i] = w.coords[i * w.d + j];
                std::sort(v.begin(), v.end());
                double gap = INFINITY;
                for (std::size_t i = 1; i < v.size(); ++i) gap = std::min(gap, v[i] - v[i - 1]);
                row.delta = gap;
            }
            row.c = std::pow(row.delta, 1.0 / n);
            out.push_back(row);
        }
    }
    return out;
}

} // namespace bconv
