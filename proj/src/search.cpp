#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>

#include "bconv/algebraic.hpp"
#include "bconv/errors.hpp"

namespace bconv {

namespace {

struct Cand {
    std::vector<long long> c; // low first
    long double value;
};

// Lexicographic comparison reading from the highest coefficient down.
bool lex_less(const std::vector<long long>& a, const std::vector<long long>& b) {
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

bool better(const Cand& a, const Cand& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.c, b.c);
}

// Keeps the k best candidates in ranking order.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) {}

    [[nodiscard]] bool full() const { return items_.size() >= k_; }
    [[nodiscard]] long double worst() const { return items_.back().value; }

    void offer(Cand c) {
        if (full() && !better(c, items_.back())) return;
        auto pos = std::upper_bound(items_.begin(), items_.end(), c, better);
        items_.insert(pos, std::move(c));
        if (items_.size() > k_) items_.pop_back();
    }

    std::vector<Cand>& items() { return items_; }

private:
    std::size_t k_;
    std::vector<Cand> items_;
};

std::vector<long long> checked_coeffs(double xi, int n, const std::vector<long long>& coeffs) {
    if (!(xi > 0.0 && xi < 1.0)) throw InputError("search point must lie in (0,1)");
    if (n < 1) throw InputError("search length n must be at least 1");
    std::vector<long long> c = coeffs;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() < 2 || !std::binary_search(c.begin(), c.end(), 0LL)) {
        throw InputError("coefficient set must contain 0 and a nonzero value");
    }
    return c;
}

double power_count(std::size_t base, int n) { return std::pow(static_cast<double>(base), n); }

std::vector<Cand> exhaustive(long double xi, int n, const std::vector<long long>& cs, std::size_t k,
                             std::uint64_t budget) {
    if (power_count(cs.size(), n) > static_cast<double>(budget)) {
        throw BudgetError("exhaustive search space exceeds the budget");
    }
    TopK top(k);
    std::vector<long long> c(static_cast<std::size_t>(n), 0);
    std::vector<long double> pre(static_cast<std::size_t>(n) + 1, 0.0L);
    std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
    // Iterative DFS from the top coefficient; pre[i] is the Horner prefix above position n-i.
    int depth = 0;
    digit[0] = 0;
    while (depth >= 0) {
        const std::size_t pos = static_cast<std::size_t>(n - 1 - depth);
        if (digit[static_cast<std::size_t>(depth)] == cs.size()) {
            --depth;
            if (depth >= 0) ++digit[static_cast<std::size_t>(depth)];
            continue;
        }
        c[pos] = cs[digit[static_cast<std::size_t>(depth)]];
        pre[static_cast<std::size_t>(depth) + 1] = pre[static_cast<std::size_t>(depth)] * xi + static_cast<long double>(c[pos]);
        if (depth == n - 1) {
            if (std::any_of(c.begin(), c.end(), [](long long v) { return v != 0; })) {
                top.offer({c, std::fabs(pre[static_cast<std::size_t>(n)])});
            }
            ++digit[static_cast<std::size_t>(depth)];
        } else {
            ++depth;
            digit[static_cast<std::size_t>(depth)] = 0;
        }
    }
    return std::move(top.items());
}

std::vector<Cand> branch_and_bound(long double xi, int n, const std::vector<long long>& cs, std::size_t k,
                                   std::uint64_t budget) {
    const long double cmin = static_cast<long double>(cs.front());
    const long double cmax = static_cast<long double>(cs.back());
    const long double cabs = std::max(std::fabs(cmin), std::fabs(cmax));
    // tail[k] = sum_{i<k} xi^i, xpow[k] = xi^k
    std::vector<long double> tail(static_cast<std::size_t>(n) + 1, 0.0L);
    std::vector<long double> xpow(static_cast<std::size_t>(n) + 1, 1.0L);
    for (std::size_t i = 1; i <= static_cast<std::size_t>(n); ++i) {
        tail[i] = tail[i - 1] + xpow[i - 1];
        xpow[i] = xpow[i - 1] * xi;
    }
    const long double slack = 1e-15L * (1.0L + cabs * n);
    TopK top(k);
    std::vector<long long> c(static_cast<std::size_t>(n), 0);
    std::uint64_t nodes = 0;
    const std::uint64_t node_cap = budget * 64;

    struct Frame {
        long double pre;
        std::size_t next;
    };
    std::vector<Frame> stack;
    stack.push_back({0.0L, 0});
    while (!stack.empty()) {
        const std::size_t depth = stack.size() - 1; // coefficients fixed so far
        Frame& f = stack.back();
        if (f.next == cs.size()) {
            stack.pop_back();
            continue;
        }
        const std::size_t pos = static_cast<std::size_t>(n) - 1 - depth;
        c[pos] = cs[f.next++];
        const long double v = f.pre * xi + static_cast<long double>(c[pos]);
        if (++nodes > node_cap) throw BudgetError("branch-and-bound node count exceeds the budget");
        if (pos == 0) {
            if (std::any_of(c.begin(), c.end(), [](long long x) { return x != 0; })) top.offer({c, std::fabs(v)});
            continue;
        }
        if (top.full()) {
            const long double target = -v * xpow[pos];
            const long double lo = cmin * tail[pos];
            const long double hi = cmax * tail[pos];
            const long double lb = target < lo ? lo - target : (target > hi ? target - hi : 0.0L);
            if (lb > top.worst() + slack) continue;
        }
        for (std::size_t i = 0; i < pos; ++i) c[i] = 0;
        stack.push_back({v, 0});
    }
    return std::move(top.items());
}

// Values of all coefficient vectors of length len, index = mixed radix, lowest digit = c_0.
std::vector<double> half_values(long double xi, int len, const std::vector<long long>& cs) {
    std::vector<double> vals{0.0};
    std::vector<long double> acc{0.0L};
    for (int l = 0; l < len; ++l) {
        std::vector<long double> next;
        next.reserve(acc.size() * cs.size());
        for (long double old : acc) {
            for (long long c : cs) next.push_back(old * xi + static_cast<long double>(c));
        }
        acc = std::move(next);
    }
    vals.assign(acc.begin(), acc.end());
    return vals;
}

// Inverse of the half_values indexing; returns the coefficients lowest first.
std::vector<long long> decode(std::size_t idx, int len, const std::vector<long long>& cs) {
    std::vector<long long> c(static_cast<std::size_t>(len), 0);
    for (int i = 0; i < len; ++i) {
        c[static_cast<std::size_t>(i)] = cs[idx % cs.size()];
        idx /= cs.size();
    }
    return c;
}

std::vector<Cand> meet_in_middle(long double xi, int n, const std::vector<long long>& cs, std::size_t k,
                                 std::uint64_t budget) {
    const int h = n / 2;
    const int hh = n - h;
    const std::uint64_t list_cap = std::max<std::uint64_t>(budget / 4, 1);
    if (power_count(cs.size(), hh) > static_cast<double>(list_cap)) {
        throw BudgetError("meet-in-middle lists exceed the budget");
    }
    const auto low = half_values(xi, h, cs);
    const auto high = half_values(xi, hh, cs);
    std::vector<std::uint32_t> order(low.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return low[a] != low[b] ? low[a] < low[b] : a < b;
    });
    std::vector<double> sorted(low.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = low[order[i]];
    long double xh = 1.0L;
    for (int i = 0; i < h; ++i) xh *= xi;

    // Index of the all-zero vector in each list.
    std::size_t zero_digit = static_cast<std::size_t>(std::find(cs.begin(), cs.end(), 0LL) - cs.begin());
    auto zero_index = [&](int len) {
        std::size_t idx = 0;
        for (int i = 0; i < len; ++i) idx = idx * cs.size() + zero_digit;
        return idx;
    };
    const std::size_t low_zero = zero_index(h);
    const std::size_t high_zero = zero_index(hh);

    // Pass 1: k-th smallest approximate value.
    std::priority_queue<double> heap;
    auto bound = [&]() { return heap.size() < k ? INFINITY : heap.top(); };
    auto offer = [&](double v) {
        if (heap.size() < k) {
            heap.push(v);
        } else if (v < heap.top()) {
            heap.pop();
            heap.push(v);
        }
    };
    for (std::size_t a = 0; a < high.size(); ++a) {
        const double t = static_cast<double>(-static_cast<long double>(high[a]) * xh);
        const auto pos = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        for (std::size_t r = pos; r < sorted.size(); ++r) {
            const double d = sorted[r] - t;
            if (d > bound()) break;
            if (a == high_zero && order[r] == low_zero) continue;
            offer(d);
        }
        for (std::size_t l = pos; l-- > 0;) {
            const double d = t - sorted[l];
            if (d > bound()) break;
            if (a == high_zero && order[l] == low_zero) continue;
            offer(d);
        }
    }
    if (heap.empty()) return {};
    long double cabs = 0.0L;
    for (long long c : cs) cabs = std::max(cabs, std::fabs(static_cast<long double>(c)));
    const double err = 64.0 * n * n * static_cast<double>(cabs) * DBL_EPSILON + 1e-300;
    const double window = heap.top() + 2.0 * err;

    // Pass 2: collect everything inside the window, rank canonically.
    TopK top(k);
    for (std::size_t a = 0; a < high.size(); ++a) {
        const double t = static_cast<double>(-static_cast<long double>(high[a]) * xh);
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), t - window);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), t + window);
        if (lo == hi) continue;
        const auto hc = decode(a, hh, cs);
        for (auto it = lo; it != hi; ++it) {
            const std::size_t b = order[static_cast<std::size_t>(it - sorted.begin())];
            if (a == high_zero && b == low_zero) continue;
            std::vector<long long> c = decode(b, h, cs);
            c.insert(c.end(), hc.begin(), hc.end());
            const long double v = std::fabs(canonical_value(c, xi));
            top.offer({std::move(c), v});
        }
    }
    return std::move(top.items());
}

} // namespace

long double canonical_value(const std::vector<long long>& coeffs_low_first, long double xi) {
    long double v = 0.0L;
    for (std::size_t i = coeffs_low_first.size(); i-- > 0;) v = v * xi + static_cast<long double>(coeffs_low_first[i]);
    return v;
}

std::string strategy_name(SearchStrategy s) {
    switch (s) {
    case SearchStrategy::Exhaustive: return "exhaustive";
    case SearchStrategy::MeetInMiddle: return "meet-in-middle";
    case SearchStrategy::BranchAndBound: return "branch-and-bound";
    }
    return "unknown";
}

SearchStrategy parse_strategy(const std::string& s) {
    if (s == "exhaustive") return SearchStrategy::Exhaustive;
    if (s == "meet-in-middle" || s == "mitm") return SearchStrategy::MeetInMiddle;
    if (s == "branch-and-bound" || s == "bnb") return SearchStrategy::BranchAndBound;
    throw InputError("unknown search strategy \"" + s + "\"");
}

std::vector<PolyCandidate> smallest_value_polys(double xi, int n, const std::vector<long long>& coeffs,
                                                std::size_t k, SearchStrategy strategy, std::uint64_t budget) {
    const auto cs = checked_coeffs(xi, n, coeffs);
    if (k == 0) return {};
    const long double x = xi;
    std::vector<Cand> found;
    switch (strategy) {
    case SearchStrategy::Exhaustive: found = exhaustive(x, n, cs, k, budget); break;
    case SearchStrategy::MeetInMiddle: found = meet_in_middle(x, n, cs, k, budget); break;
    case SearchStrategy::BranchAndBound: found = branch_and_bound(x, n, cs, k, budget); break;
    }
    std::vector<PolyCandidate> out;
    out.reserve(found.size());
    for (auto& f : found) out.push_back({IntPolynomial::from_ints(f.c), f.value});
    return out;
}

PolyCandidate min_value_poly_search(double xi, int n, const std::vector<long long>& coeffs,
                                    SearchStrategy strategy, std::uint64_t budget) {
    auto r = smallest_value_polys(xi, n, coeffs, 1, strategy, budget);
    if (r.empty()) throw InputError("no nonzero polynomial in the search space");
    return r.front();
}

} // namespace bconv
