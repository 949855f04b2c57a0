#include "bconv/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "bconv/errors.hpp"

namespace bconv {

namespace {

double norm_between(std::span<const double> a, std::span<const double> b, const ScaleVector& s) {
    double acc = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double t = (a[j] - b[j]) / s[j];
        acc += t * t;
    }
    return std::sqrt(acc);
}

struct Edge {
    std::size_t u;
    std::size_t v;
    double dist;
};

// Dinic's algorithm on real capacities.
class FlowNetwork {
public:
    explicit FlowNetwork(std::size_t n) : adj_(n), level_(n), it_(n) {}

    std::size_t add(std::size_t from, std::size_t to, double cap) {
        adj_[from].push_back(arcs_.size());
        arcs_.push_back({to, cap});
        adj_[to].push_back(arcs_.size());
        arcs_.push_back({from, 0.0});
        return arcs_.size() - 2;
    }

    double max_flow(std::size_t s, std::size_t t, double tol) {
        tol_ = tol;
        double total = 0;
        while (bfs(s, t)) {
            std::fill(it_.begin(), it_.end(), 0);
            while (true) {
                const double f = dfs(s, t, std::numeric_limits<double>::infinity());
                if (f <= tol_) break;
                total += f;
            }
        }
        return total;
    }

    // Flow pushed along the forward arc `id`.
    [[nodiscard]] double flow(std::size_t id) const { return arcs_[id ^ 1].cap; }

private:
    struct Arc {
        std::size_t to;
        double cap;
    };

    bool bfs(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            for (auto id : adj_[u]) {
                const auto& a = arcs_[id];
                if (a.cap > tol_ && level_[a.to] < 0) {
                    level_[a.to] = level_[u] + 1;
                    q.push(a.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs(std::size_t u, std::size_t t, double pushed) {
        if (u == t) return pushed;
        for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
            const auto id = adj_[u][i];
            auto& a = arcs_[id];
            if (a.cap <= tol_ || level_[a.to] != level_[u] + 1) continue;
            const double f = dfs(a.to, t, std::min(pushed, a.cap));
            if (f > tol_) {
                a.cap -= f;
                arcs_[id ^ 1].cap += f;
                return f;
            }
        }
        return 0.0;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::vector<std::size_t> it_;
    double tol_ = 0;
};

// Admissible pairs u < v, found by sweeping along the first rescaled coordinate.
std::vector<Edge> admissible_edges(const DiscreteMeasure& nu, const ScaleVector& s, double lo, double hi) {
    const std::size_t N = nu.size();
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    auto first = [&](std::size_t i) { return nu.point(i)[0] / s[0]; };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return first(a) < first(b); });
    std::vector<Edge> edges;
    for (std::size_t ia = 0; ia < N; ++ia) {
        const auto u = order[ia];
        for (std::size_t ib = ia + 1; ib < N; ++ib) {
            const auto v = order[ib];
            if (first(v) - first(u) > hi) break;
            const double dist = norm_between(nu.point(u), nu.point(v), s);
            if (dist >= lo && dist <= hi) edges.push_back({std::min(u, v), std::max(u, v), dist});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    return edges;
}

} // namespace

Decomposition bernoulli_decompose(const DiscreteMeasure& nu, const ScaleVector& lambda, int n, int N, double eps) {
    if (n < 0 || N < 0) throw InputError("n and N must be nonnegative");
    if (!(eps > 0 && eps <= 1)) throw InputError("eps must lie in (0,1]");
    if (nu.dim() != lambda.size() && !nu.empty()) throw InputError("measure/lambda dimension mismatch");
    const auto seq = s_sequence(lambda, static_cast<std::size_t>(n + 2 * N));
    const ScaleVector& s_fine = seq[static_cast<std::size_t>(n + 2 * N)];
    const ScaleVector& s_n = seq[static_cast<std::size_t>(n)];

    Decomposition out;
    out.scale_n = n;
    out.scale_N = N;
    out.upper = 2 * lambda.pow(-3.0 * N).norm();

    const std::size_t V = nu.size();
    const auto edges = admissible_edges(nu, s_fine, out.lower, out.upper);
    // f[e] is the mass each endpoint gives to the pair; the pair's mass is 2 f[e].
    std::vector<double> f(edges.size(), 0.0);

    if (V <= kMatchingAtomLimit) {
        out.method = "max-flow";
        // Double cover: source -> left u (w_u), left u -> right v for each
        // admissible pair in both directions, right v -> sink (w_v).
        FlowNetwork net(2 * V + 2);
        const std::size_t src = 2 * V, snk = 2 * V + 1;
        for (std::size_t i = 0; i < V; ++i) {
            net.add(src, i, nu.weight(i));
            net.add(V + i, snk, nu.weight(i));
        }
        std::vector<std::pair<std::size_t, std::size_t>> ids;
        ids.reserve(edges.size());
        const double inf = 2 * nu.mass() + 1;
        for (const auto& e : edges) ids.push_back({net.add(e.u, V + e.v, inf), net.add(e.v, V + e.u, inf)});
        (void)net.max_flow(src, snk, 1e-18 * std::max(1.0, nu.mass()));
        for (std::size_t k = 0; k < edges.size(); ++k) f[k] = 0.5 * (net.flow(ids[k].first) + net.flow(ids[k].second));
    } else {
        out.method = "greedy";
        std::vector<double> rem(nu.weights().begin(), nu.weights().end());
        std::vector<std::size_t> order(edges.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<std::size_t> degree(V, 0);
        for (const auto& e : edges) {
            ++degree[e.u];
            ++degree[e.v];
        }
        // Low-degree endpoints first: they have the fewest alternatives.
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return std::min(degree[edges[a].u], degree[edges[a].v]) < std::min(degree[edges[b].u], degree[edges[b].v]);
        });
        for (auto k : order) {
            const double t = std::min(rem[edges[k].u], rem[edges[k].v]);
            if (t <= 0) continue;
            f[k] = t;
            rem[edges[k].u] -= t;
            rem[edges[k].v] -= t;
        }
        double bound = 0;
        for (std::size_t i = 0; i < V; ++i) {
            if (degree[i] > 0) bound += nu.weight(i);
        }
        double got = 0;
        for (double x : f) got += 2 * x;
        out.optimality_gap = std::max(0.0, bound - got);
    }

    std::vector<double> used(V, 0.0);
    std::vector<double> masses;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (f[k] <= 0) continue;
        const auto& e = edges[k];
        used[e.u] += f[k];
        used[e.v] += f[k];
        BernoulliPair p;
        p.x.assign(nu.point(e.u).begin(), nu.point(e.u).end());
        p.y.assign(nu.point(e.v).begin(), nu.point(e.v).end());
        p.mass = 2 * f[k];
        p.rescaled_distance = e.dist;
        p.window_distance = norm_between(nu.point(e.u), nu.point(e.v), s_n);
        p.window_ok = p.window_distance >= eps && p.window_distance <= 1 / eps;
        masses.push_back(p.mass);
        out.pairs.push_back(std::move(p));
    }
    out.paired_mass = compensated_sum(masses);

    std::vector<double> coords;
    std::vector<double> weights;
    for (std::size_t i = 0; i < V; ++i) {
        const double r = nu.weight(i) - used[i];
        if (r <= 1e-15 * nu.weight(i)) continue;
        coords.insert(coords.end(), nu.point(i).begin(), nu.point(i).end());
        weights.push_back(r);
    }
    out.theta = DiscreteMeasure::from_flat(nu.dim(), std::move(coords), std::move(weights));
    return out;
}

IncreaseReport entropy_increase_gap(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ScaleVector& lambda,
                                    double t1, double t2, const QuadratureSpec& q) {
    if (!(t2 > t1 && t1 > 0)) throw InputError("need t2 > t1 > 0");
    const ScaleVector fine = lambda.pow(t2);
    const ScaleVector coarse = lambda.pow(t1);
    IncreaseReport r;
    r.base = avg_cond_entropy(mu, fine, coarse, q);
    r.nu_report = avg_cond_entropy(nu, fine, coarse, q);
    r.beta = r.nu_report.value / (t2 - t1);
    if (nu.size() == 1) {
        // Translation by a point mass leaves average entropy unchanged.
        r.conv = r.base;
        r.conv.value = r.base.value * nu.mass();
        r.gain = r.conv.value - r.base.value;
        if (nu.mass() == 1.0) r.gain = 0.0;
        return r;
    }
    r.conv = avg_cond_entropy(convolve(nu, mu), fine, coarse, q);
    r.gain = r.conv.value - r.base.value;
    return r;
}

std::vector<TubeRow> tube_entropy_selfconv(const Point& x, const Point& y, std::size_t k, const ScaleVector& lambda,
                                           int m, int l) {
    if (k < 1) throw InputError("k must be at least 1");
    if (m < 1) throw InputError("m must be at least 1");
    const std::size_t d = lambda.size();
    if (x.size() != d || y.size() != d) throw InputError("point/lambda dimension mismatch");
    const auto zeta = bernoulli_power(x, y, k);
    const auto chi = lyapunov_exponents(lambda);
    std::vector<TubeRow> rows;
    for (std::size_t j = 0; j < d; ++j) {
        TubeRow row;
        row.axis = j;
        row.chi = chi[j];
        row.a = static_cast<int>(std::floor(std::log2(static_cast<double>(k)) / (2 * chi[j])));
        std::vector<std::size_t> others;
        for (std::size_t i = 0; i < d; ++i) {
            if (i != j) others.push_back(i);
        }
        const int base = l - row.a;
        const auto fine = Keying::en(base + m, lambda);
        const auto coarse = Keying::en_join_projected(base, m, others, lambda);
        row.value = conditional_entropy(zeta, fine, coarse) / m;
        rows.push_back(row);
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < d; ++j) {
        if (rows[j].value - rows[j].chi > rows[best].value - rows[best].chi) best = j;
    }
    rows[best].best = true;
    return rows;
}

} // namespace bconv
