#include <cmath>
#include <limits>

#include "bconv/errors.hpp"
#include "bconv/parameters.hpp"
#include "bconv/selfaffine.hpp"
#include "words.hpp"

namespace bconv {

OverlapReport exact_overlap_depth(const SystemSpec& spec, int n_max, std::uint64_t budget) {
    if (!spec.has_exact()) throw InputError("exact overlap detection needs a minimal polynomial for every axis");
    if (n_max < 1) throw InputError("n_max must be at least 1");
    OverlapReport r;
    r.n_max = n_max;
    r.per_axis.assign(spec.dim(), std::nullopt);
    for (int n = 1; n <= n_max; ++n) {
        const auto w = detail::enumerate_words(spec, n, true, budget);
        bool all = true;
        for (std::size_t j = 0; j < spec.dim(); ++j) {
            if (!r.per_axis[j]) {
                const auto starts = detail::key_classes(w, w.axis_offset[j], w.axis_width[j], nullptr);
                if (starts.size() - 1 < w.words) r.per_axis[j] = n;
            }
            all = all && r.per_axis[j].has_value();
        }
        if (!r.joint) {
            const auto starts = detail::key_classes(w, 0, w.key_width, nullptr);
            if (starts.size() - 1 < w.words) r.joint = n;
        }
        if (all && r.joint) break;
    }
    return r;
}

namespace {

struct RootPick {
    double root = 0.0;
    double distance = std::numeric_limits<double>::infinity();
    RootInterval iv;
};

// Real root of p nearest target; restricted to (0,1) when unit_only.
std::optional<RootPick> nearest_real_root(const IntPolynomial& p, double target, bool unit_only) {
    if (p.degree() < 1) return std::nullopt;
    const IntPolynomial f = squarefree_part(p);
    std::optional<RootPick> best;
    for (const auto& iv : isolate_real_roots(f)) {
        const auto a = AlgebraicNumber::from_interval(f, iv);
        const double x = a.to_double();
        if (unit_only && !(x > 0.0 && x < 1.0)) continue;
        const double dist = std::fabs(x - target);
        if (!best || dist < best->distance) best = RootPick{x, dist, iv};
    }
    return best;
}

} // namespace

ApproxReport approximate_parameters(const SystemSpec& spec, int n, const ApproxOptions& opt) {
    ApproxReport rep;
    rep.n = n;
    std::vector<AlgebraicNumber> exact;
    bool all_found = true;
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        const double lam = spec.lambda()[j];
        const auto cands = smallest_value_polys(lam, n, spec.difference_set(j), opt.candidates, opt.strategy, opt.budget);
        AxisApprox ax;
        ax.axis = j;
        std::optional<RootPick> fallback;
        std::size_t fallback_rank = 0;
        for (std::size_t k = 0; k < cands.size(); ++k) {
            if (auto pick = nearest_real_root(cands[k].poly, lam, true)) {
                ax.found = true;
                ax.poly = cands[k].poly;
                ax.value = cands[k].value;
                ax.rank = k;
                ax.exact = AlgebraicNumber::from_interval(squarefree_part(ax.poly), pick->iv);
                ax.eta = cands[k].value == 0.0L ? lam : pick->root;
                ax.distance = std::fabs(lam - ax.eta);
                break;
            }
            if (auto any = nearest_real_root(cands[k].poly, lam, false)) {
                if (!fallback || any->distance < fallback->distance) {
                    fallback = any;
                    fallback_rank = k;
                }
            }
        }
        if (!ax.found) {
            all_found = false;
            ax.note = "search failure: no candidate among the " + std::to_string(cands.size()) +
                      " smallest has a root in (0,1)";
            if (fallback) {
                ax.poly = cands[fallback_rank].poly;
                ax.value = cands[fallback_rank].value;
                ax.rank = fallback_rank;
                ax.eta = fallback->root;
                ax.distance = fallback->distance;
            } else {
                ax.eta = std::numeric_limits<double>::quiet_NaN();
                ax.distance = std::numeric_limits<double>::infinity();
            }
        } else {
            exact.push_back(*ax.exact);
        }
        rep.eta.push_back(ax.eta);
        rep.max_distance = std::max(rep.max_distance, ax.distance);
        rep.axes.push_back(std::move(ax));
    }
    rep.eta_in_omega = all_found;
    for (std::size_t j = 0; j < rep.eta.size() && rep.eta_in_omega; ++j) {
        if (!(rep.eta[j] > 0.0 && rep.eta[j] < 1.0)) rep.eta_in_omega = false;
        if (j > 0 && !(rep.eta[j] < rep.eta[j - 1])) rep.eta_in_omega = false;
    }
    rep.success = all_found && rep.eta_in_omega;
    if (rep.success && opt.rw_n > 0) {
        try {
            const SystemSpec eta_spec(exact, spec.maps());
            BuildOptions b;
            b.arithmetic = Arithmetic::Exact;
            rep.rw_entropy = rw_entropy_upper(eta_spec, opt.rw_n, b).value;
        } catch (const BudgetError& e) {
            rep.rw_note = e.what();
        }
    }
    return rep;
}

} // namespace bconv
