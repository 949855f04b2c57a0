// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time
// limits are fixed here and never read from the environment.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "bconv/algebraic.hpp"
#include "bconv/cli.hpp"
#include "bconv/decompose.hpp"
#include "bconv/entropy.hpp"
#include "bconv/errors.hpp"
#include "bconv/parameters.hpp"
#include "bconv/selfaffine.hpp"
#include "test_support.hpp"

using namespace bconv;
namespace mp = boost::multiprecision;

namespace {

const std::string kData = BCONV_TEST_DATA;

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Records failures, keeping the first message.
struct Check {
    Outcome out;
    int failures = 0;
    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ++failures;
        if (out.ok) out.detail = what;
        out.ok = false;
    }
    Outcome done(const std::string& summary) {
        if (out.ok) out.detail = summary;
        else out.detail += " (" + std::to_string(failures) + " failures)";
        return out;
    }
};

std::string fmt(double v, int prec = 10) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::vector<AffineMap> pm1() { return {{{-1}, 0.5}, {{1}, 0.5}}; }

QuadratureSpec exact_quad() {
    QuadratureSpec q;
    q.method = QuadMethod::Exact;
    q.cell_budget = 50'000'000;
    return q;
}

double H(const DiscreteMeasure& mu, const ScaleVector& r) { return avg_entropy(mu, r, exact_quad()).value; }
double Hc(const DiscreteMeasure& mu, const ScaleVector& r, const ScaleVector& rp) {
    return avg_cond_entropy(mu, r, rp, exact_quad()).value;
}

Outcome criterion1() {
    Check c;
    const SystemSpec s(ScaleVector({1.0 / 3}), pm1());
    const auto k = kappa_estimate(s, 12);
    const double dim = dim_from_kappa(k.kappa, s.lambda());
    c.expect(k.kappa >= 0.98 && k.kappa <= 1.0, "kappa " + fmt(k.kappa) + " outside [0.98, 1]");
    c.expect(dim >= 0.618 && dim <= 0.634, "dim " + fmt(dim) + " outside [0.618, 0.634]");
    return c.done("kappa=" + fmt(k.kappa) + " dim=" + fmt(dim));
}

Outcome criterion2() {
    Check c;
    const SystemSpec g(ScaleVector({0.6180339887}), pm1(), {IntPolynomial::from_ints({-1, 1, 1})});
    BuildOptions ex;
    ex.arithmetic = Arithmetic::Exact;
    const auto depth = exact_overlap_depth(g, 12);
    c.expect(depth.joint && *depth.joint == 3, "overlap depth is not 3");
    const double h3 = shannon_entropy(build_level_n(g, 3, ex));
    c.expect(h3 == 2.75, "H(mu^(3)) = " + fmt(h3, 17));
    const double a = rw_entropy_upper(g, 3, ex).value;
    const double b = rw_entropy_upper(g, 6, ex).value;
    const double d = rw_entropy_upper(g, 12, ex).value;
    c.expect(d < 0.97, "rw(12) = " + fmt(d));
    c.expect(b <= a + 1e-12 && d <= b + 1e-12, "rw not nonincreasing");
    return c.done("depth=3 H3=2.75 rw(3,6,12)=" + fmt(a, 6) + "," + fmt(b, 6) + "," + fmt(d, 6));
}

Outcome criterion3() {
    Check c;
    const double tol = 1e-9;
    const int fixtures_per = 200;
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> shift_u(-10.0, 10.0);
    for (int t = 0; t < fixtures_per; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
        const std::string tag = " (fixture " + std::to_string(t) + ", d=" + std::to_string(d) + ")";

        // Conditional entropy bounds.
        {
            auto mu = fixtures::random_measure_real(rng, d, 6);
            auto r = fixtures::random_scale(rng, d, 0.05, 0.5);
            auto rp = r * fixtures::random_scale(rng, d, 1.0, 5.0);
            double cap = 0;
            for (std::size_t j = 0; j < d; ++j) cap += std::log2(std::ceil(rp[j] / r[j]));
            const double v = Hc(mu, r, rp);
            c.expect(v >= -tol && v <= cap + tol, "conditional entropy bounds" + tag);
        }
        // Superadditivity.
        {
            std::vector<DiscreteMeasure> parts;
            for (int i = 0; i < 3; ++i) parts.push_back(fixtures::random_measure_real(rng, d, 3).scaled(1.0 / 3));
            auto r = fixtures::random_scale(rng, d, 0.05, 0.5);
            auto rp = r * fixtures::random_integer_ratio(rng, d, 4);
            double lower = 0;
            for (const auto& p : parts) lower += Hc(p, r, rp);
            c.expect(Hc(add(add(parts[0], parts[1]), parts[2]), r, rp) >= lower - tol, "superadditivity" + tag);
        }
        // Convolution monotonicity at integer ratios.
        {
            auto mu = fixtures::random_measure_real(rng, d, 5);
            auto nu = fixtures::random_measure_real(rng, d, 3);
            auto r = fixtures::random_scale(rng, d, 0.05, 0.5);
            auto rp = r * fixtures::random_integer_ratio(rng, d, 4);
            c.expect(Hc(convolve(mu, nu), r, rp) >= Hc(mu, r, rp) - tol, "convolution monotonicity" + tag);
        }
        // Kaimanovich-Vershik, k <= 8.
        {
            auto mu = fixtures::random_measure_real(rng, d, 3);
            auto nu = fixtures::random_measure_real(rng, d, 2, 0.3);
            auto r = fixtures::random_scale(rng, d, 0.05, 0.3);
            const double base = H(mu, r);
            const double step = H(convolve(mu, nu), r) - base;
            auto acc = mu;
            for (int k = 1; k <= 8; ++k) {
                acc = convolve(acc, nu);
                c.expect(H(acc, r) - base <= k * step + tol, "KV inequality k=" + std::to_string(k) + tag);
            }
        }
        // Separated-ball additivity.
        {
            const ScaleVector r = fixtures::random_scale(rng, d, 0.05, 0.2);
            const ScaleVector rp = r * fixtures::random_integer_ratio(rng, d, 3);
            DiscreteMeasure theta;
            double parts = 0;
            for (int i = 0; i < 3; ++i) {
                Point shift(d, 0.0);
                shift[0] = 10.0 * i;
                auto piece = pushforward(fixtures::random_measure_real(rng, d, 4, 0.5).scaled(1.0 / 3), Translation{shift});
                parts += Hc(piece, r, rp);
                theta = theta.empty() ? piece : add(theta, piece);
            }
            c.expect(std::fabs(Hc(theta, r, rp) - parts) <= tol, "separated-ball additivity" + tag);
        }
        // Small-leak bound.
        {
            std::uniform_real_distribution<double> lu(0.01, 0.49);
            const double leak = lu(rng);
            auto theta = fixtures::random_measure_real(rng, d, 5).scaled(1.0 - leak);
            auto zeta = fixtures::random_measure_real(rng, d, 3, 2.0).scaled(leak);
            auto nu = add(theta, zeta);
            auto r = fixtures::random_scale(rng, d, 0.05, 0.5);
            auto N = fixtures::random_integer_ratio(rng, d, 5);
            const double ht = Hc(theta, r, r * N);
            const double hn = Hc(nu, r, r * N);
            c.expect(ht <= hn + tol, "small-leak lower" + tag);
            c.expect(hn <= ht + 2 * leak * std::log2(N.det() / leak) + tol, "small-leak upper" + tag);
        }
        // Scaling relation.
        {
            auto mu = fixtures::random_measure_real(rng, d, 6);
            auto r = fixtures::random_scale(rng, d, 0.05, 1.0);
            auto rp = fixtures::random_scale(rng, d, 0.2, 5.0);
            c.expect(std::fabs(H(mu, r) - H(pushforward(mu, rp), rp * r)) <= tol, "scaling relation" + tag);
        }
        // Translation invariance.
        {
            auto mu = fixtures::random_measure_real(rng, d, 6);
            auto r = fixtures::random_scale(rng, d, 0.05, 1.0);
            Point shift(d);
            for (auto& v : shift) v = shift_u(rng);
            c.expect(std::fabs(H(mu, r) - H(pushforward(mu, Translation{shift}), r)) <= tol, "translation invariance" + tag);
        }
    }
    return c.done(std::to_string(fixtures_per) + " fixtures x 8 properties, 0 violations");
}

Outcome criterion4() {
    Check c;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    const std::size_t n_max = 200;
    for (int t = 0; t < 20; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
        std::vector<double> v(d);
        for (auto& x : v) x = u(rng);
        std::sort(v.begin(), v.end(), std::greater<>());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        const ScaleVector lam(v);
        const auto seq = s_sequence(lam, n_max);
        for (std::size_t j = 0; j < lam.size(); ++j) {
            // lambda_j = M / 2^e exactly.
            int e = 0;
            const double frac = std::frexp(lam[j], &e);
            const auto M = static_cast<std::int64_t>(std::ldexp(frac, 53));
            const int shift = 53 - e;
            mp::cpp_int Mn = 1;
            mp::cpp_int prev = 1;
            for (std::size_t n = 1; n <= n_max; ++n) {
                Mn *= M;
                const mp::cpp_int& D = seq.denominators[n][j];
                c.expect(D == prev * seq.divisors[n - 1][j], "divisor chain broken");
                // lambda^n <= 1/D < 2 lambda^n  <=>  M^n D <= 2^{shift n} < 2 M^n D
                const mp::cpp_int pow2 = mp::cpp_int(1) << (shift * static_cast<int>(n));
                c.expect(Mn * D <= pow2 && pow2 < 2 * Mn * D, "bound fails at n=" + std::to_string(n));
                prev = D;
            }
        }
    }
    return c.done("20 lambdas, n <= 200, exact integer checks");
}

Outcome criterion5() {
    Check c;
    const auto a = lyapunov_dimension(SystemSpec(ScaleVector({0.8, 0.3}), {{{0, 0}, 0.5}, {{1, 1}, 0.5}}));
    const auto b = lyapunov_dimension(SystemSpec(ScaleVector({0.9, 0.8}), {{{0, 0}, 0.5}, {{1, 1}, 0.5}}));
    c.expect(std::fabs(a.dim - 1.3904) <= 1e-4, "dim_L(0.8,0.3) = " + fmt(a.dim));
    c.expect(b.gamma == 2.0, "gamma(0.9,0.8) = " + fmt(b.gamma));
    return c.done("dim_L=" + fmt(a.dim, 8) + " gamma=" + fmt(b.gamma));
}

Outcome criterion6() {
    Check c;
    const double g = mahler_measure(IntPolynomial::from_ints({-1, -1, 1}));
    const double two = mahler_measure(IntPolynomial::from_ints({-1, 2}));
    const double lehmer = mahler_measure(IntPolynomial::from_ints({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}));
    c.expect(std::fabs(g - 1.6180340) <= 1e-7, "M(x^2-x-1) = " + fmt(g, 12));
    c.expect(std::fabs(two - 2.0) <= 1e-9, "M(2x-1) = " + fmt(two, 12));
    c.expect(std::fabs(lehmer - 1.176281) <= 1e-5, "M(Lehmer) = " + fmt(lehmer, 12));
    return c.done("golden=" + fmt(g, 10) + " 2x-1=" + fmt(two, 10) + " lehmer=" + fmt(lehmer, 10));
}

Outcome criterion7() {
    Check c;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xu(0.05, 0.95);
    const std::vector<std::vector<long long>> sets{{-1, 0, 1}, {0, 1}, {-2, -1, 0, 1, 2}, {-1, 0, 2}, {-3, 0, 3}};
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 13;
        auto coeffs = sets[static_cast<std::size_t>(t) % sets.size()];
        if (std::pow(static_cast<double>(coeffs.size()), n) > 5e6) coeffs = {-1, 0, 1};
        const double xi = xu(rng);
        const auto ex = min_value_poly_search(xi, n, coeffs, SearchStrategy::Exhaustive);
        const auto mm = min_value_poly_search(xi, n, coeffs, SearchStrategy::MeetInMiddle);
        c.expect(ex.poly == mm.poly && ex.value == mm.value,
                 "mismatch at xi=" + fmt(xi) + " n=" + std::to_string(n));
    }
    const SystemSpec s(ScaleVector({0.6180339887}), pm1());
    const auto r = approximate_parameters(s, 3);
    const double g = (std::sqrt(5.0) - 1) / 2;
    c.expect(r.success, "golden recovery failed");
    c.expect(r.success && r.axes[0].exact && r.axes[0].exact->minpoly() == IntPolynomial::from_ints({-1, 1, 1}),
             "eta is not the root of x^2+x-1");
    c.expect(r.success && std::fabs(r.eta[0] - 0.6180339887) <= 1e-9 && std::fabs(r.eta[0] - g) <= 1e-15,
             "|lambda - eta| too large");
    return c.done("50 instances identical; eta=" + fmt(r.eta.empty() ? 0 : r.eta[0], 16));
}

double brute_paired_mass(const DiscreteMeasure& nu, const ScaleVector& s, double lo, double hi) {
    const std::size_t V = nu.size();
    std::vector<unsigned> nbr(V, 0);
    for (std::size_t i = 0; i < V; ++i) {
        for (std::size_t j = 0; j < V; ++j) {
            if (i == j) continue;
            double acc = 0;
            for (std::size_t k = 0; k < nu.dim(); ++k) acc += std::pow((nu.point(i)[k] - nu.point(j)[k]) / s[k], 2);
            const double dist = std::sqrt(acc);
            if (dist >= lo && dist <= hi) nbr[i] |= 1u << j;
        }
    }
    double best = INFINITY;
    for (unsigned S = 0; S < (1u << V); ++S) {
        unsigned N = 0;
        double cost = 0;
        for (std::size_t i = 0; i < V; ++i) {
            if (S >> i & 1) N |= nbr[i];
            else cost += nu.weight(i);
        }
        for (std::size_t i = 0; i < V; ++i) {
            if (N >> i & 1) cost += nu.weight(i);
        }
        best = std::min(best, cost);
    }
    return best;
}

Outcome criterion8() {
    Check c;
    std::mt19937_64 rng(8);
    std::size_t pairs = 0;
    for (int t = 0; t < 300; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
        const std::size_t atoms = 1 + static_cast<std::size_t>(t % 12);
        auto nu = fixtures::random_measure(rng, d, atoms, 2.0);
        std::vector<double> lv{0.5, 0.4, 0.3};
        lv.resize(d);
        const ScaleVector lam(lv);
        const int n = 1 + t % 3, N = 1 + t % 2;
        const auto dec = bernoulli_decompose(nu, lam, n, N, 0.05);
        const auto s = s_sequence(lam, static_cast<std::size_t>(n + 2 * N))[static_cast<std::size_t>(n + 2 * N)];
        const double oracle = brute_paired_mass(nu, s, dec.lower, dec.upper);
        c.expect(std::fabs(dec.paired_mass - oracle) <= 1e-12, "max-flow != oracle at fixture " + std::to_string(t));
        c.expect(std::fabs(dec.paired_mass + dec.theta.mass() - 1.0) <= 1e-12, "mass identity");
        for (const auto& p : dec.pairs) {
            ++pairs;
            c.expect(p.rescaled_distance >= dec.lower && p.rescaled_distance <= dec.upper,
                     "window violation at fixture " + std::to_string(t));
        }
    }
    const auto two = DiscreteMeasure::from_atoms({{{0.0}, 0.25}, {{0.5}, 0.25}, {{10.0}, 0.25}, {{10.5}, 0.25}});
    const auto dec = bernoulli_decompose(two, ScaleVector({0.5}), 2, 1, 0.1);
    c.expect(std::fabs(dec.paired_mass - 1.0) <= 1e-15 && dec.theta.mass() == 0.0 && dec.pairs.size() == 2,
             "two-pair fixture not fully paired");
    return c.done("300 fixtures match the oracle, " + std::to_string(pairs) + " pairs, 0 window violations");
}

Outcome criterion9() {
    Check c;
    const auto rows = tube_entropy_selfconv({0.0}, {1.0}, 4096, ScaleVector({0.5}), 6, 0);
    c.expect(rows.size() == 1 && rows[0].a == 6, "a != 6");
    c.expect(rows[0].value > 0.85, "value " + fmt(rows[0].value));
    const auto two = tube_entropy_selfconv({0.0, 0.0}, {1.0, 0.0}, 4096, ScaleVector({0.5, 0.25}), 6, 0);
    c.expect(two.size() == 2 && two[1].value == 0.0, "axis-2 row nonzero");
    return c.done("value=" + fmt(rows[0].value, 6) + ", axis-2 row 0");
}

Outcome criterion10() {
    Check c;
    for (double eps : {0.001, 0.1, 0.5, 0.999}) {
        const auto r = non_saturation_profile(DiscreteMeasure::dirac({0.0}), ScaleVector({0.5}), eps, 4, 0, 12);
        c.expect(r.non_saturated, "point mass not flagged at eps=" + fmt(eps));
        for (const auto& row : r.rows) c.expect(row.value == 0.0, "point mass row nonzero");
    }
    const int bits = 20;
    const std::size_t count = std::size_t{1} << bits;
    std::vector<double> xs(count), ws(count, 1.0 / static_cast<double>(count));
    for (std::size_t k = 0; k < count; ++k) xs[k] = std::ldexp(static_cast<double>(k), -bits);
    const auto mu = DiscreteMeasure::from_flat(1, std::move(xs), std::move(ws));
    const auto r = non_saturation_profile(mu, ScaleVector({0.5}), 0.05, 4, 0, 16);
    c.expect(!r.non_saturated, "uniform dyadic fixture flagged non-saturated");
    double worst = 0;
    for (const auto& row : r.rows) worst = std::max(worst, std::fabs(row.value - 1.0));
    c.expect(worst <= 0.02, "uniform row off by " + fmt(worst));
    return c.done("point mass zero, uniform 2^20 max |value-1|=" + fmt(worst));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion11() {
    Check c;
    const std::string g = kData + "/golden-1d.json", t = kData + "/third-1d.json", pair = kData + "/pair.csv";
    const std::vector<std::vector<std::string>> cmds{
        {"dim", "--spec", t, "--n", "12"},
        {"dim", "--spec", g, "--n", "3..12"},
        {"rw-entropy", "--spec", g, "--n", "3..12", "--arith", "exact"},
        {"overlap", "--spec", g, "--n", "12"},
        {"separation", "--spec", g, "--n", "1..10"},
        {"nonsat", "--spec", g, "--n", "0..6", "--m", "4"},
        {"avg-entropy", "--measure", pair, "--r", "0.3", "--quad", "qmc", "--seed", "11"},
        {"avg-entropy", "--measure", pair, "--r", "1", "--r2", "2", "--quad", "exact"},
        {"decompose", "--measure", pair, "--lambda", "0.5", "--n", "2", "--N", "1"},
        {"increase", "--measure", pair, "--nu", pair, "--lambda", "0.5", "--n", "4", "--N", "2", "--quad", "qmc", "--seed", "3"},
        {"tube", "--x", "0", "--y", "1", "--k", "4096", "--lambda", "0.5", "--m", "6"},
        {"mahler", "--poly=1,1,0,-1,-1,-1,-1,-1,0,1,1"},
        {"poly-search", "--xi", "0.6180339887", "--n", "8", "--k", "5"},
        {"approx", "--spec", g, "--n", "3", "--rw-n", "6"},
    };
    const auto dir = std::filesystem::temp_directory_path() / "bconv_acceptance";
    std::filesystem::create_directories(dir);
    int i = 0;
    for (const auto& cmd : cmds) {
        std::string files[2];
        for (int rep = 0; rep < 2; ++rep) {
            files[rep] = (dir / (std::to_string(i) + "_" + std::to_string(rep) + ".out")).string();
            auto args = cmd;
            args.push_back("--out");
            args.push_back(files[rep]);
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            c.expect(code == 0, cmd[0] + " exited " + std::to_string(code) + ": " + err.str());
        }
        const auto a = slurp(files[0]);
        c.expect(!a.empty() && a == slurp(files[1]), cmd[0] + " output differs between runs");
        ++i;
    }
    return c.done(std::to_string(cmds.size()) + " commands byte-identical on rerun");
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s; ///< 0: no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "strong separation sanity", 5, criterion1},
        {2, "Pisot overlap", 10, criterion2},
        {3, "entropy-calculus suite", 60, criterion3},
        {4, "s_n sequence", 1, criterion4},
        {5, "Lyapunov dimension", 1, criterion5},
        {6, "Mahler measure", 1, criterion6},
        {7, "polynomial search oracle equivalence", 30, criterion7},
        {8, "decomposition", 30, criterion8},
        {9, "tube entropy", 5, criterion9},
        {10, "non-saturation", 20, criterion10},
        {11, "determinism", 0, criterion11},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = o.ok;
        std::string detail = o.detail;
        if (c.limit_s > 0 && secs >= c.limit_s) {
            ok = false;
            detail += "; over time limit " + fmt(c.limit_s) + " s";
        }
        if (!ok) ++failed;
        std::printf("%s criterion %d (%s): %s [%.2f s]\n", ok ? "PASS" : "FAIL", c.id, c.name, detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
