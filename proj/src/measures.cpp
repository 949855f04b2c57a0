#include "bconv/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bconv/errors.hpp"
#include "bconv/format.hpp"

namespace bconv {

namespace {

constexpr std::size_t kMaxConvolutionPairs = std::size_t{1} << 27;

double quantize(double x) {
    const double t = std::ldexp(x, kQuantizeBits);
    if (!(std::fabs(t) < 0x1p62)) throw InputError("coordinate too large for quantized merge");
    return std::ldexp(static_cast<double>(std::llround(t)), -kQuantizeBits);
}

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

} // namespace

double compensated_sum(std::span<const double> values) {
    Neumaier acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

DiscreteMeasure DiscreteMeasure::from_flat(std::size_t dim, std::vector<double> coords,
                                           std::vector<double> weights, MergePolicy policy) {
    const std::size_t n = weights.size();
    if (coords.size() != n * dim) throw InputError("dimension mismatch between points and weights");
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("weights must be finite and nonnegative");
    }
    for (double& x : coords) {
        if (!std::isfinite(x)) throw InputError("coordinates must be finite");
        x = (policy == MergePolicy::Quantized) ? quantize(x) : x + 0.0;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto point_less = [&](std::size_t a, std::size_t b) {
        const double* pa = coords.data() + a * dim;
        const double* pb = coords.data() + b * dim;
        for (std::size_t j = 0; j < dim; ++j) {
            if (pa[j] < pb[j]) return true;
            if (pb[j] < pa[j]) return false;
        }
        return false;
    };
    auto point_equal = [&](std::size_t a, std::size_t b) {
        const double* pa = coords.data() + a * dim;
        const double* pb = coords.data() + b * dim;
        for (std::size_t j = 0; j < dim; ++j) {
            if (pa[j] != pb[j]) return false;
        }
        return true;
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (point_less(a, b)) return true;
        if (point_less(b, a)) return false;
        return weights[a] < weights[b];
    });

    DiscreteMeasure out;
    out.dim_ = dim;
    out.policy_ = policy;
    Neumaier total;
    for (std::size_t i = 0; i < n;) {
        std::size_t k = i;
        Neumaier cls;
        while (k < n && point_equal(order[i], order[k])) {
            cls.add(weights[order[k]]);
            ++k;
        }
        const double w = cls.value();
        if (w > 0.0) {
            const double* p = coords.data() + order[i] * dim;
            out.coords_.insert(out.coords_.end(), p, p + dim);
            out.weights_.push_back(w);
            total.add(w);
        }
        i = k;
    }
    out.mass_ = total.value();
    return out;
}

DiscreteMeasure DiscreteMeasure::from_atoms(const std::vector<std::pair<Point, double>>& atoms,
                                            MergePolicy policy) {
    if (atoms.empty()) return from_flat(0, {}, {}, policy);
    const std::size_t dim = atoms.front().first.size();
    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(atoms.size() * dim);
    weights.reserve(atoms.size());
    for (const auto& [x, w] : atoms) {
        if (x.size() != dim) throw InputError("dimension mismatch between atoms");
        if (w < 0.0) throw InputError("negative weight");
        coords.insert(coords.end(), x.begin(), x.end());
        weights.push_back(w);
    }
    return from_flat(dim, std::move(coords), std::move(weights), policy);
}

DiscreteMeasure DiscreteMeasure::dirac(const Point& x, double weight) {
    return from_flat(x.size(), x, {weight});
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw InputError("mass factor must be positive");
    DiscreteMeasure out = *this;
    for (double& w : out.weights_) w *= factor;
    out.mass_ = compensated_sum(out.weights_);
    return out;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
    if (!(mass_ > 0.0)) throw InputError("cannot normalize a zero-mass measure");
    return scaled(1.0 / mass_);
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
    return dim_ == other.dim_ && coords_ == other.coords_ && weights_ == other.weights_;
}

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != nu.dim()) throw InputError("convolution of measures of different dimension");
    const std::size_t d = mu.dim();
    const std::size_t pairs = mu.size() * nu.size();
    if (pairs > kMaxConvolutionPairs) throw BudgetError("convolution exceeds atom budget");
    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve(pairs * d);
    weights.reserve(pairs);
    for (std::size_t a = 0; a < mu.size(); ++a) {
        const auto x = mu.point(a);
        for (std::size_t b = 0; b < nu.size(); ++b) {
            const auto y = nu.point(b);
            for (std::size_t j = 0; j < d; ++j) coords.push_back(x[j] + y[j]);
            weights.push_back(mu.weight(a) * nu.weight(b));
        }
    }
    const MergePolicy policy =
        (mu.policy() == MergePolicy::Quantized || nu.policy() == MergePolicy::Quantized)
            ? MergePolicy::Quantized
            : MergePolicy::Exact;
    return DiscreteMeasure::from_flat(d, std::move(coords), std::move(weights), policy);
}

DiscreteMeasure add(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.empty()) return nu;
    if (nu.empty()) return mu;
    if (mu.dim() != nu.dim()) throw InputError("sum of measures of different dimension");
    std::vector<double> coords(mu.coords().begin(), mu.coords().end());
    coords.insert(coords.end(), nu.coords().begin(), nu.coords().end());
    std::vector<double> weights(mu.weights().begin(), mu.weights().end());
    weights.insert(weights.end(), nu.weights().begin(), nu.weights().end());
    return DiscreteMeasure::from_flat(mu.dim(), std::move(coords), std::move(weights), mu.policy());
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const Transform& t) {
    const std::size_t d = mu.dim();
    std::vector<double> weights(mu.weights().begin(), mu.weights().end());
    if (const auto* r = std::get_if<ScaleVector>(&t)) {
        if (r->size() != d) throw InputError("scale dimension mismatch");
        std::vector<double> coords(mu.coords().begin(), mu.coords().end());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            for (std::size_t j = 0; j < d; ++j) coords[i * d + j] *= (*r)[j];
        }
        return DiscreteMeasure::from_flat(d, std::move(coords), std::move(weights), mu.policy());
    }
    if (const auto* tr = std::get_if<Translation>(&t)) {
        if (tr->shift.size() != d) throw InputError("translation dimension mismatch");
        std::vector<double> coords(mu.coords().begin(), mu.coords().end());
        for (std::size_t i = 0; i < mu.size(); ++i) {
            for (std::size_t j = 0; j < d; ++j) coords[i * d + j] += tr->shift[j];
        }
        return DiscreteMeasure::from_flat(d, std::move(coords), std::move(weights), mu.policy());
    }
    auto axes = std::get<Projection>(t).axes;
    std::sort(axes.begin(), axes.end());
    axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
    for (auto j : axes) {
        if (j >= d) throw InputError("projection axis out of range");
    }
    std::vector<double> coords;
    coords.reserve(mu.size() * axes.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto x = mu.point(i);
        for (auto j : axes) coords.push_back(x[j]);
    }
    return DiscreteMeasure::from_flat(axes.size(), std::move(coords), std::move(weights), mu.policy());
}

DiscreteMeasure bernoulli_power(const Point& x, const Point& y, std::size_t k) {
    if (k == 0) throw InputError("bernoulli_power requires k >= 1");
    if (x.size() != y.size()) throw InputError("bernoulli_power endpoints differ in dimension");
    if (x == y) throw InputError("bernoulli_power requires distinct endpoints");
    const std::size_t d = x.size();
    std::vector<double> coords;
    std::vector<double> weights;
    coords.reserve((k + 1) * d);
    weights.reserve(k + 1);
    const long double kk = static_cast<long double>(k);
    const long double log_norm = std::lgammal(kk + 1.0L) - kk * std::log(2.0L);
    for (std::size_t i = 0; i <= k; ++i) {
        const auto ii = static_cast<double>(i);
        for (std::size_t j = 0; j < d; ++j) {
            coords.push_back(static_cast<double>(k) * x[j] + ii * (y[j] - x[j]));
        }
        const long double li = static_cast<long double>(i);
        const long double lw = log_norm - std::lgammal(li + 1.0L) - std::lgammal(kk - li + 1.0L);
        weights.push_back(static_cast<double>(std::exp(lw)));
    }
    return DiscreteMeasure::from_flat(d, std::move(coords), std::move(weights));
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
    }
    return v;
}

} // namespace

DiscreteMeasure read_measure_csv(std::istream& in, MergePolicy policy) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!split_csv(line).empty()) break;
    }
    auto header = split_csv(line);
    if (header.size() < 2 || header.back() != "w") {
        throw InputError("measure CSV header must be `x1,...,xd,w`");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t j = 0; j < d; ++j) {
        if (header[j] != "x" + std::to_string(j + 1)) {
            throw InputError("measure CSV header column " + std::to_string(j + 1) + " must be x" +
                             std::to_string(j + 1));
        }
    }
    std::vector<double> coords;
    std::vector<double> weights;
    while (std::getline(in, line)) {
        ++line_no;
        auto cells = split_csv(line);
        if (cells.empty() || (cells.size() == 1 && cells[0].empty())) continue;
        if (cells.size() != d + 1) {
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(d + 1) + " columns");
        }
        for (std::size_t j = 0; j < d; ++j) coords.push_back(parse_number(cells[j], line_no));
        const double w = parse_number(cells[d], line_no);
        if (w < 0.0) throw InputError("line " + std::to_string(line_no) + ": negative weight");
        weights.push_back(w);
    }
    return DiscreteMeasure::from_flat(d, std::move(coords), std::move(weights), policy);
}

DiscreteMeasure read_measure_csv(const std::string& path, MergePolicy policy) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open measure file: " + path);
    return read_measure_csv(in, policy);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu) {
    for (std::size_t j = 0; j < mu.dim(); ++j) out << 'x' << (j + 1) << ',';
    out << "w\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (double v : mu.point(i)) out << format_double(v) << ',';
        out << format_double(mu.weight(i)) << '\n';
    }
}

} // namespace bconv
