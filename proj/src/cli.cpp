#include "bconv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bconv/algebraic.hpp"
#include "bconv/decompose.hpp"
#include "bconv/entropy.hpp"
#include "bconv/errors.hpp"
#include "bconv/format.hpp"
#include "bconv/parameters.hpp"
#include "bconv/selfaffine.hpp"

namespace bconv {

using json = nlohmann::ordered_json;

namespace {

std::string field_error(const std::string& field, const std::string& what) {
    return "field '" + field + "': " + what;
}

double get_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw InputError(field_error(field, "expected a number"));
    return v.get<double>();
}

std::int64_t get_integer(const json& v, const std::string& field) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::floor(x) == x && std::fabs(x) < 9e15) return static_cast<std::int64_t>(x);
        throw InputError(field_error(field, "translations must be integers"));
    }
    throw InputError(field_error(field, "expected an integer"));
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(field_error(key, "missing"));
    return *it;
}

std::pair<int, int> parse_range(const std::string& s, int def_lo, int def_hi) {
    if (s.empty()) return {def_lo, def_hi};
    try {
        const auto dots = s.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw InputError("");
            return {v, v};
        }
        const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) throw InputError("");
        const int hi = std::stoi(b, &used);
        if (used != b.size()) throw InputError("");
        if (hi < lo) throw InputError("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw InputError("bad range \"" + s + "\" (expected A..B)");
    }
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("bad integer \"" + tok + "\" in list \"" + s + "\"");
        }
    }
    if (out.empty()) throw InputError("empty integer list");
    return out;
}

std::string csv_cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return v.dump();
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }
    return csv_cell(json(v.dump()));
}

void render_csv(const json& doc, std::ostream& os) {
    for (const auto& [k, v] : doc["meta"].items()) os << "# " << k << "=" << csv_cell(v) << "\n";
    std::vector<json> rows;
    if (doc.contains("rows")) {
        for (const auto& r : doc["rows"]) rows.push_back(r);
    } else {
        json flat = json::object();
        for (const auto& [k, v] : doc.items()) {
            if (k != "meta" && !v.is_structured()) flat[k] = v;
        }
        rows.push_back(flat);
    }
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
        (void)v;
        os << (first ? "" : ",") << k;
        first = false;
    }
    os << "\n";
    for (const auto& r : rows) {
        first = true;
        for (const auto& [k, v] : r.items()) {
            (void)k;
            os << (first ? "" : ",") << csv_cell(v);
            first = false;
        }
        os << "\n";
    }
}

struct Context {
    const RunConfig& cfg;
    json meta = json::object();

    [[nodiscard]] SystemSpec spec() const {
        if (cfg.spec_path.empty()) throw InputError("--spec is required");
        return load_system_spec(cfg.spec_path);
    }
    [[nodiscard]] DiscreteMeasure measure() const {
        if (cfg.measure_path.empty()) throw InputError("--measure is required");
        return read_measure_csv(cfg.measure_path);
    }
    [[nodiscard]] ScaleVector lambda() const {
        if (!cfg.lambda.empty()) return ScaleVector(cfg.lambda);
        if (!cfg.spec_path.empty()) return spec().lambda();
        throw InputError("--lambda or --spec is required");
    }
    [[nodiscard]] BuildOptions build() const {
        BuildOptions b;
        if (cfg.arith == "exact") b.arithmetic = Arithmetic::Exact;
        else if (cfg.arith != "float") throw InputError("--arith must be float or exact");
        if (cfg.budget) b.budget = *cfg.budget;
        return b;
    }
    [[nodiscard]] QuadratureSpec quad() const {
        QuadratureSpec q;
        q.method = parse_quad_method(cfg.quad);
        q.offsets = cfg.offsets;
        q.seed = cfg.seed;
        if (cfg.budget) q.cell_budget = *cfg.budget;
        return q;
    }
};

json cmd_dim(Context& ctx) {
    const auto spec = ctx.spec();
    const auto [lo, hi] = parse_range(ctx.cfg.n_range, 1, 10);
    const auto opt = ctx.build();
    const auto lyap = lyapunov_dimension(spec);
    json rows = json::array();
    for (int n = lo; n <= hi; ++n) {
        const auto k = kappa_estimate(spec, n, opt);
        rows.push_back({{"n", n},
                        {"H_bits", k.entropy_bits},
                        {"kappa_est", k.kappa},
                        {"dim_est", dim_from_kappa(k.kappa, spec.lambda())},
                        {"lyapunov", lyap.dim},
                        {"gamma", lyap.gamma},
                        {"method", "enumeration-" + arithmetic_name(opt.arithmetic)}});
        if (!k.warning.empty()) ctx.meta["warning"] = k.warning;
    }
    ctx.meta["m"] = lyap.m;
    ctx.meta["dim_est_note"] = "estimate under full-projection assumption";
    return {{"rows", rows}};
}

json cmd_entropy(Context& ctx) {
    const auto mu = ctx.measure();
    json doc;
    if (!ctx.cfg.r.empty()) {
        const ScaleVector r(ctx.cfg.r);
        const auto key = Keying::grid(r, Point(r.size(), 0.0));
        doc["partition"] = key.name();
        doc["value"] = partition_entropy(mu, key);
    } else if (!ctx.cfg.n_range.empty()) {
        const auto [n, hi] = parse_range(ctx.cfg.n_range, 0, 0);
        (void)hi;
        const auto key = Keying::en(n, ctx.lambda());
        doc["partition"] = key.name();
        doc["value"] = partition_entropy(mu, key);
    } else {
        doc["partition"] = "atoms";
        doc["value"] = shannon_entropy(mu);
    }
    doc["method"] = "exact";
    return doc;
}

json cmd_avg_entropy(Context& ctx) {
    const auto mu = ctx.measure();
    if (ctx.cfg.r.empty()) throw InputError("--r is required");
    const ScaleVector r(ctx.cfg.r);
    const auto q = ctx.quad();
    const auto rep = ctx.cfg.r2.empty() ? avg_entropy(mu, r, q) : avg_cond_entropy(mu, r, ScaleVector(ctx.cfg.r2), q);
    return {{"value", rep.value},
            {"method", method_name(rep.method)},
            {"offsets_used", rep.offsets_used},
            {"error_bound", rep.error_bound}};
}

json cmd_rw_entropy(Context& ctx) {
    const auto spec = ctx.spec();
    const auto [lo, hi] = parse_range(ctx.cfg.n_range, 1, 10);
    const auto opt = ctx.build();
    json rows = json::array();
    for (int n = lo; n <= hi; ++n) {
        const auto r = rw_entropy_upper(spec, n, opt);
        rows.push_back({{"n", n},
                        {"value", r.value},
                        {"words", r.words},
                        {"classes", r.classes},
                        {"verdict", r.verdict},
                        {"method", "enumeration-" + arithmetic_name(r.arithmetic)}});
    }
    return {{"rows", rows}};
}

json cmd_overlap(Context& ctx) {
    const auto spec = ctx.spec();
    const auto [lo, hi] = parse_range(ctx.cfg.n_range, 12, 12);
    (void)lo;
    const auto r = exact_overlap_depth(spec, hi, ctx.cfg.budget.value_or(std::uint64_t{1} << 24));
    json axes = json::array();
    for (const auto& a : r.per_axis) axes.push_back(a ? json(*a) : json(nullptr));
    return {{"n_max", r.n_max},
            {"per_axis", axes},
            {"joint", r.joint ? json(*r.joint) : json(nullptr)},
            {"method", "exact"}};
}

json cmd_separation(Context& ctx) {
    const auto spec = ctx.spec();
    const auto [lo, hi] = parse_range(ctx.cfg.n_range, 1, 10);
    const auto opt = ctx.build();
    json rows = json::array();
    for (const auto& row : separation_profile(spec, hi, opt)) {
        if (row.n < lo) continue;
        rows.push_back({{"n", row.n},
                        {"axis", row.axis + 1},
                        {"delta", row.delta},
                        {"c", row.c},
                        {"exact_collision", row.exact_collision},
                        {"method", "enumeration-" + arithmetic_name(opt.arithmetic)}});
    }
    return {{"rows", rows}};
}

json cmd_nonsat(Context& ctx) {
    const auto [lo, hi] = parse_range(ctx.cfg.n_range, 0, 8);
    DiscreteMeasure mu;
    ScaleVector lam;
    if (!ctx.cfg.measure_path.empty()) {
        mu = ctx.measure();
        lam = ctx.lambda();
    } else {
        const auto spec = ctx.spec();
        const int level = ctx.cfg.level.value_or(hi + ctx.cfg.m);
        mu = build_level_n(spec, level, ctx.build());
        lam = spec.lambda();
        ctx.meta["level"] = level;
    }
    const auto rep = non_saturation_profile(mu, lam, ctx.cfg.eps, ctx.cfg.m, lo, hi);
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"axis", r.axis + 1},
                        {"n", r.n},
                        {"value", r.value},
                        {"threshold", r.threshold},
                        {"below", r.below},
                        {"method", "exact"}});
    }
    ctx.meta["non_saturated"] = rep.non_saturated;
    return {{"non_saturated", rep.non_saturated}, {"rows", rows}};
}

json decomposition_json(const Decomposition& d) {
    json pairs = json::array();
    std::size_t violations = 0;
    for (const auto& p : d.pairs) {
        if (!p.window_ok) ++violations;
        pairs.push_back({{"x", p.x},
                         {"y", p.y},
                         {"mass", p.mass},
                         {"rescaled_distance", p.rescaled_distance},
                         {"window_distance", p.window_distance},
                         {"window_ok", p.window_ok}});
    }
    return {{"n", d.scale_n},
            {"N", d.scale_N},
            {"paired_mass", d.paired_mass},
            {"theta_mass", d.theta.mass()},
            {"window", {d.lower, d.upper}},
            {"eps_window_violations", violations},
            {"method", d.method},
            {"optimality_gap", d.optimality_gap},
            {"pairs", pairs}};
}

json cmd_decompose(Context& ctx) {
    const auto nu = ctx.measure();
    const auto lam = ctx.lambda();
    const auto [n, hi] = parse_range(ctx.cfg.n_range, 1, 1);
    (void)hi;
    const auto d = bernoulli_decompose(nu, lam, n, ctx.cfg.N, ctx.cfg.eps);
    if (ctx.cfg.format == "csv") {
        json rows = json::array();
        for (const auto& p : d.pairs) {
            json row;
            for (std::size_t j = 0; j < p.x.size(); ++j) row["x" + std::to_string(j + 1)] = p.x[j];
            for (std::size_t j = 0; j < p.y.size(); ++j) row["y" + std::to_string(j + 1)] = p.y[j];
            row["mass"] = p.mass;
            row["rescaled_distance"] = p.rescaled_distance;
            row["window_distance"] = p.window_distance;
            row["window_ok"] = p.window_ok;
            row["method"] = d.method;
            rows.push_back(row);
        }
        ctx.meta["paired_mass"] = d.paired_mass;
        ctx.meta["theta_mass"] = d.theta.mass();
        return {{"rows", rows}};
    }
    return decomposition_json(d);
}

json cmd_increase(Context& ctx) {
    const auto mu = ctx.measure();
    if (ctx.cfg.nu_path.empty()) throw InputError("--nu is required");
    const auto nu = read_measure_csv(ctx.cfg.nu_path);
    const auto lam = ctx.lambda();
    const auto q = ctx.quad();
    double t1 = 0, t2 = 0;
    int n = 0, N = ctx.cfg.N;
    const bool by_level = !ctx.cfg.t1 && !ctx.cfg.t2;
    if (by_level) {
        n = parse_range(ctx.cfg.n_range, 2, 2).first;
        t2 = n;
        t1 = n - N;
    } else {
        if (!ctx.cfg.t1 || !ctx.cfg.t2) throw InputError("--t1 and --t2 must be given together");
        t1 = *ctx.cfg.t1;
        t2 = *ctx.cfg.t2;
    }
    const auto r = entropy_increase_gap(mu, nu, lam, t1, t2, q);
    json row{{"fixture", std::filesystem::path(ctx.cfg.nu_path).stem().string()}};
    if (by_level) {
        const auto seq = s_sequence(lam, static_cast<std::size_t>(n));
        const double h = avg_cond_entropy(nu, seq[static_cast<std::size_t>(n)], seq[static_cast<std::size_t>(n - N)], q).value;
        const auto d = bernoulli_decompose(nu, lam, n, N, ctx.cfg.eps);
        row["n"] = n;
        row["N"] = N;
        row["h"] = h;
        row["paired_mass"] = d.paired_mass;
    } else {
        row["t1"] = t1;
        row["t2"] = t2;
    }
    row["gain"] = r.gain;
    row["beta"] = r.beta;
    row["method"] = method_name(r.conv.method);
    return row;
}

json cmd_tube(Context& ctx) {
    const auto lam = ctx.lambda();
    if (ctx.cfg.x.empty() || ctx.cfg.y.empty()) throw InputError("--x and --y are required");
    const auto rows_in = tube_entropy_selfconv(ctx.cfg.x, ctx.cfg.y, ctx.cfg.k, lam, ctx.cfg.m, ctx.cfg.l);
    json rows = json::array();
    for (const auto& r : rows_in) {
        rows.push_back({{"axis", r.axis + 1},
                        {"a", r.a},
                        {"value", r.value},
                        {"chi", r.chi},
                        {"best", r.best},
                        {"method", "exact"}});
    }
    return {{"rows", rows}};
}

json cmd_mahler(Context& ctx) {
    if (ctx.cfg.poly.empty()) throw InputError("--poly is required");
    const auto p = IntPolynomial::parse(ctx.cfg.poly);
    return {{"poly", p.pretty()}, {"mahler", mahler_measure(p)}, {"method", "certified"}};
}

json cmd_poly_search(Context& ctx) {
    const auto [n, hi] = parse_range(ctx.cfg.n_range, 4, 4);
    (void)hi;
    const auto strategy = parse_strategy(ctx.cfg.strategy);
    const auto coeffs = parse_int_list(ctx.cfg.coeffs);
    const auto list = smallest_value_polys(ctx.cfg.xi, n, coeffs, ctx.cfg.k, strategy,
                                           ctx.cfg.budget.value_or(std::uint64_t{1} << 26));
    json rows = json::array();
    std::size_t rank = 1;
    for (const auto& c : list) {
        rows.push_back({{"rank", rank++},
                        {"poly", c.poly.to_string()},
                        {"value", static_cast<double>(c.value)},
                        {"method", strategy_name(strategy)}});
    }
    return {{"rows", rows}};
}

json cmd_approx(Context& ctx) {
    std::optional<SystemSpec> spec;
    if (!ctx.cfg.spec_path.empty()) {
        spec.emplace(ctx.spec());
    } else {
        if (ctx.cfg.lambda.empty()) throw InputError("--lambda or --spec is required");
        const std::size_t d = ctx.cfg.lambda.size();
        spec.emplace(ScaleVector(ctx.cfg.lambda),
                     std::vector<AffineMap>{{std::vector<std::int64_t>(d, -1), 0.5},
                                            {std::vector<std::int64_t>(d, 1), 0.5}});
    }
    const auto [n, hi] = parse_range(ctx.cfg.n_range, 3, 3);
    (void)hi;
    ApproxOptions o;
    o.strategy = parse_strategy(ctx.cfg.strategy);
    o.candidates = ctx.cfg.candidates;
    o.rw_n = ctx.cfg.rw_n;
    if (ctx.cfg.budget) o.budget = *ctx.cfg.budget;
    const auto r = approximate_parameters(*spec, n, o);
    json axes = json::array();
    for (const auto& a : r.axes) {
        axes.push_back({{"axis", a.axis + 1},
                        {"found", a.found},
                        {"poly", a.poly.to_string()},
                        {"value", static_cast<double>(a.value)},
                        {"eta", a.eta},
                        {"distance", a.distance},
                        {"minpoly", a.exact ? json(a.exact->minpoly().to_string()) : json(nullptr)},
                        {"rank", a.rank},
                        {"note", a.note}});
    }
    json doc{{"n", r.n},
             {"success", r.success},
             {"eta", r.eta},
             {"eta_in_omega", r.eta_in_omega},
             {"max_distance", r.max_distance},
             {"axes", axes},
             {"method", strategy_name(o.strategy)}};
    if (r.rw_entropy) doc["rw_entropy"] = *r.rw_entropy;
    if (!r.rw_note.empty()) doc["rw_note"] = r.rw_note;
    return doc;
}

bool table_command(const std::string& c) {
    return c == "dim" || c == "rw-entropy" || c == "separation" || c == "nonsat" || c == "tube" ||
           c == "poly-search";
}

} // namespace

SystemSpec parse_system_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("system spec must be a JSON object");
    const auto& jl = require(doc, "lambda");
    if (!jl.is_array() || jl.empty()) throw InputError(field_error("lambda", "expected a nonempty array"));
    std::vector<double> lam;
    for (std::size_t j = 0; j < jl.size(); ++j) lam.push_back(get_number(jl[j], "lambda[" + std::to_string(j) + "]"));
    const std::size_t d = lam.size();

    const auto& jm = require(doc, "maps");
    const auto& jp = require(doc, "p");
    if (!jm.is_array() || jm.empty()) throw InputError(field_error("maps", "expected a nonempty array"));
    if (!jp.is_array() || jp.size() != jm.size()) throw InputError(field_error("p", "expected one weight per map"));
    std::vector<AffineMap> maps;
    for (std::size_t i = 0; i < jm.size(); ++i) {
        const std::string f = "maps[" + std::to_string(i) + "]";
        AffineMap m;
        if (jm[i].is_array()) {
            for (std::size_t j = 0; j < jm[i].size(); ++j) m.a.push_back(get_integer(jm[i][j], f + "[" + std::to_string(j) + "]"));
        } else if (d == 1) {
            m.a.push_back(get_integer(jm[i], f));
        } else {
            throw InputError(field_error(f, "expected an array of " + std::to_string(d) + " integers"));
        }
        if (m.a.size() != d) throw InputError(field_error(f, "expected " + std::to_string(d) + " entries"));
        m.p = get_number(jp[i], "p[" + std::to_string(i) + "]");
        maps.push_back(std::move(m));
    }

    auto it = doc.find("minpoly");
    if (it == doc.end() || it->is_null()) return SystemSpec(ScaleVector(lam), maps);
    json polys = *it;
    if (d == 1 && polys.is_array() && !polys.empty() && polys[0].is_number()) polys = json::array({polys});
    if (!polys.is_array() || polys.size() != d) {
        throw InputError(field_error("minpoly", "expected one polynomial per axis"));
    }
    std::vector<IntPolynomial> mp;
    for (std::size_t j = 0; j < d; ++j) {
        const std::string f = "minpoly[" + std::to_string(j) + "]";
        if (!polys[j].is_array() || polys[j].empty()) throw InputError(field_error(f, "expected a coefficient array"));
        std::vector<long long> c;
        for (std::size_t k = 0; k < polys[j].size(); ++k) c.push_back(get_integer(polys[j][k], f + "[" + std::to_string(k) + "]"));
        mp.push_back(IntPolynomial::from_ints(c));
    }
    return SystemSpec(ScaleVector(lam), maps, mp);
}

SystemSpec load_system_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open spec file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_system_spec(ss.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Context ctx{cfg};
    json doc;
    reset_boundary_nudge_count();
    try {
        if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json") {
            throw InputError("--format must be csv or json");
        }
        const auto& c = cfg.command;
        if (c == "dim") doc = cmd_dim(ctx);
        else if (c == "entropy") doc = cmd_entropy(ctx);
        else if (c == "avg-entropy") doc = cmd_avg_entropy(ctx);
        else if (c == "rw-entropy") doc = cmd_rw_entropy(ctx);
        else if (c == "overlap") doc = cmd_overlap(ctx);
        else if (c == "separation") doc = cmd_separation(ctx);
        else if (c == "nonsat") doc = cmd_nonsat(ctx);
        else if (c == "decompose") doc = cmd_decompose(ctx);
        else if (c == "increase") doc = cmd_increase(ctx);
        else if (c == "tube") doc = cmd_tube(ctx);
        else if (c == "mahler") doc = cmd_mahler(ctx);
        else if (c == "poly-search") doc = cmd_poly_search(ctx);
        else if (c == "approx") doc = cmd_approx(ctx);
        else throw InputError("unknown command " + c);
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const CertificationError& e) {
        err << "certification failed: " << e.what() << "\n";
        return 1;
    }

    json meta = json::object();
    meta["command"] = cfg.command;
    meta["seed"] = cfg.seed;
    meta["quad"] = cfg.quad;
    meta["boundary_nudges"] = boundary_nudge_count();
    for (auto& [k, v] : ctx.meta.items()) meta[k] = v;
    json full{{"meta", meta}};
    for (auto& [k, v] : doc.items()) full[k] = v;

    const std::string format = cfg.format.empty() ? (table_command(cfg.command) ? "csv" : "json") : cfg.format;
    std::ostringstream rendered;
    if (format == "csv") render_csv(full, rendered);
    else rendered << full.dump(2) << "\n";

    if (cfg.out.empty()) {
        out << rendered.str();
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << "input error: cannot write " << cfg.out << "\n";
            return 1;
        }
        f << rendered.str();
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entropy and dimension experiments for Bernoulli convolutions and diagonal self-affine measures",
                 "bconv"};
    app.require_subcommand(1);
    RunConfig cfg;

    struct Flags {
        bool spec = false, measure = false, n = false, r = false, lambda = false, quad = false, t = false,
             eps = false, m = false, N = false, budget = false, arith = false;
    };
    auto add = [&](const std::string& name, const std::string& help, Flags f) {
        auto* s = app.add_subcommand(name, help);
        s->option_defaults()->always_capture_default();
        if (f.spec) s->add_option("--spec", cfg.spec_path, "system spec JSON");
        if (f.measure) s->add_option("--measure", cfg.measure_path, "measure CSV");
        if (f.n) s->add_option("--n", cfg.n_range, "level or range A..B");
        if (f.r) {
            s->add_option("--r", cfg.r, "scale vector v1,...,vd")->delimiter(',');
            s->add_option("--r2", cfg.r2, "coarse scale vector")->delimiter(',');
        }
        if (f.lambda) s->add_option("--lambda", cfg.lambda, "contraction vector")->delimiter(',');
        if (f.quad) {
            s->add_option("--quad", cfg.quad, "auto|exact|qmc");
            s->add_option("--offsets", cfg.offsets, "qmc offsets");
            s->add_option("--seed", cfg.seed, "qmc seed");
        }
        if (f.t) {
            s->add_option("--t1", cfg.t1, "coarse exponent");
            s->add_option("--t2", cfg.t2, "fine exponent");
        }
        if (f.eps) s->add_option("--eps", cfg.eps, "window / threshold parameter");
        if (f.m) s->add_option("--m", cfg.m, "number of refinement levels");
        if (f.N) s->add_option("--N", cfg.N, "scale gap");
        if (f.budget) s->add_option("--budget", cfg.budget, "atom / cell / search budget");
        if (f.arith) s->add_option("--arith", cfg.arith, "float|exact");
        s->add_option("--out", cfg.out, "output path (default stdout)");
        s->add_option("--format", cfg.format, "csv|json");
        return s;
    };

    add("dim", "kappa and dimension estimates over n", {.spec = true, .n = true, .budget = true, .arith = true});
    add("entropy", "partition entropy of a measure", {.spec = true, .measure = true, .n = true, .r = true, .lambda = true});
    add("avg-entropy", "average entropy H(mu; r) or H(mu; r | r2)", {.measure = true, .r = true, .quad = true, .budget = true});
    add("rw-entropy", "random-walk entropy upper bounds", {.spec = true, .n = true, .budget = true, .arith = true});
    add("overlap", "exact overlap depth", {.spec = true, .n = true, .budget = true});
    add("separation", "minimal word separation", {.spec = true, .n = true, .budget = true, .arith = true});
    auto* nonsat = add("nonsat", "non-saturation profile",
                       {.spec = true, .measure = true, .n = true, .lambda = true, .eps = true, .m = true, .budget = true, .arith = true});
    nonsat->add_option("--level", cfg.level, "level of the measure built from --spec");
    add("decompose", "Bernoulli pair decomposition", {.spec = true, .measure = true, .n = true, .lambda = true, .eps = true, .N = true});
    auto* inc = add("increase", "entropy increase under convolution",
                    {.spec = true, .measure = true, .n = true, .lambda = true, .quad = true, .t = true, .eps = true, .N = true, .budget = true});
    inc->add_option("--nu", cfg.nu_path, "second measure CSV");
    auto* tube = add("tube", "entropy of Bernoulli self-convolutions", {.spec = true, .lambda = true, .m = true});
    tube->add_option("--x", cfg.x, "first point")->delimiter(',')->required();
    tube->add_option("--y", cfg.y, "second point")->delimiter(',')->required();
    tube->add_option("--k", cfg.k, "number of convolution factors");
    tube->add_option("--l", cfg.l, "base level");
    auto* mahler = add("mahler", "Mahler measure", {});
    mahler->add_option("--poly", cfg.poly, "coefficients, constant term first")->required();
    auto* ps = add("poly-search", "small values of polynomials", {.n = true, .budget = true});
    ps->add_option("--xi", cfg.xi, "evaluation point")->required();
    ps->add_option("--coeffs", cfg.coeffs, "allowed coefficients");
    ps->add_option("--strategy", cfg.strategy, "exhaustive|mitm|bnb");
    ps->add_option("--k", cfg.k, "number of results");
    auto* ap = add("approx", "approximate lambda by algebraic parameters", {.spec = true, .n = true, .lambda = true, .budget = true});
    ap->add_option("--strategy", cfg.strategy, "exhaustive|mitm|bnb");
    ap->add_option("--candidates", cfg.candidates, "candidates examined per axis");
    ap->add_option("--rw-n", cfg.rw_n, "level for the random-walk entropy of the result");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    }
    for (auto* s : app.get_subcommands()) cfg.command = s->get_name();
    return dispatch(cfg, out, err);
}

} // namespace bconv
