#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bconv/system.hpp"

namespace bconv {

/// Reads a system from JSON:
///   {"lambda": [...], "maps": [[a_1...], ...], "p": [...], "minpoly": [[c_0, c_1, ...], ...]}
/// `minpoly` is optional (one polynomial per axis, constant term first). For
/// d = 1 the translations and the polynomial may be given unnested.
[[nodiscard]] SystemSpec load_system_spec(const std::string& path);
[[nodiscard]] SystemSpec parse_system_spec(const std::string& text);

struct RunConfig {
    std::string command;
    std::string spec_path;
    std::string measure_path;
    std::string nu_path;
    std::string n_range;   ///< "A..B" or "A"
    std::vector<double> r;
    std::vector<double> r2;
    std::vector<double> lambda;
    std::optional<double> t1;
    std::optional<double> t2;
    double eps = 0.1;
    int m = 4;
    int N = 1;
    int l = 0;
    std::optional<int> level;
    std::string quad = "auto";
    std::size_t offsets = 4096;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;    ///< empty: the command's default
    std::optional<std::uint64_t> budget;
    std::string arith = "float";
    std::string poly;
    std::vector<double> x;
    std::vector<double> y;
    std::size_t k = 1;
    double xi = 0.0;
    std::string coeffs = "-1,0,1";
    std::string strategy = "mitm";
    std::size_t candidates = 16;
    int rw_n = 0;
};

/// Runs one command. Returns 0 on success, 1 on input errors, 2 on budget refusals.
int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses the command line and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bconv
