#pragma once

#include "qgb/io.hpp"

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

namespace qgb::cli {

enum ExitCode { ok = 0, warning = 1, config_error = 2, numerical_failure = 3 };

struct Globals {
    std::uint64_t seed = 42;
    int threads = 0;
    int digits = 6;
    std::map<std::string, double> tolerances;
    std::string out;

    double tolerance(const std::string& key) const;
};

// Rounds every floating-point number to the configured number of significant digits.
Json rounded(const Json& j, int digits);

// Path to a JSON file, or inline JSON text starting with '{' or '['.
Json json_argument(const std::string& arg);

std::map<std::string, double> parse_tolerances(const std::string& spec);

struct SelftestOptions {
    std::string docs_dir;
    bool quick = false;
};

Json run_selftest(const Globals& g, const SelftestOptions& opts);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qgb::cli
