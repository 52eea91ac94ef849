#pragma once

// Command-line front end. `run_cli` is the whole program minus process
// plumbing so tests can drive it in-process.
//
//   loclab check   <family>  [--seed --trials --tol --env-dims --theta --dim --format]
//   loclab extract <family>  [same flags]
//   loclab gisin   <map>     [--dim --pairs --scenarios --seed --tol --theta --format]
//   loclab zoo list | describe <name>
//
// <family>/<map> is a JSON file path or `zoo:<name>`. Exit codes: 0 pass,
// 1 violation found, 2 input error (diagnostic on stderr).

#include "loclab/json_io.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace loclab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInputError = 2;

const char* version();

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    Json config;
    std::string version;
    std::optional<double> duration_seconds;  // only with --timing
};

Json to_json(const RunManifest& m);

struct CatalogEntry {
    std::string name;
    std::string kind;  // "family" or "map"
    std::string theory;
    std::string description;
    std::string expected;
};

/// Built-in families followed by built-in maps, in a fixed order.
const std::vector<CatalogEntry>& zoo_catalog();

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loclab
