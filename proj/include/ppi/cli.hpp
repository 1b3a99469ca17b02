#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppi/params.hpp"
#include "ppi/risk.hpp"

namespace ppi {

inline constexpr const char* library_version = "0.1.0";

enum ExitCode { exit_ok = 0, exit_validation_failed = 1, exit_input_error = 2 };

// "log:a:b:n", "lin:a:b:n", "list:v1,v2,..." or "v1,v2,..."
std::vector<double> parse_grid(const std::string& spec);

ModelParams load_scenario(const std::string& path);
CostMatrix load_cost(const std::string& path);

// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& s);

// args excludes the program name
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppi
