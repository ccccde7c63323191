#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace certint::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 1;
inline constexpr int not_converged = 2;  // enclose
inline constexpr int inconclusive = 2;   // flatness
inline constexpr int unverified_hypothesis = 3;
inline constexpr int falsified = 4;
inline constexpr int sandwich_failed = 5;
} // namespace exit_code

struct RunConfig {
    std::string command;
    std::string f;       // enclose / flatness
    std::string H;       // volterra
    std::string oracle;  // enclose: "dirichlet" or "thomae-like"
    bool zero_extend = false;
    double a = 0.0;
    double b = 1.0;
    double tol = 1e-6;
    std::size_t max_steps = 0;
    double C = 1.0;
    std::vector<int> n;
    std::vector<std::size_t> uniform;
    std::vector<std::size_t> random;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
};

/// Throws std::invalid_argument on a config violating the RunConfig
/// invariants for its command.
void validate(const RunConfig& cfg);

int cmd_enclose(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_volterra(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_flatness(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line (args[0] is the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seeded random partition of [a, b] into `blocks` subintervals.
std::vector<double> random_partition_points(double a, double b, std::size_t blocks, std::uint64_t seed);

} // namespace certint::cli
