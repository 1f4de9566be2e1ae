#pragma once

#include "pdsq/analytic.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace pdsq::validation {

/// Tail weight accepted when sizing the oracle for a suite state.
inline constexpr double kOracleLeak = 1e-20;
inline constexpr int kOracleMaxDim = 4096;

/// |beta| <= 4, r_j <= 1.5, all angles uniform.
PDState random_state(std::mt19937_64& rng);

struct Check {
    std::string name;
    double tolerance = 0.0;
    double max_deviation = 0.0;
    int worst_case = -1;

    bool passed() const { return max_deviation <= tolerance; }
};

struct Case {
    PDState state;
    int oracle_dim = 0;
};

struct Report {
    std::uint64_t seed = 0;
    std::vector<Case> cases;
    std::vector<Check> checks;

    bool passed() const;
    /// ConfigError for an unknown name.
    const Check& check(std::string_view name) const;
};

/// Analytic results against the truncated-Fock oracle on `n_cases` seeded
/// random states. ConfigError for n_cases < 1.
Report run(std::uint64_t seed, int n_cases);

/// One line per check, then the parameters of every failing check's worst case.
void print(std::ostream& os, const Report& report);

} // namespace pdsq::validation
