#pragma once

#include "pdsq/analytic.hpp"
#include "pdsq/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdsq::cli {

using json = nlohmann::json;

/// Inclusive uniform grid of n points.
struct Range {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    /// ConfigError unless min < max and n >= 2.
    void validate(std::string_view what) const;
    double at(int i) const;
    std::vector<double> points() const;
};

/// "min:max:n".
Range parse_range(std::string_view text);

enum class Quantity { pnd, mean_n, g2, var_x, var_p, uncertainty_product, q, wigner };

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view text);

/// State parameters as entered. Setting psi0 or psi1 selects the
/// lambda_j = arg(beta) = 0, theta_j = 2 psi_j convention.
struct StateInput {
    double beta_abs = 0.0;
    double beta_phase = 0.0;
    double r0 = 0.0;
    double theta0 = 0.0;
    double lambda0 = 0.0;
    double r1 = 0.0;
    double theta1 = 0.0;
    double lambda1 = 0.0;
    std::optional<double> psi0;
    std::optional<double> psi1;

    bool psi_mode() const { return psi0.has_value() || psi1.has_value(); }
    /// ConfigError if psi is combined with theta, lambda or beta phase.
    PDState build() const;
    json to_json() const;
};

/// Names accepted as scan variables.
inline constexpr std::string_view kScanVariables[] = {"beta-abs", "beta-phase", "r0", "r1",
                                                      "theta0",   "theta1",     "psi0", "psi1"};

StateInput with_variable(StateInput in, std::string_view variable, double value);

struct ScanSpec {
    Quantity quantity = Quantity::g2;
    StateInput state;
    std::string variable = "beta-abs";
    Range range{0.0, 2.0, 101};
    /// Phase-space point for q and wigner scans (x, p; alpha = (x + i p)/sqrt 2 for wigner,
    /// alpha = x + i p for q).
    double x = 0.0;
    double p = 0.0;
    std::optional<int> oracle_dim;

    void validate() const;
};

struct PndSpec {
    StateInput state;
    /// Defaults to truncation_nmax, capped below the oracle dimension.
    std::optional<int> n_max;
    std::optional<int> oracle_dim;
};

struct GridSpec {
    Quantity quantity = Quantity::q;
    StateInput state;
    Range x{-4.0, 4.0, 81};
    Range y{-4.0, 4.0, 81};
    std::optional<int> oracle_dim;

    void validate() const;
};

struct EvolveSpec {
    dynamics::HamiltonianParams hamiltonian;
    cplx beta{0.0, 0.0};
    Range t{0.0, 1.0, 11};
    int dim = 128;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    json metadata = json::object();
};

/// Row-major values, values[iy * x.n + ix]. For q the axes are Re alpha and
/// Im alpha; for wigner they are x and p.
struct Grid2D {
    Range x;
    Range y;
    std::vector<double> values;
    json metadata = json::object();

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * x.n + ix]; }
};

Table run_pnd(const PndSpec& spec);
Table run_scan(const ScanSpec& spec);
/// ConsistencyError if a Q value falls below -1e-12.
Grid2D run_grid(const GridSpec& spec);
/// Fidelity column only for omega = 0.
Table run_evolve(const EvolveSpec& spec);

struct FigureOptions {
    std::optional<Range> grid_x;
    std::optional<Range> grid_y;
    std::optional<Range> scan;
    std::optional<int> oracle_dim;
};

using Output = std::variant<Table, Grid2D>;

Output run_figure(int number, const FigureOptions& options = {});

/// Grid points strictly inside the grid that are >= all 8 neighbours and
/// at least `fraction` of the global maximum.
std::vector<std::pair<int, int>> local_maxima(const Grid2D& grid, double fraction);

enum class Format { csv, json };

Format parse_format(std::string_view text);

/// Stamps metadata["generated"] with the current UTC time.
void write(std::ostream& os, const Output& out, Format format);

} // namespace pdsq::cli
