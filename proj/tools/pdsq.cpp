#include "pdsq/cli.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace pdsq;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kTruncation = 3 };

struct StateFlags {
    cli::StateInput in;
    double psi0 = 0.0;
    double psi1 = 0.0;
    CLI::Option* psi0_opt = nullptr;
    CLI::Option* psi1_opt = nullptr;

    void add(CLI::App* app) {
        app->add_option("--beta-abs", in.beta_abs, "|beta|");
        auto* phase = app->add_option("--beta-phase", in.beta_phase, "arg(beta)");
        app->add_option("--r0", in.r0, "even-sector squeeze magnitude");
        app->add_option("--r1", in.r1, "odd-sector squeeze magnitude");
        auto* t0 = app->add_option("--theta0", in.theta0);
        auto* l0 = app->add_option("--lambda0", in.lambda0);
        auto* t1 = app->add_option("--theta1", in.theta1);
        auto* l1 = app->add_option("--lambda1", in.lambda1);
        psi0_opt = app->add_option("--psi0", psi0, "sets lambda0 = arg(beta) = 0, theta0 = 2 psi0");
        psi1_opt = app->add_option("--psi1", psi1, "sets lambda1 = arg(beta) = 0, theta1 = 2 psi1");
        for (auto* psi : {psi0_opt, psi1_opt})
            for (auto* other : {phase, t0, l0, t1, l1})
                psi->excludes(other);
    }

    cli::StateInput resolve() const {
        cli::StateInput out = in;
        if (*psi0_opt)
            out.psi0 = psi0;
        if (*psi1_opt)
            out.psi1 = psi1;
        return out;
    }
};

struct OutputFlags {
    std::string path;
    std::string format = "csv";

    void add(CLI::App* app) {
        app->add_option("--out", path, "output file (default stdout)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    void emit(const cli::Output& out) const {
        const auto fmt = cli::parse_format(format);
        if (path.empty()) {
            cli::write(std::cout, out, fmt);
            return;
        }
        std::ofstream file(path);
        if (!file)
            throw ConfigError("cannot open '" + path + "' for writing");
        cli::write(file, out, fmt);
    }
};

struct OracleFlags {
    bool enabled = false;
    int dim = 256;

    void add(CLI::App* app) {
        app->add_flag("--oracle", enabled, "add truncated-Fock oracle values");
        app->add_option("--dim", dim, "oracle Fock dimension");
    }

    std::optional<int> value() const { return enabled ? std::optional<int>(dim) : std::nullopt; }
};

cli::Range range_flag(const std::string& text, const cli::Range& fallback) {
    return text.empty() ? fallback : cli::parse_range(text);
}

int run(int argc, char** argv) {
    CLI::App app{"Parity-dependent squeezed states: closed forms, oracle checks and figure data"};
    app.require_subcommand(1);

    auto* pnd = app.add_subcommand("pnd", "photon-number distribution");
    StateFlags pnd_state;
    OutputFlags pnd_out;
    OracleFlags pnd_oracle;
    int n_max = -1;
    pnd_state.add(pnd);
    pnd_out.add(pnd);
    pnd_oracle.add(pnd);
    pnd->add_option("--n-max", n_max, "largest n (default from the truncation rule)");

    auto* scan = app.add_subcommand("scan", "scalar quantity along one parameter");
    StateFlags scan_state;
    OutputFlags scan_out;
    OracleFlags scan_oracle;
    std::string scan_quantity = "g2";
    std::string scan_variable = "beta-abs";
    std::string scan_range;
    double scan_x = 0.0;
    double scan_p = 0.0;
    scan_state.add(scan);
    scan_out.add(scan);
    scan_oracle.add(scan);
    scan->add_option("--quantity", scan_quantity, "mean_n, g2, var_x, var_p, uncertainty_product, q, wigner");
    scan->add_option("--variable", scan_variable, "beta-abs, beta-phase, r0, r1, theta0, theta1, psi0, psi1");
    scan->add_option("--range", scan_range, "min:max:n");
    scan->add_option("--x", scan_x, "phase-space point for q (Re alpha) and wigner (x)");
    scan->add_option("--p", scan_p, "phase-space point for q (Im alpha) and wigner (p)");

    auto* grid = app.add_subcommand("grid", "Q or Wigner function on a 2D grid");
    StateFlags grid_state;
    OutputFlags grid_out;
    OracleFlags grid_oracle;
    std::string grid_quantity = "q";
    std::string grid_x;
    std::string grid_y;
    grid_state.add(grid);
    grid_out.add(grid);
    grid_oracle.add(grid);
    grid->add_option("--quantity", grid_quantity, "q or wigner");
    grid->add_option("--grid-x", grid_x, "min:max:n");
    grid->add_option("--grid-y", grid_y, "min:max:n");

    auto* evolve = app.add_subcommand("evolve", "evolution of a coherent state under the parity-dependent Hamiltonian");
    OutputFlags evolve_out;
    cli::EvolveSpec ev;
    double ev_beta_abs = 1.0;
    double ev_beta_phase = 0.0;
    double g0[2] = {0.0, 0.0};
    double g1[2] = {0.0, 0.0};
    std::string ev_time;
    evolve_out.add(evolve);
    evolve->add_option("--omega", ev.hamiltonian.omega);
    evolve->add_option("--g0-re", g0[0]);
    evolve->add_option("--g0-im", g0[1]);
    evolve->add_option("--g1-re", g1[0]);
    evolve->add_option("--g1-im", g1[1]);
    evolve->add_option("--beta-abs", ev_beta_abs);
    evolve->add_option("--beta-phase", ev_beta_phase);
    evolve->add_option("--time", ev_time, "min:max:n");
    evolve->add_option("--dim", ev.dim, "Fock dimension");

    auto* validate = app.add_subcommand("validate", "seeded analytic-vs-oracle suite");
    std::uint64_t seed = 1;
    int cases = 50;
    std::string validate_path;
    validate->add_option("--seed", seed);
    validate->add_option("--cases", cases);
    validate->add_option("--out", validate_path, "report file (default stdout)");

    auto* figure = app.add_subcommand("figure", "data for one of the twelve figures");
    OutputFlags figure_out;
    OracleFlags figure_oracle;
    int figure_number = 0;
    std::string fig_x;
    std::string fig_y;
    std::string fig_range;
    figure_out.add(figure);
    figure_oracle.add(figure);
    figure->add_option("number", figure_number, "1..12")->required()->check(CLI::Range(1, 12));
    figure->add_option("--grid-x", fig_x, "min:max:n (figures 8-12)");
    figure->add_option("--grid-y", fig_y, "min:max:n (figures 8-12)");
    figure->add_option("--range", fig_range, "|beta| scan min:max:n (figures 3-7)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (pnd->parsed()) {
        cli::PndSpec spec;
        spec.state = pnd_state.resolve();
        if (n_max >= 0)
            spec.n_max = n_max;
        spec.oracle_dim = pnd_oracle.value();
        pnd_out.emit(cli::run_pnd(spec));
    } else if (scan->parsed()) {
        cli::ScanSpec spec;
        spec.quantity = cli::parse_quantity(scan_quantity);
        spec.state = scan_state.resolve();
        spec.variable = scan_variable;
        spec.range = range_flag(scan_range, spec.range);
        spec.x = scan_x;
        spec.p = scan_p;
        spec.oracle_dim = scan_oracle.value();
        scan_out.emit(cli::run_scan(spec));
    } else if (grid->parsed()) {
        cli::GridSpec spec;
        spec.quantity = cli::parse_quantity(grid_quantity);
        spec.state = grid_state.resolve();
        spec.x = range_flag(grid_x, spec.x);
        spec.y = range_flag(grid_y, spec.y);
        spec.oracle_dim = grid_oracle.value();
        grid_out.emit(cli::run_grid(spec));
    } else if (evolve->parsed()) {
        ev.hamiltonian.g0 = {g0[0], g0[1]};
        ev.hamiltonian.g1 = {g1[0], g1[1]};
        ev.beta = std::polar(ev_beta_abs, ev_beta_phase);
        ev.t = range_flag(ev_time, ev.t);
        evolve_out.emit(cli::run_evolve(ev));
    } else if (validate->parsed()) {
        const auto report = validation::run(seed, cases);
        if (validate_path.empty()) {
            validation::print(std::cout, report);
        } else {
            std::ofstream file(validate_path);
            if (!file)
                throw ConfigError("cannot open '" + validate_path + "' for writing");
            validation::print(file, report);
        }
        return report.passed() ? kOk : kNumerical;
    } else if (figure->parsed()) {
        cli::FigureOptions opts;
        if (!fig_x.empty())
            opts.grid_x = cli::parse_range(fig_x);
        if (!fig_y.empty())
            opts.grid_y = cli::parse_range(fig_y);
        if (!fig_range.empty())
            opts.scan = cli::parse_range(fig_range);
        opts.oracle_dim = figure_oracle.value();
        figure_out.emit(cli::run_figure(figure_number, opts));
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const TruncationError& e) {
        std::cerr << "truncation failure: " << e.what() << '\n';
        return kTruncation;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsupportedCase& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}
