#include "pdsq/cli.hpp"
#include "pdsq/errors.hpp"
#include "pdsq/validation.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

using namespace pdsq;
using cli::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string render(const cli::Output& out, cli::Format format = cli::Format::csv) {
    std::ostringstream os;
    cli::write(os, out, format);
    return os.str();
}

// Metadata line without the timestamp, followed by the body.
std::string without_timestamp(const std::string& csv) {
    const auto eol = csv.find('\n');
    json meta = json::parse(csv.substr(2, eol - 2));
    meta.erase("generated");
    return meta.dump() + csv.substr(eol);
}

std::size_t column(const cli::Table& t, const std::string& name) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    return static_cast<std::size_t>(it - t.columns.begin());
}

double column_min(const cli::Table& t, std::size_t c) {
    double m = INFINITY;
    for (const auto& row : t.rows)
        m = std::min(m, row[c]);
    return m;
}

int tool(const std::string& args) {
    const std::string cmd = std::string(PDSQ_TOOL) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("parse_range") {
    const auto r = cli::parse_range("-1.5:2:7");
    CHECK(r.min == -1.5);
    CHECK(r.max == 2.0);
    CHECK(r.n == 7);
    const auto pts = r.points();
    CHECK(pts.front() == -1.5);
    CHECK(pts.back() == 2.0);
    CHECK(pts[2] == doctest::Approx(-0.33333333333333));
    for (const char* bad : {"1:0:5", "0:1:1", "0:1", "0:1:2:3", "a:1:3", "0:1:x", "0:inf:3", ""})
        CHECK_THROWS_AS(cli::parse_range(bad), ConfigError);
}

TEST_CASE("quantity and format names") {
    for (auto q : {cli::Quantity::pnd, cli::Quantity::g2, cli::Quantity::uncertainty_product, cli::Quantity::wigner})
        CHECK(cli::parse_quantity(cli::to_string(q)) == q);
    CHECK_THROWS_AS(cli::parse_quantity("entropy"), ConfigError);
    CHECK(cli::parse_format("json") == cli::Format::json);
    CHECK_THROWS_AS(cli::parse_format("xml"), ConfigError);
}

TEST_CASE("StateInput") {
    cli::StateInput in;
    in.beta_abs = 2.0;
    in.beta_phase = 0.5;
    in.r0 = 0.3;
    in.theta0 = 1.0;
    const auto s = in.build();
    CHECK(std::abs(s.beta() - std::polar(2.0, 0.5)) < 1e-15);
    CHECK(s.sector0().theta() == 1.0);

    cli::StateInput psi;
    psi.beta_abs = 1.0;
    psi.r1 = 0.2;
    psi.psi1 = 0.4;
    const auto t = psi.build();
    CHECK(t.sector1().theta() == doctest::Approx(0.8));
    CHECK(t.sector1().lambda() == 0.0);
    CHECK(t.psi(1) == doctest::Approx(0.4));
    CHECK(psi.to_json().contains("psi_convention"));
    CHECK_FALSE(in.to_json().contains("psi_convention"));

    psi.theta0 = 0.1;
    CHECK_THROWS_AS(psi.build(), ConfigError);
    in.beta_abs = -1.0;
    CHECK_THROWS_AS(in.build(), ConfigError);
    CHECK_THROWS_AS(cli::with_variable(in, "omega", 1.0), ConfigError);
    CHECK(cli::with_variable(in, "r1", 0.7).r1 == 0.7);
}

TEST_CASE("run_pnd for a coherent state is Poissonian") {
    cli::PndSpec spec;
    spec.state.beta_abs = 1.5;
    spec.n_max = 30;
    const auto t = cli::run_pnd(spec);
    REQUIRE(t.rows.size() == 31);
    CHECK(t.columns == std::vector<std::string>{"n", "P_analytic"});
    for (const auto& row : t.rows) {
        const double n = row[0];
        const double poisson = std::exp(-2.25 + n * std::log(2.25) - std::lgamma(n + 1.0));
        CHECK(std::abs(row[1] - poisson) <= 1e-14);
    }
}

TEST_CASE("run_pnd oracle column") {
    auto out = cli::run_figure(1, {std::nullopt, std::nullopt, std::nullopt, 256});
    const auto& t = std::get<cli::Table>(out);
    REQUIRE(t.columns.size() == 3);
    double worst = 0.0;
    for (const auto& row : t.rows)
        worst = std::max(worst, std::abs(row[1] - row[2]));
    CHECK(worst <= 1e-10);
    CHECK(t.metadata.at("oracle_max_deviation").get<double>() == worst);

    cli::PndSpec spec;
    spec.state.beta_abs = 1.0;
    spec.oracle_dim = 64;
    spec.n_max = 64;
    CHECK_THROWS_AS(cli::run_pnd(spec), ConfigError);
    spec.n_max.reset();
    CHECK(cli::run_pnd(spec).rows.size() <= 64);
    spec.state.beta_abs = 6.0;
    spec.oracle_dim = 32;
    CHECK_THROWS_AS(cli::run_pnd(spec), TruncationError);
}

TEST_CASE("figure 1 and 2 distributions swap the dominant parity between the wide peaks") {
    // Position of the largest even-n and odd-n entries.
    auto peaks = [](const cli::Table& t) {
        std::array<std::size_t, 2> best{0, 1};
        for (std::size_t n = 0; n < t.rows.size(); ++n)
            if (t.rows[n][1] > t.rows[best[n % 2]][1])
                best[n % 2] = n;
        return best;
    };
    const auto f1 = std::get<cli::Table>(cli::run_figure(1));
    const auto f2 = std::get<cli::Table>(cli::run_figure(2));
    const auto p1 = peaks(f1);
    const auto p2 = peaks(f2);
    CHECK(p1[1] < p1[0]);
    CHECK(p2[0] < p2[1]);
    for (const auto& [t, p] : {std::pair{&f1, p1}, std::pair{&f2, p2}})
        for (std::size_t n : p)
            CHECK(t->rows[n][1] > 10.0 * t->rows[n + 1][1]);
}

TEST_CASE("run_scan") {
    cli::ScanSpec spec;
    spec.quantity = cli::Quantity::var_x;
    spec.state.r0 = 0.4;
    spec.range = {0.5, 1.5, 2};
    spec.oracle_dim = 256;
    const auto t = cli::run_scan(spec);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == 0.5);
    CHECK(t.rows[1][0] == 1.5);
    for (const auto& row : t.rows)
        CHECK(std::abs(row[1] - row[2]) <= 1e-8);

    spec.quantity = cli::Quantity::wigner;
    spec.variable = "r1";
    spec.range = {0.0, 0.8, 3};
    spec.x = 0.3;
    spec.p = -0.2;
    for (const auto& row : cli::run_scan(spec).rows)
        CHECK(std::abs(row[1] - row[2]) <= 1e-6);

    spec.quantity = cli::Quantity::pnd;
    CHECK_THROWS_AS(cli::run_scan(spec), ConfigError);
    spec.quantity = cli::Quantity::g2;
    spec.variable = "omega";
    CHECK_THROWS_AS(cli::run_scan(spec), ConfigError);
}

TEST_CASE("figure 3 antibunches only below the threshold squeeze") {
    const auto t = std::get<cli::Table>(cli::run_figure(3));
    for (double r0 : {0.1, 0.2, 0.3, 0.4}) {
        CAPTURE(r0);
        std::ostringstream name;
        name << "g2[r0=" << r0 << "]";
        CHECK(column_min(t, column(t, name.str())) < 1.0);
    }
    CHECK(column_min(t, column(t, "g2[r0=0.5]")) >= 1.0);
    CHECK(column_min(t, column(t, "g2[r0=0.6]")) >= 1.0);
}

TEST_CASE("figure 7 products respect the uncertainty bound") {
    const auto t = std::get<cli::Table>(cli::run_figure(7));
    REQUIRE(t.columns.size() == 4);
    for (std::size_t c = 1; c < t.columns.size(); ++c)
        CHECK(column_min(t, c) >= 0.25 - 1e-10);
}

TEST_CASE("scan figures have one row per point") {
    cli::FigureOptions opts;
    opts.scan = cli::Range{0.1, 2.0, 2};
    for (int k = 3; k <= 7; ++k) {
        const auto t = std::get<cli::Table>(cli::run_figure(k, opts));
        CHECK(t.rows.size() == 2);
        for (const auto& row : t.rows)
            CHECK(row.size() == t.columns.size());
    }
    CHECK_THROWS_AS(cli::run_figure(0), ConfigError);
    CHECK_THROWS_AS(cli::run_figure(13), ConfigError);
}

TEST_CASE("vacuum Q grid") {
    cli::GridSpec spec;
    spec.x = {-3.0, 3.0, 61};
    spec.y = {-3.0, 3.0, 61};
    const auto g = cli::run_grid(spec);
    REQUIRE(g.values.size() == 61u * 61u);
    CHECK(g.at(30, 30) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(*std::max_element(g.values.begin(), g.values.end()) == g.at(30, 30));
    for (int iy = 0; iy < 61; ++iy)
        for (int ix = 0; ix < 61; ++ix) {
            const double r2 = g.x.at(ix) * g.x.at(ix) + g.y.at(iy) * g.y.at(iy);
            CHECK(std::abs(g.at(ix, iy) - std::exp(-r2) / kPi) <= 1e-14);
        }
    CHECK(cli::local_maxima(g, 0.1).size() == 1);
    spec.quantity = cli::Quantity::g2;
    CHECK_THROWS_AS(cli::run_grid(spec), ConfigError);
}

TEST_CASE("grid oracle deviation is recorded") {
    cli::GridSpec spec;
    spec.quantity = cli::Quantity::wigner;
    spec.state.beta_abs = 1.0;
    spec.state.r0 = 0.6;
    spec.state.r1 = 0.2;
    spec.state.theta1 = 1.0;
    spec.x = {-2.0, 2.0, 5};
    spec.y = {-2.0, 2.0, 5};
    spec.oracle_dim = 256;
    const auto g = cli::run_grid(spec);
    CHECK(g.metadata.at("oracle_max_deviation").get<double>() <= 1e-6);
}

TEST_CASE("figure 9 and 10 Q functions split into three and five lobes") {
    const auto g9 = std::get<cli::Grid2D>(cli::run_figure(9));
    CHECK(cli::local_maxima(g9, 0.1).size() == 3);
    const auto g10 = std::get<cli::Grid2D>(cli::run_figure(10));
    CHECK(cli::local_maxima(g10, 0.1).size() == 5);
    for (const auto* g : {&g9, &g10})
        CHECK(*std::min_element(g->values.begin(), g->values.end()) >= -1e-12);
}

TEST_CASE("figure 12 Wigner function alternates sign along x = 0") {
    const auto g = std::get<cli::Grid2D>(cli::run_figure(12));
    REQUIRE(g.x.n % 2 == 1);
    const int ix = g.x.n / 2;
    CHECK(g.x.at(ix) == doctest::Approx(0.0).epsilon(1e-15));
    const double top = *std::max_element(g.values.begin(), g.values.end());
    double low = INFINITY;
    int sign_changes = 0;
    for (int iy = 0; iy < g.y.n; ++iy) {
        low = std::min(low, g.at(ix, iy));
        if (iy > 0 && (g.at(ix, iy) < 0.0) != (g.at(ix, iy - 1) < 0.0))
            ++sign_changes;
    }
    CHECK(low < -0.05 * top);
    CHECK(sign_changes >= 6);
}

TEST_CASE("run_evolve") {
    cli::EvolveSpec spec;
    spec.beta = 1.0;
    spec.t = {0.0, 1.0, 5};
    auto t = cli::run_evolve(spec);
    CHECK(t.columns == std::vector<std::string>{"t", "fidelity", "mean_n", "g2", "var_x"});
    for (const auto& row : t.rows)
        CHECK(row[1] == doctest::Approx(1.0).epsilon(1e-14));

    spec.hamiltonian = {0.0, 0.2, 0.05};
    t = cli::run_evolve(spec);
    REQUIRE(t.rows.size() == 5);
    for (const auto& row : t.rows)
        CHECK(row[1] >= 1.0 - 1e-8);

    spec.hamiltonian = {0.0, cplx{0.1, 0.05}, cplx{0.1, 0.05}};
    t = cli::run_evolve(spec);
    for (const auto& row : t.rows) {
        const auto c = dynamics::squeeze_correspondence(spec.hamiltonian, row[0]);
        const PDState ordinary(spec.beta, c.sector0, c.sector0);
        CHECK(row[2] == doctest::Approx(photon_moments(ordinary).mean_n).epsilon(1e-10));
        CHECK(row[4] == doctest::Approx(quadrature_moments(ordinary).var_x).epsilon(1e-10));
    }

    spec.hamiltonian.omega = 0.5;
    t = cli::run_evolve(spec);
    CHECK(t.columns == std::vector<std::string>{"t", "mean_n", "g2", "var_x"});
}

TEST_CASE("csv and json layouts") {
    const cli::Output out = std::get<cli::Table>(cli::run_figure(7, {std::nullopt, std::nullopt, cli::Range{0.0, 1.0, 3}}));
    const std::string csv = render(out);
    REQUIRE(csv.rfind("# {", 0) == 0);
    const auto eol = csv.find('\n');
    const json meta = json::parse(csv.substr(2, eol - 2));
    CHECK(meta.at("figure") == 7);
    CHECK(meta.contains("generated"));
    CHECK(meta.at("columns").size() == 4);
    std::istringstream body(csv.substr(eol + 1));
    std::string line;
    int lines = 0;
    while (std::getline(body, line))
        ++lines;
    CHECK(lines == 4);

    const json j = json::parse(render(out, cli::Format::json));
    CHECK(j.at("rows").size() == 3);
    CHECK(j.at("columns").size() == 4);

    cli::GridSpec spec;
    spec.x = {-1.0, 1.0, 3};
    spec.y = {-1.0, 1.0, 2};
    const cli::Output grid = cli::run_grid(spec);
    const json gj = json::parse(render(grid, cli::Format::json));
    CHECK(gj.at("values").size() == 2);
    CHECK(gj.at("values")[0].size() == 3);
    const std::string gcsv = render(grid);
    CHECK(std::count(gcsv.begin(), gcsv.end(), '\n') == 2 + 6);
}

TEST_CASE("output is deterministic apart from the timestamp") {
    for (int k : {1, 6, 9}) {
        cli::FigureOptions opts;
        opts.grid_x = cli::Range{-2.0, 2.0, 9};
        opts.grid_y = cli::Range{-2.0, 2.0, 9};
        CHECK(without_timestamp(render(cli::run_figure(k, opts))) == without_timestamp(render(cli::run_figure(k, opts))));
    }
}

TEST_CASE("validation suite") {
    const auto a = validation::run(1, 3);
    const auto b = validation::run(1, 3);
    std::ostringstream ra;
    std::ostringstream rb;
    validation::print(ra, a);
    validation::print(rb, b);
    CHECK(ra.str() == rb.str());
    CHECK(a.passed());
    CHECK(a.cases.size() == 3);
    CHECK(a.check("wigner").tolerance == 1e-6);
    CHECK_THROWS_AS(a.check("entropy"), ConfigError);
    CHECK_THROWS_AS(validation::run(1, 0), ConfigError);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto s = validation::random_state(rng);
        CHECK(std::abs(s.beta()) <= 4.0);
        CHECK(s.sector0().r() <= 1.5);
        CHECK(s.sector1().r() <= 1.5);
    }
}

TEST_CASE("tool exit codes") {
    CHECK(tool("--help") == 0);
    CHECK(tool("") == 1);
    CHECK(tool("figure 13") == 1);
    CHECK(tool("pnd --psi0 1 --theta0 1") == 1);
    CHECK(tool("scan --range 1:0:5") == 1);
    CHECK(tool("grid --quantity g2") == 1);
    CHECK(tool("validate --cases 0") == 1);
    CHECK(tool("evolve --omega 0.5 --g0-re 0.1 --time 0:1:3") == 0);
    CHECK(tool("pnd --beta-abs 6 --oracle --dim 32") == 3);
    CHECK(tool("validate --seed 3 --cases 2") == 0);
}

TEST_CASE("tool output files are rerun-identical") {
    const std::string a = "test_cli_fig4_a.csv";
    const std::string b = "test_cli_fig4_b.csv";
    REQUIRE(tool("figure 4 --range 0:2:41 --out " + a) == 0);
    REQUIRE(tool("figure 4 --range 0:2:41 --out " + b) == 0);
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    CHECK_FALSE(sa.empty());
    CHECK(without_timestamp(sa) == without_timestamp(sb));
    std::remove(a.c_str());
    std::remove(b.c_str());
}
