#include "pdsq/cli.hpp"

#include "pdsq/errors.hpp"
#include "pdsq/fock.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numbers>
#include <ostream>

namespace pdsq::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kQFloor = -1e-12;

std::string format_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string label(std::string_view quantity, std::string_view name, double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return std::string(quantity) + "[" + std::string(name) + "=" + buf + "]";
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(std::string(what) + ": cannot parse '" + std::string(text) + "'");
    return v;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"n", r.n}}; }

json sector_json(const SectorParams& p) { return {{"r", p.r()}, {"theta", p.theta()}, {"lambda", p.lambda()}}; }

double g2_or_nan(double second_factorial, double mean_n) {
    return mean_n > 0.0 ? second_factorial / (mean_n * mean_n) : kNaN;
}

double analytic_value(Quantity q, const PDState& s, double x, double p) {
    switch (q) {
    case Quantity::mean_n:
        return photon_moments(s).mean_n;
    case Quantity::g2:
        return photon_moments(s).g2.value_or(kNaN);
    case Quantity::var_x:
        return quadrature_moments(s).var_x;
    case Quantity::var_p:
        return quadrature_moments(s).var_p;
    case Quantity::uncertainty_product:
        return quadrature_moments(s).uncertainty_product;
    case Quantity::q:
        return q_function(s, cplx{x, p});
    case Quantity::wigner:
        return wigner(s, x, p);
    case Quantity::pnd:
        break;
    }
    throw ConfigError("quantity 'pnd' is not a scalar; use the pnd command");
}

double oracle_value(Quantity q, const fock::FockVector& v, double x, double p) {
    if (q == Quantity::q)
        return std::norm(fock::coherent_overlap(v, cplx{x, p})) / kPi;
    if (q == Quantity::wigner)
        return fock::wigner_displaced_parity(v, fock::phase_point(x, p));
    const auto m = fock::vector_moments(v);
    switch (q) {
    case Quantity::mean_n:
        return m.mean_n;
    case Quantity::g2:
        return g2_or_nan(m.second_factorial, m.mean_n);
    case Quantity::var_x:
        return m.var_x;
    case Quantity::var_p:
        return m.var_p;
    case Quantity::uncertainty_product:
        return m.var_x * m.var_p;
    default:
        throw ConfigError("quantity 'pnd' is not a scalar; use the pnd command");
    }
}

json base_metadata(std::string_view kind) { return {{"tool", "pdsq"}, {"kind", kind}}; }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

StateInput psi_state(double beta_abs, double r0, double psi0, double r1, double psi1) {
    StateInput in;
    in.beta_abs = beta_abs;
    in.r0 = r0;
    in.r1 = r1;
    in.psi0 = psi0;
    in.psi1 = psi1;
    return in;
}

StateInput angle_state(double beta_abs, double r0, double theta0, double r1, double theta1) {
    StateInput in;
    in.beta_abs = beta_abs;
    in.r0 = r0;
    in.theta0 = theta0;
    in.r1 = r1;
    in.theta1 = theta1;
    return in;
}

struct Curve {
    std::string name;
    StateInput state;
};

Table scan_curves(int figure, Quantity q, const std::vector<Curve>& curves, const Range& range) {
    range.validate("scan range");
    Table t;
    t.columns.push_back("beta_abs");
    for (const auto& c : curves)
        t.columns.push_back(c.name);
    for (const double b : range.points()) {
        std::vector<double> row{b};
        for (const auto& c : curves)
            row.push_back(analytic_value(q, with_variable(c.state, "beta-abs", b).build(), 0.0, 0.0));
        t.rows.push_back(std::move(row));
    }
    t.metadata = base_metadata("figure");
    t.metadata["figure"] = figure;
    t.metadata["quantity"] = to_string(q);
    t.metadata["scan"] = {{"variable", "beta-abs"}, {"range", range_json(range)}};
    json states = json::object();
    for (const auto& c : curves)
        states[c.name] = c.state.to_json();
    t.metadata["curves"] = states;
    return t;
}

Output figure_grid(int figure, Quantity q, const StateInput& state, Range x, Range y,
                   const FigureOptions& options) {
    GridSpec g;
    g.quantity = q;
    g.state = state;
    g.x = options.grid_x.value_or(x);
    g.y = options.grid_y.value_or(y);
    g.oracle_dim = options.oracle_dim;
    Grid2D grid = run_grid(g);
    grid.metadata["figure"] = figure;
    return grid;
}

} // namespace

void Range::validate(std::string_view what) const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max) || n < 2)
        throw ConfigError(std::string(what) + ": need min < max and at least 2 points");
}

double Range::at(int i) const { return i == n - 1 ? max : min + (max - min) * i / (n - 1); }

std::vector<double> Range::points() const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = at(i);
    return out;
}

Range parse_range(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos)
        throw ConfigError("range '" + std::string(text) + "' is not min:max:n");
    Range r;
    r.min = parse_double(text.substr(0, a), "range min");
    r.max = parse_double(text.substr(a + 1, b - a - 1), "range max");
    const auto count = text.substr(b + 1);
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), r.n);
    if (ec != std::errc{} || ptr != count.data() + count.size())
        throw ConfigError("range count '" + std::string(count) + "' is not an integer");
    r.validate("range");
    return r;
}

std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::pnd:
        return "pnd";
    case Quantity::mean_n:
        return "mean_n";
    case Quantity::g2:
        return "g2";
    case Quantity::var_x:
        return "var_x";
    case Quantity::var_p:
        return "var_p";
    case Quantity::uncertainty_product:
        return "uncertainty_product";
    case Quantity::q:
        return "q";
    case Quantity::wigner:
        return "wigner";
    }
    return "unknown";
}

Quantity parse_quantity(std::string_view text) {
    for (Quantity q : {Quantity::pnd, Quantity::mean_n, Quantity::g2, Quantity::var_x, Quantity::var_p,
                       Quantity::uncertainty_product, Quantity::q, Quantity::wigner})
        if (text == to_string(q))
            return q;
    throw ConfigError("unknown quantity '" + std::string(text) + "'");
}

PDState StateInput::build() const {
    if (!(beta_abs >= 0.0))
        throw ConfigError("beta-abs must be nonnegative");
    if (psi_mode()) {
        if (beta_phase != 0.0 || theta0 != 0.0 || theta1 != 0.0 || lambda0 != 0.0 || lambda1 != 0.0)
            throw ConfigError("psi0/psi1 cannot be combined with beta-phase, theta or lambda");
        return state_from_psi(beta_abs, r0, psi0.value_or(0.0), r1, psi1.value_or(0.0));
    }
    return PDState(std::polar(beta_abs, beta_phase), SectorParams(r0, theta0, lambda0),
                   SectorParams(r1, theta1, lambda1));
}

json StateInput::to_json() const {
    const PDState s = build();
    json j = {{"beta_abs", beta_abs},
              {"beta_phase", std::arg(s.beta())},
              {"sector0", sector_json(s.sector0())},
              {"sector1", sector_json(s.sector1())},
              {"psi0", s.psi(0)},
              {"psi1", s.psi(1)}};
    if (psi_mode())
        j["psi_convention"] = "lambda_j = arg(beta) = 0, theta_j = 2 psi_j";
    return j;
}

StateInput with_variable(StateInput in, std::string_view variable, double value) {
    if (variable == "beta-abs")
        in.beta_abs = value;
    else if (variable == "beta-phase")
        in.beta_phase = value;
    else if (variable == "r0")
        in.r0 = value;
    else if (variable == "r1")
        in.r1 = value;
    else if (variable == "theta0")
        in.theta0 = value;
    else if (variable == "theta1")
        in.theta1 = value;
    else if (variable == "psi0")
        in.psi0 = value;
    else if (variable == "psi1")
        in.psi1 = value;
    else
        throw ConfigError("unknown scan variable '" + std::string(variable) + "'");
    return in;
}

void ScanSpec::validate() const {
    range.validate("scan range");
    if (quantity == Quantity::pnd)
        throw ConfigError("quantity 'pnd' is not a scalar; use the pnd command");
    if (std::find(std::begin(kScanVariables), std::end(kScanVariables), variable) == std::end(kScanVariables))
        throw ConfigError("unknown scan variable '" + variable + "'");
    if (oracle_dim && *oracle_dim < 4)
        throw ConfigError("oracle dim must be at least 4");
}

void GridSpec::validate() const {
    x.validate("grid-x");
    y.validate("grid-y");
    if (quantity != Quantity::q && quantity != Quantity::wigner)
        throw ConfigError("grid quantity must be q or wigner");
    if (oracle_dim && *oracle_dim < 4)
        throw ConfigError("oracle dim must be at least 4");
}

Table run_pnd(const PndSpec& spec) {
    const PDState s = spec.state.build();
    std::optional<fock::FockVector> oracle;
    if (spec.oracle_dim) {
        if (*spec.oracle_dim < 4)
            throw ConfigError("oracle dim must be at least 4");
        oracle = fock::prepare_state(*spec.oracle_dim, s);
    }
    int n_max = spec.n_max.value_or(truncation_nmax(s));
    if (spec.n_max && *spec.n_max < 0)
        throw ConfigError("n-max must be nonnegative");
    if (oracle) {
        if (spec.n_max && *spec.n_max >= oracle->dim())
            throw ConfigError("n-max must be below the oracle dimension");
        n_max = std::min(n_max, oracle->dim() - 1);
    }
    const auto dist = photon_distributions(s, n_max);
    Table t;
    t.columns = {"n", "P_analytic"};
    if (oracle)
        t.columns.push_back("P_oracle");
    double worst = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        std::vector<double> row{double(n), dist[static_cast<std::size_t>(n)]};
        if (oracle) {
            const double po = std::norm(oracle->amplitudes(n));
            worst = std::max(worst, std::abs(po - row[1]));
            row.push_back(po);
        }
        t.rows.push_back(std::move(row));
    }
    t.metadata = base_metadata("pnd");
    t.metadata["state"] = spec.state.to_json();
    t.metadata["n_max"] = n_max;
    if (oracle) {
        t.metadata["oracle_dim"] = oracle->dim();
        t.metadata["oracle_leakage"] = oracle->leakage;
        t.metadata["oracle_max_deviation"] = worst;
    }
    return t;
}

Table run_scan(const ScanSpec& spec) {
    spec.validate();
    Table t;
    const std::string name(to_string(spec.quantity));
    t.columns = {spec.variable, name};
    if (spec.oracle_dim)
        t.columns.push_back(name + "_oracle");
    for (const double value : spec.range.points()) {
        const PDState s = with_variable(spec.state, spec.variable, value).build();
        std::vector<double> row{value, analytic_value(spec.quantity, s, spec.x, spec.p)};
        if (spec.oracle_dim)
            row.push_back(oracle_value(spec.quantity, fock::prepare_state(*spec.oracle_dim, s), spec.x, spec.p));
        t.rows.push_back(std::move(row));
    }
    t.metadata = base_metadata("scan");
    t.metadata["quantity"] = name;
    t.metadata["state"] = spec.state.to_json();
    t.metadata["scan"] = {{"variable", spec.variable}, {"range", range_json(spec.range)}};
    if (spec.quantity == Quantity::q || spec.quantity == Quantity::wigner)
        t.metadata["point"] = {spec.x, spec.p};
    if (spec.oracle_dim)
        t.metadata["oracle_dim"] = *spec.oracle_dim;
    return t;
}

Grid2D run_grid(const GridSpec& spec) {
    spec.validate();
    const PDState s = spec.state.build();
    Grid2D g{spec.x, spec.y, {}, base_metadata("grid")};
    g.values.reserve(static_cast<std::size_t>(spec.x.n) * spec.y.n);
    for (int iy = 0; iy < spec.y.n; ++iy)
        for (int ix = 0; ix < spec.x.n; ++ix) {
            const double v = analytic_value(spec.quantity, s, spec.x.at(ix), spec.y.at(iy));
            if (spec.quantity == Quantity::q && v < kQFloor)
                throw ConsistencyError("negative Q value " + format_number(v));
            g.values.push_back(v);
        }
    g.metadata["quantity"] = to_string(spec.quantity);
    g.metadata["axes"] = spec.quantity == Quantity::q ? json{"re_alpha", "im_alpha"} : json{"x", "p"};
    g.metadata["state"] = spec.state.to_json();
    g.metadata["x"] = range_json(spec.x);
    g.metadata["y"] = range_json(spec.y);
    if (spec.oracle_dim) {
        const auto v = fock::prepare_state(*spec.oracle_dim, s);
        double worst = 0.0;
        for (int iy = 0; iy < spec.y.n; ++iy)
            for (int ix = 0; ix < spec.x.n; ++ix)
                worst = std::max(worst, std::abs(oracle_value(spec.quantity, v, spec.x.at(ix), spec.y.at(iy)) -
                                                 g.at(ix, iy)));
        g.metadata["oracle_dim"] = *spec.oracle_dim;
        g.metadata["oracle_leakage"] = v.leakage;
        g.metadata["oracle_max_deviation"] = worst;
    }
    return g;
}

Table run_evolve(const EvolveSpec& spec) {
    spec.hamiltonian.validate();
    spec.t.validate("time range");
    const bool closed_form = spec.hamiltonian.omega == 0.0;
    const auto start = fock::coherent_vector(spec.dim, spec.beta);
    Table t;
    t.columns = {"t"};
    if (closed_form)
        t.columns.push_back("fidelity");
    for (const char* c : {"mean_n", "g2", "var_x"})
        t.columns.push_back(c);
    for (const double time : spec.t.points()) {
        const auto v = dynamics::evolve(spec.hamiltonian, time, start);
        std::vector<double> row{time};
        if (closed_form) {
            const auto c = dynamics::squeeze_correspondence(spec.hamiltonian, time);
            row.push_back(
                dynamics::fidelity(v, fock::prepare_state(spec.dim, PDState(spec.beta, c.sector0, c.sector1))));
        }
        const auto m = fock::vector_moments(v);
        row.push_back(m.mean_n);
        row.push_back(g2_or_nan(m.second_factorial, m.mean_n));
        row.push_back(m.var_x);
        t.rows.push_back(std::move(row));
    }
    const auto& h = spec.hamiltonian;
    t.metadata = base_metadata("evolve");
    t.metadata["hamiltonian"] = {{"omega", h.omega}, {"g0", {h.g0.real(), h.g0.imag()}}, {"g1", {h.g1.real(), h.g1.imag()}}};
    t.metadata["beta"] = {spec.beta.real(), spec.beta.imag()};
    t.metadata["t"] = range_json(spec.t);
    t.metadata["dim"] = spec.dim;
    return t;
}

Output run_figure(int number, const FigureOptions& options) {
    const double half_pi = kPi / 2.0;
    const Range scan = options.scan.value_or(Range{0.0, 3.0, 301});
    switch (number) {
    case 1:
    case 2: {
        PndSpec p;
        p.state = psi_state(4.0, 0.5, number == 1 ? half_pi : 0.0, 0.1, half_pi);
        p.oracle_dim = options.oracle_dim;
        Table t = run_pnd(p);
        t.metadata["figure"] = number;
        return t;
    }
    case 3: {
        std::vector<Curve> curves;
        for (double r0 : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6})
            curves.push_back({label("g2", "r0", r0), psi_state(0.0, r0, 0.0, 0.0, 0.0)});
        return scan_curves(3, Quantity::g2, curves, scan);
    }
    case 4: {
        std::vector<Curve> curves;
        for (double psi0 : {0.0, kPi / 16.0, kPi / 8.0, kPi / 4.0, kPi / 2.0})
            curves.push_back({label("g2", "psi0", psi0), psi_state(0.0, 0.05, psi0, 0.0, 0.0)});
        return scan_curves(4, Quantity::g2, curves, scan);
    }
    case 5: {
        std::vector<Curve> curves;
        for (double r : {0.05, 0.1, 0.2, 0.5}) {
            curves.push_back({label("g2_pd", "r", r), psi_state(0.0, r, 0.0, 0.0, 0.0)});
            curves.push_back({label("g2_ordinary", "r", r), psi_state(0.0, r, 0.0, r, 0.0)});
        }
        return scan_curves(5, Quantity::g2, curves, scan);
    }
    case 6: {
        std::vector<Curve> curves;
        for (double r1 : {0.25, 0.5, 1.0, 1.5})
            curves.push_back({label("var_x", "r1", r1), angle_state(0.0, 0.0, 0.0, r1, 0.0)});
        return scan_curves(6, Quantity::var_x, curves, scan);
    }
    case 7: {
        std::vector<Curve> curves;
        for (double r0 : {0.25, 0.5, 1.0})
            curves.push_back({label("uncertainty_product", "r0", r0), angle_state(0.0, r0, 0.0, 0.0, 0.0)});
        return scan_curves(7, Quantity::uncertainty_product, curves, scan);
    }
    case 8:
        return figure_grid(8, Quantity::q, angle_state(1.0, 4.0, 0.0, 0.0, 0.0), {-5.0, 5.0, 201},
                           {-5.0, 5.0, 201}, options);
    case 9:
    case 10:
        return figure_grid(number, Quantity::q, angle_state(number == 9 ? 3.0 : 5.0, 3.0, 0.0, 3.0, kPi),
                           {-6.0, 6.0, 121}, {-15.0, 15.0, 301}, options);
    case 11:
        return figure_grid(11, Quantity::wigner, angle_state(3.0, 3.0, kPi, 0.0, 0.0), {-8.0, 8.0, 321},
                           {-4.0, 4.0, 161}, options);
    case 12:
        return figure_grid(12, Quantity::wigner, angle_state(8.0, 3.0, 0.0, 3.0, kPi), {-3.0, 3.0, 121},
                           {-12.0, 12.0, 961}, options);
    default:
        throw ConfigError("figure number must be 1..12");
    }
}

std::vector<std::pair<int, int>> local_maxima(const Grid2D& grid, double fraction) {
    const double top = *std::max_element(grid.values.begin(), grid.values.end());
    std::vector<std::pair<int, int>> out;
    for (int iy = 1; iy + 1 < grid.y.n; ++iy)
        for (int ix = 1; ix + 1 < grid.x.n; ++ix) {
            const double v = grid.at(ix, iy);
            if (v < fraction * top)
                continue;
            bool peak = true;
            for (int dy = -1; dy <= 1 && peak; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if ((dx != 0 || dy != 0) && grid.at(ix + dx, iy + dy) > v) {
                        peak = false;
                        break;
                    }
            if (peak)
                out.emplace_back(ix, iy);
        }
    return out;
}

Format parse_format(std::string_view text) {
    if (text == "csv")
        return Format::csv;
    if (text == "json")
        return Format::json;
    throw ConfigError("format must be csv or json");
}

void write(std::ostream& os, const Output& out, Format format) {
    const auto stamped = [](json meta) {
        meta["generated"] = utc_timestamp();
        return meta;
    };
    if (const auto* t = std::get_if<Table>(&out)) {
        json meta = stamped(t->metadata);
        meta["columns"] = t->columns;
        if (format == Format::json) {
            os << json{{"metadata", meta}, {"columns", t->columns}, {"rows", t->rows}}.dump(2) << '\n';
            return;
        }
        os << "# " << meta.dump() << '\n';
        for (std::size_t i = 0; i < t->columns.size(); ++i)
            os << (i ? "," : "") << t->columns[i];
        os << '\n';
        for (const auto& row : t->rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << format_number(row[i]);
            os << '\n';
        }
        return;
    }
    const auto& g = std::get<Grid2D>(out);
    const json meta = stamped(g.metadata);
    if (format == Format::json) {
        json rows = json::array();
        for (int iy = 0; iy < g.y.n; ++iy) {
            const auto first = g.values.begin() + static_cast<std::ptrdiff_t>(iy) * g.x.n;
            rows.push_back(std::vector<double>(first, first + g.x.n));
        }
        os << json{{"metadata", meta}, {"x", g.x.points()}, {"y", g.y.points()}, {"values", rows}}.dump(2) << '\n';
        return;
    }
    os << "# " << meta.dump() << '\n';
    os << "x,y,value\n";
    for (int iy = 0; iy < g.y.n; ++iy)
        for (int ix = 0; ix < g.x.n; ++ix)
            os << format_number(g.x.at(ix)) << ',' << format_number(g.y.at(iy)) << ',' << format_number(g.at(ix, iy))
               << '\n';
}

} // namespace pdsq::cli
