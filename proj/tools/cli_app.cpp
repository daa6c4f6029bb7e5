#include "cli_app.hpp"

#include "cki/cki.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cki::cli {
namespace {

struct Config {
    std::string command;
    std::string kernel = "gaussian";
    int max_degree = -1;
    int n = -1;
    std::string tol = "1e-12";
    std::string precision;
    std::string route = "triangular";
    std::string format = "csv";
    std::string out;
    int points = -1;
    std::string identity = "all";
    std::string samples;
};

/// Failure carrying its exit code.
struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message)
{
    throw Failure{code, std::move(message)};
}

// ---------------------------------------------------------------- output

struct Cell {
    enum Kind { text, integer, real, null };
    Kind kind;
    std::string value;
};

Cell text_cell(std::string s) { return {Cell::text, std::move(s)}; }
Cell int_cell(long v) { return {Cell::integer, std::to_string(v)}; }
Cell null_cell() { return {Cell::null, ""}; }
template <class Real>
Cell real_cell(const Real& v)
{
    return {Cell::real, format_real<Real>(v)};
}

/// Decimal text to Real; throws std::invalid_argument on bad input.
template <class Real>
Real from_text(const std::string& s)
{
    if constexpr (std::is_floating_point_v<Real>) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } else {
        return Real(s);
    }
}

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const Cell& c)
{
    if (c.kind != Cell::text || c.value.find_first_of(",\"\n") == std::string::npos)
        return c.value;
    std::string q = "\"";
    for (char ch : c.value) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c)
{
    switch (c.kind) {
    case Cell::text: return c.value;
    case Cell::integer: return std::stol(c.value);
    case Cell::real: return std::stod(c.value);
    case Cell::null: return nullptr;
    }
    return nullptr;
}

nlohmann::ordered_json json_table(const Table& t)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            obj[t.columns[i]] = json_cell(row[i]);
        arr.push_back(std::move(obj));
    }
    return arr;
}

/// One table: CSV with a header row, or a JSON array of objects.
/// Several tables: CSV blocks separated by a blank line, or a JSON object keyed by name.
std::string render(const std::vector<Table>& tables, const std::string& format)
{
    std::ostringstream os;
    if (format == "json") {
        nlohmann::ordered_json doc;
        if (tables.size() == 1) {
            doc = json_table(tables.front());
        } else {
            doc = nlohmann::ordered_json::object();
            for (const auto& t : tables)
                doc[t.name] = json_table(t);
        }
        os << doc.dump(2) << '\n';
        return os.str();
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0)
            os << '\n';
        const auto& t = tables[i];
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            os << (c ? "," : "") << t.columns[c];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                os << (c ? "," : "") << csv_field(row[c]);
            os << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------- kernels

template <class Real>
Kernel<Real> make_kernel(const std::string& name)
{
    if (name == "gaussian")
        return Kernel<Real>::gaussian();
    if (name == "rational") {
        // 2 / (pi (1 + x^2)^2): unit mass, only algebraic decay
        const Real c = 2 / pi<Real>();
        return Kernel<Real>::from_decay_certificate(
            "rational", [c](const Real& x) { return c / ((1 + x * x) * (1 + x * x)); },
            [c](int n) { return n <= 4 ? c : std::numeric_limits<Real>::infinity(); }, true);
    }
    fail(exit_failure, "kernel '" + name + "' does not support this command");
}

/// Synthetic symbol 1 + cos(2 pi t), zero at t = 1/2.
template <class Real>
PeriodizedSymbol<Real> zero_symbol(int m)
{
    using std::cos;
    std::vector<Real> re(static_cast<std::size_t>(m)), im(static_cast<std::size_t>(m), Real(0));
    for (int r = 0; r < m; ++r)
        re[static_cast<std::size_t>(r)] = 1 + cos(2 * pi<Real>() * Real(r) / Real(m));
    return PeriodizedSymbol<Real>::from_samples(std::move(re), std::move(im), true);
}

template <class Real>
Real parse_tol(const std::string& s)
{
    Real t;
    try {
        t = from_text<Real>(s);
    } catch (const std::exception&) {
        fail(exit_failure, "--tol: not a number: " + s);
    }
    if (!(t > 0))
        fail(exit_failure, "--tol must be positive");
    return t;
}

int degree_or(const Config& cfg, int fallback)
{
    int n = cfg.max_degree < 0 ? fallback : cfg.max_degree;
    if (n > 20)
        fail(exit_failure, "--max-degree " + std::to_string(n) + " exceeds the cap 20");
    return n;
}

// ---------------------------------------------------------------- moments

template <class Real>
std::vector<Table> cmd_moments(const Config& cfg)
{
    const auto kernel = make_kernel<Real>(cfg.kernel);
    const Real tol = parse_tol<Real>(cfg.tol);
    const int n = degree_or(cfg, 12);
    Table t{"moments", {"k", "value", "radius", "tail"}, {}};
    for (int k = 0; k <= n; ++k) {
        MomentValue<Real> m;
        try {
            m = discrete_moment(kernel, k, tol);
        } catch (const tail_not_certifiable& e) {
            std::ostringstream os;
            os << "moments: k=" << k << ": tail not certifiable within radius " << max_truncation_radius
               << " (best bound " << e.best_bound() << ")";
            fail(exit_failure, os.str());
        }
        t.rows.push_back({int_cell(k), real_cell<Real>(m.value), int_cell(m.radius), real_cell<Real>(m.tail_bound)});
    }
    return {t};
}

// ---------------------------------------------------------------- coeffs

template <class Real>
std::vector<Table> cmd_coeffs(const Config& cfg)
{
    const auto kernel = make_kernel<Real>(cfg.kernel);
    const Real tol = parse_tol<Real>(cfg.tol);
    const int n = degree_or(cfg, 6);

    std::vector<Route> routes;
    if (cfg.route == "all") {
        routes = {Route::triangular, Route::q_he, Route::q_ne, Route::spectral, Route::toeplitz};
    } else if (auto r = parse_route(cfg.route)) {
        routes = {*r};
    } else {
        fail(exit_failure, "unknown route '" + cfg.route + "'");
    }

    MomentTable<Real> moments(kernel, n, tol);
    std::vector<std::pair<Route, std::vector<Polynomial<Real>>>> results;
    for (Route r : routes) {
        try {
            results.emplace_back(r, route_polynomials(kernel, moments, r, n));
        } catch (const unsupported_method& e) {
            fail(exit_failure, std::string("route ") + to_string(r) + " with kernel " + cfg.kernel + ": " + e.what());
        }
    }

    Table coeffs{"coefficients", {"route", "k"}, {}};
    for (int i = 0; i <= n; ++i)
        coeffs.columns.push_back("c" + std::to_string(i));
    for (const auto& [route, polys] : results) {
        for (int k = 0; k <= n; ++k) {
            std::vector<Cell> row{text_cell(to_string(route)), int_cell(k)};
            for (int i = 0; i <= n; ++i)
                row.push_back(real_cell<Real>(polys[static_cast<std::size_t>(k)][i]));
            coeffs.rows.push_back(std::move(row));
        }
    }
    if (results.size() == 1)
        return {coeffs};

    Table dev{"deviations", {"route_a", "route_b", "k", "max_deviation"}, {}};
    for (std::size_t a = 0; a < results.size(); ++a)
        for (std::size_t b = a + 1; b < results.size(); ++b)
            for (int k = 0; k <= n; ++k) {
                const auto& pa = results[a].second[static_cast<std::size_t>(k)];
                const auto& pb = results[b].second[static_cast<std::size_t>(k)];
                dev.rows.push_back({text_cell(to_string(results[a].first)), text_cell(to_string(results[b].first)), int_cell(k),
                                    real_cell<Real>((pa - pb).max_abs_coefficient())});
            }
    return {coeffs, dev};
}

// ---------------------------------------------------------------- interp

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool is_number(const std::string& s)
{
    double v;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

/// Two-column CSV "i,value" with i = 0..n, optional header, LF or CRLF.
template <class Real>
std::vector<Real> read_samples(std::istream& in)
{
    std::vector<Real> values;
    std::string line;
    int row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            fields.push_back(trim(f));
        if (!line.empty() && line.back() == ',')
            fields.emplace_back();
        const bool header = first && !fields.empty() && !is_number(fields[0]);
        first = false;
        if (header)
            continue;
        if (fields.size() != 2 || fields[1].empty())
            fail(exit_failure, "row " + std::to_string(row) + ": expected 2 fields");
        if (!is_number(fields[0]) || !is_number(fields[1]))
            fail(exit_failure, "row " + std::to_string(row) + ": fields must be numeric");
        if (fields[0] != std::to_string(values.size()))
            fail(exit_failure, "row " + std::to_string(row) + ": expected index " + std::to_string(values.size()));
        values.push_back(from_text<Real>(fields[1]));
    }
    return values;
}

template <class Real>
std::vector<Table> cmd_interp(const Config& cfg)
{
    using std::abs;
    const auto kernel = make_kernel<Real>(cfg.kernel);
    const Real tol = parse_tol<Real>(cfg.tol);
    if (cfg.samples.empty())
        fail(exit_failure, "interp: a samples file is required");
    std::ifstream in(cfg.samples, std::ios::binary);
    if (!in)
        fail(exit_failure, "interp: cannot open " + cfg.samples);
    auto values = read_samples<Real>(in);
    if (values.size() < 2)
        fail(exit_failure, "interp: need at least two samples (n >= 1)");
    const int n = static_cast<int>(values.size()) - 1;
    if (cfg.n >= 0 && cfg.n != n)
        fail(exit_failure, "interp: --n " + std::to_string(cfg.n) + " but the file has " + std::to_string(n + 1) +
                               " samples");
    const int cap = is_extended_v<Real> ? grid_conditioning_cap : grid_standard_precision_cap;
    if (n > cap)
        fail(exit_over_cap, "interp: n = " + std::to_string(n) + " exceeds the cap " + std::to_string(cap) +
                                (is_extended_v<Real> ? "" : "; use --precision extended (cap 20)"));

    auto route = parse_route(cfg.route);
    if (!route || *route == Route::spectral || *route == Route::toeplitz)
        fail(exit_failure, "interp: route '" + cfg.route + "' does not produce coefficient polynomials");
    MomentTable<Real> moments(kernel, n, tol);
    auto coeffs = *route == Route::triangular
                      ? build_coefficients_triangular(kernel, moments, n)
                      : build_coefficients_q(kernel, moments, n,
                                             *route == Route::q_he ? QBase::discrete_he : QBase::continuous_ne);
    GridSamples<Real> samples(std::move(values));
    auto interp = build_grid_interpolant(samples, coeffs, tol);

    Table t{"interp", {"kind", "x", "value", "budget", "residual"}, {}};
    for (int i = 0; i <= n; ++i) {
        auto e = interp.evaluate(Real(i) / n);
        t.rows.push_back({text_cell("node"), real_cell<Real>(Real(Real(i) / n)), real_cell<Real>(e.value), real_cell<Real>(e.budget),
                          real_cell<Real>(Real(abs(e.value - samples[i])))});
    }
    const int m = cfg.points < 0 ? 11 : cfg.points;
    for (int i = 0; i < m; ++i) {
        Real x = m == 1 ? Real(0) : Real(i) / (m - 1);
        auto e = interp.evaluate(x);
        t.rows.push_back({text_cell("eval"), real_cell<Real>(x), real_cell<Real>(e.value), real_cell<Real>(e.budget), null_cell()});
    }
    return {t};
}

// ---------------------------------------------------------------- verify

template <class Real>
struct Outcome {
    std::string name;
    int checks = 0;
    Real max_deviation = 0;
    Real tolerance = 0;
    std::string status;
};

/// |lhs - rhs| / max(1, |rhs|)
template <class Real>
Real scaled(const Real& lhs, const Real& rhs)
{
    using std::abs;
    return abs(lhs - rhs) / std::max<Real>(1, abs(rhs));
}

template <class Real>
std::vector<Real> points_on(int m, const Real& lo, const Real& hi)
{
    std::vector<Real> xs;
    for (int i = 0; i < m; ++i)
        xs.push_back(m == 1 ? lo : lo + (hi - lo) * Real(i) / Real(m - 1));
    return xs;
}

template <class Real>
std::vector<Table> cmd_verify(const Config& cfg, bool& all_pass)
{
    const std::vector<std::string> suite{"discpolyconv", "th-interp", "error-recursion", "inverse",
                                         "interpolation", "poisson", "wiener"};
    const bool synthetic = cfg.kernel == "zero-symbol";
    std::vector<std::string> selected;
    if (cfg.identity == "all") {
        selected = synthetic ? std::vector<std::string>{"wiener"} : suite;
    } else if (std::find(suite.begin(), suite.end(), cfg.identity) != suite.end()) {
        if (synthetic && cfg.identity != "wiener")
            fail(exit_failure, "identity '" + cfg.identity + "' needs a kernel; zero-symbol only supports wiener");
        selected = {cfg.identity};
    } else {
        fail(exit_failure, "unknown identity '" + cfg.identity + "'");
    }

    const Real tol = parse_tol<Real>(cfg.tol);
    const int n = degree_or(cfg, 8);
    std::optional<Kernel<Real>> kernel;
    std::optional<MomentTable<Real>> moments;
    std::optional<CardinalCoefficients<Real>> coeffs;
    auto need_coeffs = [&] {
        if (!coeffs) {
            moments.emplace(*kernel, n, tol);
            coeffs.emplace(build_coefficients_triangular(*kernel, *moments, n));
        }
    };
    if (!synthetic)
        kernel.emplace(make_kernel<Real>(cfg.kernel));

    std::vector<Outcome<Real>> outcomes;
    for (const auto& name : selected) {
        Outcome<Real> o{name};
        try {
            if (name == "discpolyconv") {
                need_coeffs();
                o.tolerance = Real(1e-10);
                for (int k = 0; k <= n; ++k)
                    for (long l = -4; l <= 4; ++l, ++o.checks) {
                        auto c = verify_discpolyconv(*kernel, *moments, k, l, tol);
                        o.max_deviation = std::max(o.max_deviation, scaled(c.lhs, c.rhs));
                    }
            } else if (name == "th-interp" || name == "error-recursion") {
                need_coeffs();
                o.tolerance = Real(1e-8);
                for (const auto& x : points_on<Real>(cfg.points < 0 ? 25 : cfg.points, -3, 3))
                    for (int k = 0; k <= n; ++k, ++o.checks) {
                        if (name == "th-interp") {
                            auto c = verify_th_interp(*coeffs, k, x, tol);
                            o.max_deviation = std::max(o.max_deviation, scaled(c.lhs, c.rhs));
                        } else {
                            auto e = error_functions(*coeffs, k, x, tol);
                            o.max_deviation = std::max(o.max_deviation, scaled(e.chi_from_errors, e.chi));
                        }
                    }
            } else if (name == "inverse") {
                need_coeffs();
                o.tolerance = Real(1e-12);
                for (int k = 0; k <= n; ++k, ++o.checks)
                    o.max_deviation = std::max(o.max_deviation, inverse_identity_residual(*coeffs, k) / moments->max_abs());
            } else if (name == "interpolation") {
                need_coeffs();
                o.tolerance = Real(1e-9);
                for (int k = 0; k <= n; ++k)
                    for (long l = -5; l <= 5; ++l, ++o.checks) {
                        auto e = evaluate_monomial(*coeffs, k, Real(l), tol);
                        o.max_deviation = std::max(o.max_deviation, scaled(e.value, ipow(Real(l), k)));
                    }
            } else if (name == "poisson") {
                o.tolerance = Real(1e-12);
                const int m = cfg.points < 0 ? 64 : cfg.points;
                for (int i = 0; i < m; ++i, ++o.checks) {
                    auto c = verify_poisson(*kernel, Real(i) / m, std::min<Real>(tol, Real(1e-16)));
                    o.max_deviation = std::max(o.max_deviation, scaled(c.lhs, c.rhs));
                }
            } else if (name == "wiener") {
                // deviation column holds the minimum modulus; it must exceed 10x the certified tail
                auto sym = synthetic ? zero_symbol<Real>(4096) : periodize(*kernel);
                auto w = check_wiener(sym);
                o.checks = sym.size();
                o.max_deviation = w.min_modulus;
                o.tolerance = 10 * sym.tail();
                o.status = w.holds ? "pass" : "fail";
            }
            if (o.status.empty())
                o.status = o.max_deviation <= o.tolerance ? "pass" : "fail";
        } catch (const error& e) {
            o.status = std::string("error: ") + e.what();
        }
        outcomes.push_back(o);
    }

    Table t{"verify", {"identity", "checks", "max_deviation", "tolerance", "status"}, {}};
    all_pass = true;
    for (const auto& o : outcomes) {
        all_pass = all_pass && o.status == "pass";
        t.rows.push_back({text_cell(o.name), int_cell(o.checks), real_cell<Real>(o.max_deviation), real_cell<Real>(o.tolerance), text_cell(o.status)});
    }
    return {t};
}

// ---------------------------------------------------------------- dispatch

template <class Real>
int dispatch(const Config& cfg, std::string& rendered)
{
    std::vector<Table> tables;
    int code = exit_ok;
    if (cfg.command == "moments") {
        tables = cmd_moments<Real>(cfg);
    } else if (cfg.command == "coeffs") {
        tables = cmd_coeffs<Real>(cfg);
    } else if (cfg.command == "interp") {
        tables = cmd_interp<Real>(cfg);
    } else {
        bool pass = false;
        tables = cmd_verify<Real>(cfg, pass);
        code = pass ? exit_ok : exit_verify_failed;
    }
    rendered = render(tables, cfg.format);
    return code;
}

void add_common(CLI::App* sub, Config& cfg)
{
    sub->add_option("--kernel", cfg.kernel, "Kernel: gaussian, rational (verify also: zero-symbol)");
    sub->add_option("--max-degree", cfg.max_degree, "Largest degree N")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", cfg.tol, "Truncation tolerance");
    sub->add_option("--precision", cfg.precision, "standard or extended (default: CKI_PRECISION, else standard)")
        ->check(CLI::IsMember({"standard", "extended"}));
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "Write output to PATH instead of standard output");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Config cfg;
    CLI::App app{"Cardinal interpolation by integer shifts of a Gaussian kernel", "cki"};
    app.require_subcommand(1);

    auto* moments = app.add_subcommand("moments", "Discrete moments M_k with radius and tail bound");
    add_common(moments, cfg);

    auto* coeffs = app.add_subcommand("coeffs", "Coefficient polynomials a_0..a_N");
    add_common(coeffs, cfg);
    coeffs->add_option("--route", cfg.route, "triangular, q-he, q-ne, spectral, toeplitz or all");

    auto* interp = app.add_subcommand("interp", "Grid interpolant I_n[f] from samples f(i/n)");
    add_common(interp, cfg);
    interp->add_option("samples", cfg.samples, "CSV file with rows i,value for i = 0..n")->required();
    interp->add_option("--n", cfg.n, "Grid size (checked against the file)")->check(CLI::PositiveNumber);
    interp->add_option("--points", cfg.points, "Number of equispaced evaluation points in [0, 1]")
        ->check(CLI::NonNegativeNumber);
    interp->add_option("--route", cfg.route, "triangular, q-he or q-ne");

    auto* verify = app.add_subcommand("verify", "Identity suite; exit 1 if any identity fails");
    add_common(verify, cfg);
    verify->add_option("--identity", cfg.identity,
                       "all, discpolyconv, th-interp, error-recursion, inverse, interpolation, poisson or wiener");
    verify->add_option("--points", cfg.points, "Sample points per point-based identity")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i)
            args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "cki: " << e.what() << '\n';
        return exit_failure;
    }
    for (auto* sub : app.get_subcommands())
        cfg.command = sub->get_name();

    Precision precision = Precision::standard;
    if (!cfg.precision.empty()) {
        precision = *parse_precision(cfg.precision);
    } else if (const char* env = std::getenv("CKI_PRECISION")) {
        auto p = parse_precision(env);
        if (!p) {
            err << "cki: CKI_PRECISION must be standard or extended\n";
            return exit_failure;
        }
        precision = *p;
    }

    std::string rendered;
    int code = exit_ok;
    try {
        code = precision == Precision::extended ? dispatch<extended>(cfg, rendered) : dispatch<double>(cfg, rendered);
    } catch (const Failure& f) {
        err << "cki: " << f.message << '\n';
        return f.code;
    } catch (const conditioning_cap& e) {
        err << "cki: " << e.what() << '\n';
        return exit_over_cap;
    } catch (const std::exception& e) {
        err << "cki: " << e.what() << '\n';
        return exit_failure;
    }

    if (cfg.out.empty()) {
        out << rendered;
    } else {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!(file << rendered)) {
            err << "cki: cannot write " << cfg.out << '\n';
            return exit_failure;
        }
    }
    return code;
}

} // namespace cki::cli
