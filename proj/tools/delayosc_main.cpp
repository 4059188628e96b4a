// delayosc command line: tabulate solutions and fundamental solutions of the
// delayed oscillator, evaluate the delay trig functions, and run the
// residual / reference-integrator verification.
//
// Exit codes: 0 success (verify: all thresholds passed), 1 verification
// failure, 2 configuration error, 3 expression error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "delayosc/cauchy.hpp"
#include "delayosc/oracle.hpp"
#include "delayosc/piecewise.hpp"
#include "delayosc/presets.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitExpressionError = 3;

constexpr double kResidualThreshold = 1e-6;
constexpr double kVsRkThreshold = 1e-4;
constexpr int kResidualPointsPerInterval = 20;

struct GridSpec {
    double start = 0.0;
    double end = 5.0;
    int points = 101;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw delayosc::InvalidParameter("grid must be START:END:N");
    }
    try {
        g.start = std::stod(text.substr(0, first));
        g.end = std::stod(text.substr(first + 1, second - first - 1));
        g.points = std::stoi(text.substr(second + 1));
    } catch (const std::exception&) {
        throw delayosc::InvalidParameter("grid must be START:END:N with numeric fields");
    }
    if (g.points < 2) throw delayosc::InvalidParameter("grid needs at least 2 points");
    if (!(g.end > g.start)) throw delayosc::InvalidParameter("grid end must exceed start");
    return g;
}

std::vector<double> grid_points(const GridSpec& g) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.points));
    const double step = (g.end - g.start) / static_cast<double>(g.points - 1);
    for (int i = 0; i < g.points; ++i) {
        out.push_back(i == g.points - 1 ? g.end : g.start + step * static_cast<double>(i));
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// All output goes through a temp file renamed on success, so a failing run
// never leaves a partial data file behind.
void write_atomically(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw delayosc::InvalidParameter("cannot open output path: " + path);
        out << contents;
        if (!out.flush()) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw delayosc::InvalidParameter("failed writing output: " + path);
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw delayosc::InvalidParameter("failed moving output into place: " + path);
    }
}

struct Table {
    std::vector<std::string> meta;  // without the leading '# '
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render_csv(const Table& table) {
    std::ostringstream out;
    for (const auto& m : table.meta) out << "# " << m << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << fmt(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const Table& table) {
    ordered_json doc;
    doc["meta"] = table.meta;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    return doc.dump(2) + "\n";
}

void emit(const Table& table, const std::string& path, const std::string& format) {
    if (format == "csv") {
        write_atomically(path, render_csv(table));
    } else if (format == "json") {
        write_atomically(path, render_json(table));
    } else {
        throw delayosc::InvalidParameter("format must be csv or json");
    }
}

struct ProblemOptions {
    double omega1 = 1.0;
    double omega2 = 1.0;
    double tau = 1.0;
    int horizon = 8;
    std::string phi = "1";
    std::string f = "0";
    std::string kernel = "x2";
    int quad_nodes = 16;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--omega1", omega1, "frequency of the undelayed term");
        cmd->add_option("--omega2", omega2, "frequency of the delayed term");
        cmd->add_option("--tau", tau, "delay (> 0)");
        cmd->add_option("--horizon", horizon, "interval count K; horizon is K*tau");
        cmd->add_option("--phi", phi, "history expression on [-tau, 0]");
        cmd->add_option("--f", f, "forcing expression");
        cmd->add_option("--kernel", kernel, "forcing kernel: x2 (default) or x1 (literal)")
            ->check(CLI::IsMember({"x2", "x1"}));
        cmd->add_option("--quad-nodes", quad_nodes, "Gauss-Legendre nodes per panel [2, 64]");
    }

    delayosc::Problem to_problem() const {
        delayosc::Problem p;
        p.omega1 = omega1;
        p.omega2 = omega2;
        p.tau = tau;
        p.intervals = horizon;
        p.history = delayosc::Expression::parse(phi);
        p.forcing = delayosc::Expression::parse(f);
        p.kernel = kernel == "x1" ? delayosc::ForcingKernel::X1Literal
                                  : delayosc::ForcingKernel::X2Default;
        return p;
    }

    std::vector<std::string> meta_lines(const std::string& command) const {
        return {
            "delayosc " + command,
            "omega1=" + fmt(omega1) + " omega2=" + fmt(omega2) + " tau=" + fmt(tau) +
                " horizon=" + std::to_string(horizon),
            "phi=" + phi + " f=" + f,
            "kernel=" + kernel + " quad-nodes=" + std::to_string(quad_nodes),
        };
    }
};

void warn_if_long_horizon(int horizon) {
    if (horizon > delayosc::kConditioningWarnIntervals) {
        std::cerr << "warning: horizon of " << horizon
                  << " intervals exceeds " << delayosc::kConditioningWarnIntervals
                  << "; late-interval evaluation is increasingly ill-conditioned\n";
    }
}

void check_grid_against_horizon(const GridSpec& grid, double tau, int horizon,
                                double lowest) {
    if (grid.start < lowest - 1e-12 * tau) {
        throw delayosc::InvalidParameter("grid start precedes -tau");
    }
    const double cap = static_cast<double>(horizon) * tau;
    if (grid.end > cap * (1.0 + 1e-12) + 1e-300) {
        throw delayosc::OutOfHorizon("grid end " + fmt(grid.end) +
                                     " exceeds horizon K*tau = " + fmt(cap));
    }
}

// value at t, falling back to the left limit at the exact horizon endpoint
double eval_solution_capped(const delayosc::Solution& sol, double t, int order) {
    if (t >= sol.horizon()) return sol.eval_limit(t, order, delayosc::Side::Left);
    return sol.eval(t, order);
}

double eval_piecewise_capped(const delayosc::PiecewiseSolution& ps, double t, int order) {
    if (t >= ps.horizon()) return ps.eval_limit(t, order, delayosc::Side::Left);
    return ps.eval(t, order);
}

int cmd_solve(const ProblemOptions& opts, const GridSpec& grid, const std::string& out,
              const std::string& format) {
    warn_if_long_horizon(opts.horizon);
    delayosc::Problem problem = opts.to_problem();
    check_grid_against_horizon(grid, problem.tau, problem.intervals, -problem.tau);
    delayosc::Solution sol(std::move(problem), {opts.quad_nodes, true});

    Table table;
    table.meta = opts.meta_lines("solve");
    table.meta.push_back("grid=" + fmt(grid.start) + ":" + fmt(grid.end) + ":" +
                         std::to_string(grid.points));
    table.columns = {"t", "x", "xp"};
    for (double t : grid_points(grid)) {
        table.rows.push_back({t, eval_solution_capped(sol, t, 0), eval_solution_capped(sol, t, 1)});
    }
    emit(table, out, format);
    return 0;
}

int cmd_fundamental(const ProblemOptions& opts, const GridSpec& grid, const std::string& out,
                    const std::string& format) {
    warn_if_long_horizon(opts.horizon);
    check_grid_against_horizon(grid, opts.tau, opts.horizon, -opts.tau);
    const auto x1 = delayosc::build_fundamental(delayosc::FundamentalKind::X1, opts.omega1,
                                                opts.omega2, opts.tau, opts.horizon);
    const auto x2 = delayosc::build_fundamental(delayosc::FundamentalKind::X2, opts.omega1,
                                                opts.omega2, opts.tau, opts.horizon);

    Table table;
    table.meta = opts.meta_lines("fundamental");
    table.meta.push_back("grid=" + fmt(grid.start) + ":" + fmt(grid.end) + ":" +
                         std::to_string(grid.points));
    table.columns = {"t", "x1", "x1p", "x1pp", "x2", "x2p", "x2pp"};
    for (double t : grid_points(grid)) {
        table.rows.push_back({t, eval_piecewise_capped(x1, t, 0), eval_piecewise_capped(x1, t, 1),
                              eval_piecewise_capped(x1, t, 2), eval_piecewise_capped(x2, t, 0),
                              eval_piecewise_capped(x2, t, 1), eval_piecewise_capped(x2, t, 2)});
    }
    emit(table, out, format);
    return 0;
}

int cmd_delay_trig(double omega, double tau, const GridSpec& grid, const std::string& out,
                   const std::string& format) {
    Table table;
    table.meta = {"delayosc delay-trig", "omega=" + fmt(omega) + " tau=" + fmt(tau),
                  "grid=" + fmt(grid.start) + ":" + fmt(grid.end) + ":" +
                      std::to_string(grid.points)};
    table.columns = {"t", "delay_cos", "delay_sin"};
    for (double t : grid_points(grid)) {
        const double ratio = t / tau;
        const bool knot = (t == -tau) || (ratio == std::round(ratio) && t >= -tau);
        if (knot) {
            // duplicate knot rows: left limit then right value
            table.rows.push_back({t, delayosc::delay_cosine_limit(omega, tau, t, delayosc::Side::Left),
                                  delayosc::delay_sine_limit(omega, tau, t, delayosc::Side::Left)});
            table.rows.push_back({t, delayosc::delay_cosine_limit(omega, tau, t, delayosc::Side::Right),
                                  delayosc::delay_sine_limit(omega, tau, t, delayosc::Side::Right)});
        } else {
            table.rows.push_back({t, delayosc::delay_cosine(omega, tau, t),
                                  delayosc::delay_sine(omega, tau, t)});
        }
    }
    emit(table, out, format);
    return 0;
}

struct VerifyCase {
    std::string name;
    std::string phi;
    std::string f;
    delayosc::Problem problem;
};

ordered_json verify_case(const VerifyCase& c, int quad_nodes, double rk_h, bool& pass_out) {
    using delayosc::Side;
    delayosc::Solution sol(c.problem, {quad_nodes, true});

    delayosc::Evaluator eval = [&](double t) {
        return delayosc::PointEval{sol.eval(t, 0), sol.eval(t, 1), sol.eval(t, 2)};
    };
    delayosc::SidedEvaluator sided = [&](double t, Side side) {
        return delayosc::PointEval{sol.eval_limit(t, 0, side), sol.eval_limit(t, 1, side),
                                   sol.eval_limit(t, 2, side)};
    };
    const delayosc::DelayIvp ivp = sol.ivp();
    const auto report = delayosc::residual(eval, ivp, kResidualPointsPerInterval, &sided);

    const auto traj = delayosc::rk_reference(ivp, rk_h);
    std::vector<double> grid;
    const int samples = 500;
    for (int i = 0; i <= samples; ++i) {
        grid.push_back(sol.horizon() * static_cast<double>(i) / static_cast<double>(samples + 1));
    }
    const double max_vs_rk = delayosc::compare(
        [&](double t) { return sol.eval(t, 0); },
        [&](double t) { return traj.value_at(t); }, grid);

    const bool pass = report.max_residual < kResidualThreshold && max_vs_rk < kVsRkThreshold;
    pass_out = pass;

    ordered_json jc;
    jc["name"] = c.name;
    jc["omega1"] = c.problem.omega1;
    jc["omega2"] = c.problem.omega2;
    jc["tau"] = c.problem.tau;
    jc["horizon"] = c.problem.intervals;
    jc["phi"] = c.phi;
    jc["f"] = c.f;
    jc["kernel"] = c.problem.kernel == delayosc::ForcingKernel::X2Default ? "x2" : "x1";
    jc["max_residual"] = report.max_residual;
    jc["max_vs_rk"] = max_vs_rk;
    ordered_json jumps = ordered_json::array();
    for (const auto& j : report.knot_jumps) {
        jumps.push_back({{"t", j.t}, {"dx", j.dx}, {"dxp", j.dxp}, {"dxpp", j.dxpp}});
    }
    jc["knot_jumps"] = jumps;
    jc["pass"] = pass;
    return jc;
}

int cmd_verify(const std::optional<ProblemOptions>& custom, int quad_nodes, double rk_h,
               const std::string& out) {
    std::vector<VerifyCase> cases;
    if (custom) {
        warn_if_long_horizon(custom->horizon);
        cases.push_back({"custom", custom->phi, custom->f, custom->to_problem()});
    } else {
        for (const auto& preset : delayosc::canned_problems()) {
            cases.push_back({preset.name, preset.phi, preset.f, preset.problem});
        }
    }

    ordered_json doc;
    doc["thresholds"] = {{"residual", kResidualThreshold}, {"vs_rk", kVsRkThreshold}};
    doc["rk_h"] = rk_h;
    doc["quad_nodes"] = quad_nodes;
    ordered_json jcases = ordered_json::array();
    bool all_pass = true;
    for (const auto& c : cases) {
        bool pass = false;
        jcases.push_back(verify_case(c, quad_nodes, rk_h, pass));
        all_pass = all_pass && pass;
    }
    doc["cases"] = jcases;
    doc["pass"] = all_pass;

    const std::string rendered = doc.dump(2) + "\n";
    if (out.empty()) {
        std::cout << rendered;
    } else {
        write_atomically(out, rendered);
    }
    return all_pass ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analytical solver for the second-order oscillator with one constant delay"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "tabulate the Cauchy solution (t, x, x')");
    ProblemOptions solve_opts;
    std::string solve_grid = "0:5:101", solve_out, solve_format = "csv";
    solve_opts.add_flags(solve_cmd);
    solve_cmd->add_option("--grid", solve_grid, "tabulation grid START:END:N");
    solve_cmd->add_option("--out", solve_out, "output path")->required();
    solve_cmd->add_option("--format", solve_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    solve_cmd->set_config("--config", "", "flat key=value config; flags win");

    // fundamental
    auto* fund_cmd =
        app.add_subcommand("fundamental", "tabulate x1, x2 and their first two derivatives");
    ProblemOptions fund_opts;
    std::string fund_grid = "0:5:101", fund_out, fund_format = "csv";
    fund_opts.add_flags(fund_cmd);
    fund_cmd->add_option("--grid", fund_grid, "tabulation grid START:END:N");
    fund_cmd->add_option("--out", fund_out, "output path")->required();
    fund_cmd->add_option("--format", fund_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    fund_cmd->set_config("--config", "", "flat key=value config; flags win");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "residual + reference-integrator verification, JSON report");
    ProblemOptions verify_opts;
    double rk_h = 1e-3;
    std::string verify_out;
    verify_opts.add_flags(verify_cmd);
    verify_cmd->add_option("--rk-h", rk_h, "reference integrator step");
    verify_cmd->add_option("--out", verify_out, "report path (default: stdout)");
    verify_cmd->set_config("--config", "", "flat key=value config; flags win");

    // delay-trig
    auto* trig_cmd =
        app.add_subcommand("delay-trig", "tabulate the delay cosine and sine functions");
    double trig_omega = 1.0, trig_tau = 1.0;
    std::string trig_grid = "-1:5:61", trig_out, trig_format = "csv";
    trig_cmd->add_option("--omega", trig_omega, "frequency");
    trig_cmd->add_option("--tau", trig_tau, "delay (> 0)");
    trig_cmd->add_option("--grid", trig_grid, "tabulation grid START:END:N");
    trig_cmd->add_option("--out", trig_out, "output path")->required();
    trig_cmd->add_option("--format", trig_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    trig_cmd->set_config("--config", "", "flat key=value config; flags win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve(solve_opts, parse_grid(solve_grid), solve_out, solve_format);
        }
        if (fund_cmd->parsed()) {
            return cmd_fundamental(fund_opts, parse_grid(fund_grid), fund_out, fund_format);
        }
        if (verify_cmd->parsed()) {
            std::optional<ProblemOptions> custom;
            const bool customized =
                verify_cmd->count("--omega1") || verify_cmd->count("--omega2") ||
                verify_cmd->count("--tau") || verify_cmd->count("--horizon") ||
                verify_cmd->count("--phi") || verify_cmd->count("--f") ||
                verify_cmd->count("--kernel");
            if (customized) custom = verify_opts;
            return cmd_verify(custom, verify_opts.quad_nodes, rk_h, verify_out);
        }
        if (trig_cmd->parsed()) {
            return cmd_delay_trig(trig_omega, trig_tau, parse_grid(trig_grid), trig_out,
                                  trig_format);
        }
    } catch (const delayosc::ExpressionError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return kExitExpressionError;
    } catch (const delayosc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
