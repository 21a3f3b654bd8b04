// Command-line front end: operator evaluation, kernel tables, solvers,
// eigen scan, inequality reports, reproduction sweep, verification suite.
// Output is a fixed-order JSON envelope (or a bare CSV table for the table
// commands); identical invocations produce byte-identical stdout.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
// 3 numerical non-convergence.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dfrac/cli_format.hpp"
#include "dfrac/lyapunov.hpp"
#include "dfrac/verify.hpp"

namespace {

using dfrac::CsvTable;
using dfrac::GridValue;
using dfrac::ojson;
using dfrac::OutputEnvelope;

struct CommandOutput {
    OutputEnvelope env;
    std::optional<CsvTable> csv;  // emitted instead of the envelope when set
    int code = 0;
};

bool parse_int_strict(const std::string& s, long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtol(s.c_str(), &end, 10);
    return end && *end == '\0';
}

bool parse_real_strict(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

// "m,n" with both integers -> symbolic abscissa; plain real -> tolerance path.
bool parse_symbolic(const std::string& s, GridValue& gv) {
    auto pos = s.find(',');
    if (pos == std::string::npos) return false;
    long m = 0, n = 0;
    if (!parse_int_strict(s.substr(0, pos), m)) return false;
    if (!parse_int_strict(s.substr(pos + 1), n)) return false;
    gv = GridValue{static_cast<int>(m), static_cast<int>(n)};
    return true;
}

std::vector<double> parse_real_list(const std::string& spec, const char* what) {
    std::vector<double> out;
    std::string text = spec;
    if (!text.empty() && text[0] == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw dfrac::DomainError(std::string(what) + ": cannot open " + text.substr(1));
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        for (char& ch : text)
            if (ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') ch = ',';
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double v;
        if (!parse_real_strict(item, v))
            throw dfrac::DomainError(std::string(what) + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_h(const std::string& spec, int b) {
    if (spec == "ones") return std::vector<double>(b + 1, 1.0);
    std::vector<double> h = parse_real_list(spec, "h");
    if (h.size() != static_cast<std::size_t>(b) + 1)
        throw dfrac::DomainError("h: expected " + std::to_string(b + 1) + " samples, got " +
                                 std::to_string(h.size()));
    return h;
}

ojson json_vector(const std::vector<double>& v) {
    ojson arr = ojson::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

std::vector<std::string> row_labels(int b) {
    std::vector<std::string> labels;
    for (int k = 0; k <= b + 2; ++k) labels.push_back("a+" + std::to_string(k));
    return labels;
}

double tol_default(std::vector<std::string>& warnings) {
    if (const char* s = std::getenv("DFRAC_TOL")) {
        double v;
        if (parse_real_strict(s, v) && v > 0.0) {
            warnings.push_back("tolerance taken from DFRAC_TOL");
            return v;
        }
        warnings.push_back("ignoring unparseable DFRAC_TOL");
    }
    return 1e-10;
}

// ---------------------------------------------------------------------------

struct FfactArgs {
    std::string t, nu;
    double alpha = 0.0;
};

void run_ffact(const FfactArgs& a, CommandOutput& out) {
    out.env.params["t"] = a.t;
    out.env.params["nu"] = a.nu;
    out.env.params["alpha"] = a.alpha;
    GridValue tg, ng;
    bool t_sym = parse_symbolic(a.t, tg);
    bool n_sym = parse_symbolic(a.nu, ng);
    double value;
    if (t_sym && n_sym) {
        value = dfrac::falling_factorial(tg, ng, a.alpha);
    } else {
        double tr, nr;
        if (t_sym) tr = tg.realize(a.alpha);
        else if (!parse_real_strict(a.t, tr)) throw dfrac::DomainError("t: cannot parse '" + a.t + "'");
        if (n_sym) nr = ng.realize(a.alpha);
        else if (!parse_real_strict(a.nu, nr)) throw dfrac::DomainError("nu: cannot parse '" + a.nu + "'");
        out.env.warnings.push_back("plain real abscissa: pole detection is tolerance-based");
        value = dfrac::falling_factorial(tr, nr);
    }
    out.env.results["value"] = value;
}

struct GreenArgs {
    double alpha = 0.0;
    int b = 0;
    std::string format = "json";
};

void run_green(const GreenArgs& a, CommandOutput& out) {
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    out.env.params["format"] = a.format;
    dfrac::GreenKernel kern = dfrac::green_kernel(a.alpha, a.b);
    if (a.format == "csv") {
        CsvTable table;
        table.header.push_back("t");
        for (int s = 0; s <= a.b; ++s) table.header.push_back(std::to_string(s));
        auto labels = row_labels(a.b);
        for (int k = 0; k <= a.b + 2; ++k) {
            std::vector<std::string> row;
            row.push_back(labels[k]);
            for (int s = 0; s <= a.b; ++s) row.push_back(dfrac::format_double(kern.g[k][s]));
            table.rows.push_back(std::move(row));
        }
        out.csv = std::move(table);
        return;
    }
    ojson values = ojson::array();
    for (const auto& row : kern.g) values.push_back(json_vector(row));
    ojson res = ojson::object();
    res["denom"] = kern.denom;
    res["row_labels"] = row_labels(a.b);
    ojson cols = ojson::array();
    for (int s = 0; s <= a.b; ++s) cols.push_back(std::to_string(s));
    res["col_labels"] = cols;
    res["values"] = values;
    out.env.results = res;
}

struct AlphaBArgs {
    double alpha = 0.0;
    int b = 0;
};

void run_green_max(const AlphaBArgs& a, CommandOutput& out) {
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    dfrac::DiagMax scan = dfrac::green_diag_max_exhaustive(a.alpha, a.b);
    out.env.results["closed_form"] = dfrac::green_max_closed_form(a.alpha, a.b);
    out.env.results["s_star"] = scan.s_star;
    out.env.results["max_value"] = scan.value;
}

void run_bound(const AlphaBArgs& a, CommandOutput& out) {
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    out.env.results["value"] = dfrac::lyapunov_bound(a.alpha, a.b);
}

struct SolveArgs {
    double alpha = 0.0;
    int b = 0;
    std::string h = "ones";
    double lambda = 1.0;
    std::string f;  // empty = linear solve of the forced problem
    std::string method = "green";
    double tol = 0.0;
    bool tol_set = false;
    int max_iter = 10000;
    double omega = 0.5;
    std::string y0;
};

void run_solve(const SolveArgs& a, CommandOutput& out) {
    std::vector<double> h = parse_h(a.h, a.b);
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    out.env.params["h"] = json_vector(h);
    out.env.params["lambda"] = a.lambda;
    out.env.params["method"] = a.f.empty() ? a.method : "fixed-point";
    out.env.params["f"] = a.f.empty() ? "linear-forcing" : a.f;

    if (a.f.empty()) {
        std::vector<double> eff(h);
        for (double& v : eff) v *= a.lambda;
        dfrac::GridFunction y = (a.method == "direct")
                                    ? dfrac::solve_linear_bvp_direct(a.alpha, a.b, eff)
                                    : dfrac::solve_linear_bvp_green(a.alpha, a.b, eff);
        out.env.results["abscissae"] = row_labels(a.b);
        out.env.results["y"] = json_vector(y.values);
        return;
    }

    double tol = a.tol_set ? a.tol : tol_default(out.env.warnings);
    out.env.params["tol"] = tol;
    out.env.params["max_iter"] = a.max_iter;
    out.env.params["omega"] = a.omega;
    dfrac::BvpProblem prob =
        dfrac::BvpProblem::make(a.alpha, a.b, h, a.lambda, dfrac::Nonlinearity::parse(a.f));
    std::optional<std::vector<double>> y0;
    if (!a.y0.empty()) {
        y0 = parse_real_list(a.y0, "y0");
        if (y0->size() != static_cast<std::size_t>(a.b) + 3)
            throw dfrac::DomainError("y0: expected b+3 samples");
    }
    dfrac::FixedPointResult fp = dfrac::solve_nonlinear_fixed_point(
        prob, tol, a.max_iter, a.omega, y0 ? &*y0 : nullptr);
    out.env.results["abscissae"] = row_labels(a.b);
    out.env.results["y"] = json_vector(fp.y.values);
    out.env.results["converged"] = fp.converged;
    out.env.results["iterations"] = fp.iterations;
    out.env.results["last_step"] = fp.last_step;
    out.env.results["residual"] = fp.residual;
    out.env.results["certified"] = fp.certified;
    if (!fp.converged) {
        out.env.errors.push_back("fixed-point iteration did not converge within " +
                                 std::to_string(a.max_iter) + " iterations");
        out.code = 3;
    }
}

struct EigenArgs {
    double alpha = 0.0;
    int b = 0;
    std::string h = "ones";
};

void run_eigen(const EigenArgs& a, CommandOutput& out) {
    std::vector<double> h = parse_h(a.h, a.b);
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    out.env.params["h"] = json_vector(h);
    dfrac::EigenResult eig = dfrac::perron_smallest_lambda(a.alpha, a.b, h);
    out.env.results["lambda_star"] = eig.lambda_star;
    out.env.results["rho"] = eig.rho;
    out.env.results["iterations"] = eig.iterations;
    out.env.results["residual"] = eig.residual;
    out.env.results["y_star"] = json_vector(eig.y_star.values);
    out.env.results["y_extended"] = json_vector(eig.y_extended.values);
}

struct CheckArgs {
    double alpha = 0.0;
    int b = 0;
    std::string h = "ones";
    double lambda = 1.0;
    std::string f = "linear";
    std::string y;
};

void run_check(const CheckArgs& a, CommandOutput& out) {
    std::vector<double> h = parse_h(a.h, a.b);
    out.env.params["alpha"] = a.alpha;
    out.env.params["b"] = a.b;
    out.env.params["h"] = json_vector(h);
    out.env.params["lambda"] = a.lambda;
    out.env.params["f"] = a.f;
    std::vector<double> yv = parse_real_list(a.y, "y");
    if (yv.size() != static_cast<std::size_t>(a.b) + 3)
        throw dfrac::DomainError("y: expected b+3 samples");
    out.env.params["y"] = json_vector(yv);
    dfrac::BvpProblem prob =
        dfrac::BvpProblem::make(a.alpha, a.b, h, a.lambda, dfrac::Nonlinearity::parse(a.f));
    dfrac::GridFunction y;
    y.base = dfrac::LatticeBase{GridValue{1, -2}, 0.0};
    y.values = yv;
    dfrac::LyapunovReport rep = dfrac::check_inequality(prob, y);
    out.env.results["bound_C"] = rep.bound_C;
    out.env.results["h_sum"] = rep.h_sum;
    out.env.results["eta"] = rep.eta;
    out.env.results["f_eta"] = rep.f_eta;
    out.env.results["lhs"] = rep.lhs;
    out.env.results["rhs"] = rep.rhs;
    out.env.results["holds"] = rep.holds;
    out.env.results["margin"] = rep.margin;
}

struct SweepArgs {
    std::string alphas = "1.1,1.25,1.5,1.75,1.9";
    std::string bs = "1,2,3,4,5,6,7,8,9,10";
    std::string format = "json";
};

void run_sweep(const SweepArgs& a, CommandOutput& out) {
    std::vector<double> alphas = parse_real_list(a.alphas, "alphas");
    std::vector<double> bs_real = parse_real_list(a.bs, "bs");
    std::vector<int> bs;
    for (double v : bs_real) bs.push_back(static_cast<int>(v));
    out.env.params["alphas"] = json_vector(alphas);
    ojson bj = ojson::array();
    for (int b : bs) bj.push_back(b);
    out.env.params["bs"] = bj;
    out.env.params["format"] = a.format;

    std::vector<dfrac::SweepRow> rows = dfrac::bound_sweep(alphas, bs);
    if (a.format == "csv") {
        CsvTable table;
        table.header = {"alpha", "b", "C", "g_max", "lhs", "margin", "error"};
        for (const auto& r : rows) {
            std::vector<std::string> row;
            row.push_back(dfrac::format_double(r.alpha));
            row.push_back(std::to_string(r.b));
            if (r.error.empty()) {
                row.push_back(dfrac::format_double(r.bound_C));
                row.push_back(dfrac::format_double(r.g_max));
                row.push_back(dfrac::format_double(r.lhs));
                row.push_back(dfrac::format_double(r.margin));
            } else {
                row.insert(row.end(), 4, "");
            }
            row.push_back(r.error);
            table.rows.push_back(std::move(row));
        }
        out.csv = std::move(table);
        return;
    }
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson row = ojson::object();
        row["alpha"] = r.alpha;
        row["b"] = r.b;
        if (r.error.empty()) {
            row["C"] = r.bound_C;
            row["g_max"] = r.g_max;
            row["lhs"] = r.lhs;
            row["margin"] = r.margin;
        }
        row["error"] = r.error;
        arr.push_back(std::move(row));
    }
    out.env.results["rows"] = arr;
}

void run_verify(bool full, CommandOutput& out) {
    out.env.params["mode"] = full ? "full" : "quick";
    std::vector<dfrac::CriterionResult> crits = dfrac::run_acceptance(!full);
    bool all_pass = true;
    ojson arr = ojson::array();
    for (const auto& c : crits) {
        std::fprintf(stderr, "%s\n", dfrac::format_criterion_line(c).c_str());
        all_pass = all_pass && c.pass;
        ojson row = ojson::object();
        row["id"] = c.id;
        row["name"] = c.name;
        row["pass"] = c.pass;
        row["detail"] = c.detail;
        arr.push_back(std::move(row));
    }
    out.env.results["criteria"] = arr;
    out.env.results["all_pass"] = all_pass;
    if (!all_pass) {
        out.env.errors.push_back("verification failed");
        out.code = 1;
    }
}

int emit(CommandOutput& out) {
    out.env.sign_sigma = dfrac::resolved_sign();
    if (out.csv && out.code == 0) {
        std::fputs(dfrac::csv_emit(*out.csv).c_str(), stdout);
    } else {
        std::string s = dfrac::dump_deterministic(dfrac::envelope_json(out.env));
        std::fputs(s.c_str(), stdout);
        std::fputc('\n', stdout);
    }
    for (const auto& e : out.env.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
    return out.code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete fractional operators, right-focal kernel, and bound tools"};
    app.require_subcommand(1);
    // --h is the weight-vector option, so help is long-form only.
    app.set_help_flag("--help", "display help and exit");
    auto add_sub = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "display help and exit");
        return sub;
    };

    FfactArgs ffact_args;
    auto* ffact = add_sub("ffact", "falling-factorial power t^(nu)");
    ffact->add_option("--t", ffact_args.t, "abscissa: symbolic m,n or plain real")->required();
    ffact->add_option("--nu", ffact_args.nu, "exponent: symbolic m,n or plain real")->required();
    ffact->add_option("--alpha", ffact_args.alpha, "order the symbols realize against")->required();

    GreenArgs green_args;
    auto* green = add_sub("green", "tabulate the kernel over the full index rectangle");
    green->add_option("--alpha", green_args.alpha)->required();
    green->add_option("--b", green_args.b)->required();
    green->add_option("--format", green_args.format)->check(CLI::IsMember({"json", "csv"}));

    AlphaBArgs gmax_args;
    auto* gmax = add_sub("green-max", "diagonal maximum: closed form and exhaustive scan");
    gmax->add_option("--alpha", gmax_args.alpha)->required();
    gmax->add_option("--b", gmax_args.b)->required();

    AlphaBArgs bound_args;
    auto* bound = add_sub("bound", "closed-form constant C(alpha,b)");
    bound->add_option("--alpha", bound_args.alpha)->required();
    bound->add_option("--b", bound_args.b)->required();

    SolveArgs solve_args;
    auto* solve = add_sub("solve", "solve the boundary value problem");
    solve->add_option("--alpha", solve_args.alpha)->required();
    solve->add_option("--b", solve_args.b)->required();
    solve->add_option("--h", solve_args.h, "ones | comma list | @file.csv");
    solve->add_option("--lambda", solve_args.lambda, "forcing scale");
    solve->add_option("--f", solve_args.f, "nonlinearity: linear|pow:p|exp|@table.csv (fixed-point solve)");
    solve->add_option("--method", solve_args.method)->check(CLI::IsMember({"green", "direct"}));
    auto* tol_opt = solve->add_option("--tol", solve_args.tol, "fixed-point step tolerance");
    solve->add_option("--max-iter", solve_args.max_iter);
    solve->add_option("--omega", solve_args.omega, "damping factor");
    solve->add_option("--y0", solve_args.y0, "initial iterate (comma list or @file)");

    EigenArgs eigen_args;
    auto* eigen = add_sub("eigen", "critical forcing scale and Perron vector");
    eigen->add_option("--alpha", eigen_args.alpha)->required();
    eigen->add_option("--b", eigen_args.b)->required();
    eigen->add_option("--h", eigen_args.h, "ones | comma list | @file.csv");

    CheckArgs check_args;
    auto* check = add_sub("check", "inequality report for a candidate solution");
    check->add_option("--alpha", check_args.alpha)->required();
    check->add_option("--b", check_args.b)->required();
    check->add_option("--h", check_args.h, "ones | comma list | @file.csv");
    check->add_option("--lambda", check_args.lambda)->required();
    check->add_option("--f", check_args.f, "nonlinearity tag");
    check->add_option("--y", check_args.y, "candidate solution, b+3 samples")->required();

    SweepArgs sweep_args;
    auto* sweep = add_sub("sweep", "reproduction table over an (alpha, b) grid");
    sweep->add_option("--alphas", sweep_args.alphas, "comma list");
    sweep->add_option("--bs", sweep_args.bs, "comma list");
    sweep->add_option("--format", sweep_args.format)->check(CLI::IsMember({"json", "csv"}));

    auto* verify = add_sub("verify", "run the acceptance criteria");
    bool verify_full = false, verify_quick = false;
    verify->add_flag("--full", verify_full, "complete sweep");
    verify->add_flag("--quick", verify_quick, "reduced sweep (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CommandOutput out;
    out.env.command = app.get_subcommands().front()->get_name();
    try {
        if (*ffact) run_ffact(ffact_args, out);
        else if (*green) run_green(green_args, out);
        else if (*gmax) run_green_max(gmax_args, out);
        else if (*bound) run_bound(bound_args, out);
        else if (*solve) {
            solve_args.tol_set = tol_opt->count() > 0;
            run_solve(solve_args, out);
        } else if (*eigen) run_eigen(eigen_args, out);
        else if (*check) run_check(check_args, out);
        else if (*sweep) run_sweep(sweep_args, out);
        else if (*verify) run_verify(verify_full && !verify_quick, out);
    } catch (const dfrac::NoConvergenceError& e) {
        out.env.errors.push_back(e.what());
        out.code = 3;
    } catch (const std::exception& e) {
        out.env.errors.push_back(e.what());
        out.code = 2;
    }
    return emit(out);
}
