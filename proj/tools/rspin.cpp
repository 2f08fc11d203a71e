// rspin: command-line front end for the Gelfand-Dickey flows, the descent
// calculus and the change-of-variables check on correlator potentials.
//
// Exit codes: 0 success or pass, 1 verification failure, 2 usage or input error.

#include "rspin/hierarchy.hpp"
#include "rspin/potential.hpp"
#include "rspin/table_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace rspin;
using nlohmann::json;

namespace {

enum ExitCode { Ok = 0, CheckFailed = 1, UsageError = 2 };

struct Output {
    bool structured = false;
    json doc = json::object();
    std::vector<std::string> lines;

    void line(const std::string& s) { lines.push_back(s); }

    void flush(std::ostream& os) const
    {
        if (structured)
            os << doc.dump(2) << "\n";
        else
            for (const auto& l : lines)
                os << l << "\n";
    }
};

json string_list(const std::vector<std::string>& v)
{
    json out = json::array();
    for (const auto& s : v)
        out.push_back(s);
    return out;
}

int cmd_root(int r, int depth, Output& out)
{
    const auto R = rth_root(build_lax(r).op(), depth);
    out.line(R.str());
    out.doc["root"] = R.str();
    out.doc["watermark"] = R.watermark() ? json(*R.watermark()) : json(nullptr);
    return Ok;
}

int cmd_flow(int r, std::optional<long> mtilde, std::optional<int> a, std::optional<int> m,
             std::optional<int> depth, Output& out)
{
    const LaxOperator Q(r);
    const FlowResult f = mtilde ? flow_tilde(Q, *mtilde, depth) : flow_standard(Q, *a, *m, depth);
    const auto eqs = evolution_equations(f);
    for (const auto& e : eqs)
        out.line(e);
    out.doc["presentation"] = f.presentation == Presentation::Tilde ? "tilde" : "standard";
    out.doc["a"] = f.index.a;
    out.doc["m"] = f.index.m;
    out.doc["prefactor"] = f.prefactor.str();
    out.doc["equations"] = string_list(eqs);
    return Ok;
}

int cmd_check_flows(int r, int max_a, std::optional<int> depth, Output& out)
{
    bool pass = true;
    json grid = json::array();
    for (const auto& rep : check_flow_grid(r, max_a, depth)) {
        pass = pass && rep.pass;
        out.line(rep.line());
        grid.push_back({{"a", rep.a}, {"m", rep.m}, {"coefficient", to_string(rep.coefficient)}, {"pass", rep.pass}});
    }
    out.line(pass ? "PASS" : "FAIL");
    out.doc["grid"] = grid;
    out.doc["pass"] = pass;
    return pass ? Ok : CheckFailed;
}

int cmd_descent(int r, const std::vector<int>& mtilde, Output& out)
{
    for (int mt : mtilde)
        if (mt < 0)
            throw CLI::ValidationError("--mtilde", "entries must be nonnegative, got " + std::to_string(mt));
    const ClosedForm cf = descent_closed_form(TypeTuple(mtilde, r));
    json positions = json::array();
    for (std::size_t i = 0; i < cf.positions.size(); ++i) {
        const auto& p = cf.positions[i];
        std::string l = "position " + std::to_string(i + 1) + ": mt=" + std::to_string(p.mtilde) +
                        " a=" + std::to_string(p.index.a) + " m=" + std::to_string(p.index.m) +
                        " factor " + p.factor.str();
        if (p.vanishing)
            l += " (vanishing: mt = -1 mod r)";
        out.line(l);
        positions.push_back({{"mtilde", p.mtilde},
                             {"a", p.index.a},
                             {"m", p.index.m},
                             {"factor", p.factor.str()},
                             {"vanishing", p.vanishing}});
    }
    out.line("base " + cf.base.str());
    out.line("total scalar " + to_string(cf.total_scalar()));
    out.doc["positions"] = positions;
    out.doc["base"] = cf.base.entries();
    out.doc["total_scalar"] = to_string(cf.total_scalar());
    return Ok;
}

int cmd_degree(int r, int genus, const std::vector<int>& m, Output& out)
{
    const Rational D = virtual_degree(TypeTuple(m, r, genus));
    const bool integral = is_integer(D);
    out.line("D = " + to_string(D) + (integral ? " (integral)" : " (non-integral)"));
    out.doc["degree"] = to_string(D);
    out.doc["integral"] = integral;
    return Ok;
}

int cmd_potential_check(int r, unsigned order, const std::optional<std::string>& table_path, int max_genus,
                        Output& out)
{
    const CorrelatorTable table = table_path ? load_table(*table_path) : CorrelatorTable(r, TableMode::Formal);
    if (table.r() != r)
        throw Error("table is for r=" + std::to_string(table.r()) + " but --r is " + std::to_string(r));
    const auto rep = verify_change_of_variables(table, {order, max_genus});
    out.doc["mode"] = to_string(table.mode());
    out.doc["max_genus"] = rep.potentials.max_genus;
    out.doc["terms_compared"] = rep.terms_compared;
    out.doc["pass"] = rep.pass;
    if (rep.pass) {
        out.line("PASS (" + std::to_string(rep.terms_compared) + " coefficients compared, " + to_string(table.mode()) +
                 " mode, genus <= " + std::to_string(rep.potentials.max_genus) + ")");
        return Ok;
    }
    const auto& mm = rep.mismatches.front();
    out.line("FAIL at " + mm.term + ": Phi has " + mm.phi_value + ", chi~ has " + mm.substituted_value);
    out.doc["first_mismatch"] = {{"term", mm.term}, {"phi", mm.phi_value}, {"chi_tilde", mm.substituted_value}};
    return CheckFailed;
}

int cmd_seed_table(int r, int max_points, const std::string& path, Output& out)
{
    const CorrelatorTable t = seed_genus0_wk(CorrelatorTable(r), max_points);
    save_table(t, path);
    out.line("wrote " + std::to_string(t.entries().size()) + " entries to " + path);
    out.doc["entries"] = t.entries().size();
    out.doc["path"] = path;
    return Ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact computations for r-spin descendants and the Gelfand-Dickey hierarchy"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

    int r = 2;
    auto* root = app.add_subcommand("root", "Print Q^{1/r} for the Lax operator");
    root->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    int root_depth = 0;
    root->add_option("--depth", root_depth, "Certified orders below the leading one")
        ->required()
        ->check(CLI::Range(1, 200));

    auto* flow = app.add_subcommand("flow", "Print the evolution equations of one flow");
    flow->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    std::optional<long> flow_mtilde;
    std::optional<int> flow_a, flow_m, flow_depth;
    auto* opt_mt = flow->add_option("--tilde-index", flow_mtilde, "Tilde index mt = ar + m")
                       ->check(CLI::NonNegativeNumber);
    auto* opt_a = flow->add_option("--a", flow_a, "Descendant exponent a")->check(CLI::NonNegativeNumber);
    auto* opt_m = flow->add_option("--m", flow_m, "Primary index m");
    flow->add_option("--depth", flow_depth, "Retained orders for the fractional power")
        ->check(CLI::Range(1, 200));
    opt_mt->excludes(opt_a)->excludes(opt_m);
    opt_a->needs(opt_m);
    opt_m->needs(opt_a);

    auto* check_flows = app.add_subcommand("check-flows", "Compare the two flow presentations on a grid");
    check_flows->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    int max_a = 0;
    check_flows->add_option("--max-a", max_a, "Largest descendant exponent")
        ->required()
        ->check(CLI::NonNegativeNumber);
    std::optional<int> check_depth;
    check_flows->add_option("--depth", check_depth, "Retained orders")->check(CLI::Range(1, 200));

    auto* descent = app.add_subcommand("descent", "Closed-form descent factors of a tilde type");
    descent->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    std::vector<int> mtilde;
    descent->add_option("--mtilde", mtilde, "Comma-separated tilde indices")->required()->delimiter(',');

    auto* degree = app.add_subcommand("degree", "Virtual degree of a type tuple");
    degree->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    int genus = 0;
    degree->add_option("--genus", genus, "Genus")->required()->check(CLI::NonNegativeNumber);
    std::vector<int> type;
    degree->add_option("--m", type, "Comma-separated type entries")->required()->delimiter(',');

    auto* potential = app.add_subcommand("potential-check", "Verify chi~(t~) = Phi(t) to a truncation order");
    potential->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    unsigned order = 6;
    potential->add_option("--order", order, "Truncation order")->check(CLI::Range(1, 12));
    std::optional<std::string> table_path;
    bool formal = false;
    auto* opt_table = potential->add_option("--table", table_path, "Correlator table file");
    auto* opt_formal = potential->add_flag("--formal", formal, "Use opaque correlator atoms");
    opt_table->excludes(opt_formal);
    int max_genus = 0;
    potential->add_option("--max-genus", max_genus, "Largest genus (formal mode only)")
        ->check(CLI::Range(0, 4));

    auto* seed = app.add_subcommand("seed-table", "Write the genus-zero r=2 table from the string equation");
    seed->add_option("--r", r, "Root index")->required()->check(CLI::Range(2, 64));
    int max_points = 6;
    seed->add_option("--max-points", max_points, "Largest number of insertions")->check(CLI::Range(3, 12));
    std::string out_path;
    seed->add_option("--out", out_path, "Output path")->required();

    try {
        app.parse(argc, argv);
        if (potential->parsed() && !table_path && !formal)
            throw CLI::RequiredError("one of --table or --formal");
        if (flow->parsed() && !flow_mtilde && !flow_a)
            throw CLI::RequiredError("--tilde-index or --a/--m");
        if (flow->parsed() && flow_m && (*flow_m < 0 || *flow_m > r - 1))
            throw CLI::ValidationError("--m", "must lie in 0.." + std::to_string(r - 1));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : UsageError;
    }

    Output out;
    out.structured = format == "json";
    int code = Ok;
    try {
        if (root->parsed()) {
            out.doc["command"] = "root";
            code = cmd_root(r, root_depth, out);
        } else if (flow->parsed()) {
            out.doc["command"] = "flow";
            code = cmd_flow(r, flow_mtilde, flow_a, flow_m, flow_depth, out);
        } else if (check_flows->parsed()) {
            out.doc["command"] = "check-flows";
            code = cmd_check_flows(r, max_a, check_depth, out);
        } else if (descent->parsed()) {
            out.doc["command"] = "descent";
            code = cmd_descent(r, mtilde, out);
        } else if (degree->parsed()) {
            out.doc["command"] = "degree";
            code = cmd_degree(r, genus, type, out);
        } else if (potential->parsed()) {
            out.doc["command"] = "potential-check";
            code = cmd_potential_check(r, order, table_path, max_genus, out);
        } else if (seed->parsed()) {
            out.doc["command"] = "seed-table";
            code = cmd_seed_table(r, max_points, out_path, out);
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UsageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UsageError;
    }
    out.doc["r"] = r;
    out.doc["exit_code"] = code;
    out.flush(std::cout);
    return code;
}
