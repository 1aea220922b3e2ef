#include "gmmcsp/generators.hpp"
#include "gmmcsp/instance_io.hpp"
#include "gmmcsp/oracle.hpp"
#include "gmmcsp/solver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int exit_sat = 0;
constexpr int exit_unsat = 1;
constexpr int exit_error = 2;

std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw gmmcsp::Error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t closure_cap_from_env()
{
    if (const char * env = std::getenv("GMM_CLOSURE_CAP")) {
        char * end = nullptr;
        const unsigned long long cap = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && cap > 0)
            return static_cast<std::size_t>(cap);
        std::cerr << "warning: ignoring unparsable GMM_CLOSURE_CAP='" << env << "'\n";
    }
    return gmmcsp::default_closure_cap;
}

void print_warnings(const gmmcsp::ParsedInstance & parsed)
{
    for (const std::string & w : parsed.warnings)
        std::cerr << "warning: " << w << "\n";
}

void print_witness(const gmmcsp::Tuple & witness)
{
    std::cout << "w";
    for (gmmcsp::Value v : witness)
        std::cout << ' ' << static_cast<int>(v);
    std::cout << "\n";
}

int run_solve(const std::string & path, bool witness, bool validate, bool stats)
{
    gmmcsp::ParsedInstance parsed = gmmcsp::parse_instance(read_file(path));
    print_warnings(parsed);

    gmmcsp::SolveOptions options;
    options.validate_constraints = validate;
    options.closure_cap = closure_cap_from_env();
    const gmmcsp::SolveResult result = gmmcsp::solve(parsed.instance, parsed.op, options);

    if (stats) {
        std::size_t l = 1;
        for (const gmmcsp::ConstraintStat & s : result.stats)
            std::cout << "# constraint " << l++ << ": rep size " << s.rep_size
                      << ", signature " << s.sig_size << ", " << s.millis << " ms\n";
    }
    if (result.status == gmmcsp::Status::Sat) {
        std::cout << "SAT\n";
        if (witness)
            print_witness(*result.witness);
        return exit_sat;
    }
    std::cout << "UNSAT\n";
    return exit_unsat;
}

int run_oracle(const std::string & path, std::size_t budget, bool witness)
{
    gmmcsp::ParsedInstance parsed = gmmcsp::parse_instance(read_file(path));
    print_warnings(parsed);

    gmmcsp::OracleBudget oracle_budget;
    oracle_budget.max_assignments = budget;
    oracle_budget.max_closure_tuples = closure_cap_from_env();
    const gmmcsp::SolveResult result = gmmcsp::brute_force_solve(parsed.instance, oracle_budget);

    if (result.status == gmmcsp::Status::Sat) {
        std::cout << "SAT\n";
        if (witness)
            print_witness(*result.witness);
        return exit_sat;
    }
    std::cout << "UNSAT\n";
    return exit_unsat;
}

int run_classify(const std::string & path)
{
    gmmcsp::OperationTable op = gmmcsp::parse_operation(read_file(path));
    const gmmcsp::PairTable pairs = gmmcsp::validate_gmm(op); // throws NotGmm with the pair
    for (int a = 0; a < op.domain_size(); ++a)
        for (int b = a; b < op.domain_size(); ++b) {
            const bool minority = pairs.kind(static_cast<gmmcsp::Value>(a),
                static_cast<gmmcsp::Value>(b)) == gmmcsp::PairKind::Minority;
            std::cout << "pair " << a << ' ' << b << ' '
                      << (minority ? "minority" : "majority") << "\n";
        }
    return exit_sat;
}

int run_gen(const std::string & family, int vars, int constraints, std::uint64_t seed,
    const std::string & out_path)
{
    gmmcsp::GeneratorSpec spec;
    spec.family = gmmcsp::family_from_name(family);
    spec.num_vars = vars;
    spec.num_constraints = constraints;
    spec.seed = seed;

    auto [op, instance] = gmmcsp::gen_instance(spec);
    const std::string text = gmmcsp::serialize_instance(op, instance);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw gmmcsp::Error("cannot write '" + out_path + "'");
        out << text;
    }
    return exit_sat;
}

int run_check_rep(const std::string & path, std::size_t budget)
{
    gmmcsp::ParsedInstance parsed = gmmcsp::parse_instance(read_file(path));
    print_warnings(parsed);

    const gmmcsp::PairTable pairs = gmmcsp::validate_gmm(parsed.op);
    const std::size_t cap = closure_cap_from_env();

    gmmcsp::SolverState state = gmmcsp::make_initial_state(parsed.instance, parsed.op, pairs);
    for (std::size_t l = 0; l < parsed.instance.constraints.size() && !state.rep.empty(); ++l)
        gmmcsp::apply_next_constraint(state, parsed.instance, parsed.op, pairs, cap);

    gmmcsp::OracleBudget oracle_budget;
    oracle_budget.max_assignments = budget;
    const gmmcsp::Relation expected = gmmcsp::enumerate_solutions(parsed.instance, oracle_budget);
    const gmmcsp::Relation got = gmmcsp::explicit_solution_relation(state, parsed.op, cap);

    if (!(got == expected)) {
        std::cerr << "mismatch: solver representation generates " << got.size()
                  << " solutions, oracle found " << expected.size() << "\n";
        return exit_error;
    }
    if (!expected.empty() &&
        !gmmcsp::check_representation(state.rep.as_relation(), expected,
            parsed.op.arity() - 1, pairs)) {
        std::cerr << "mismatch: final representation fails the order-"
                  << parsed.op.arity() - 1 << " representation check\n";
        return exit_error;
    }
    std::cout << "final representation verified: " << expected.size()
              << " solutions, representation size " << state.rep.size() << "\n";
    return exit_sat;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Constraint solver for relations invariant under a generalized "
                 "majority-minority operation"};
    app.require_subcommand(1);

    std::string file;
    bool witness = false;
    std::string validate = "on";
    bool stats = false;
    auto * solve_cmd = app.add_subcommand("solve", "decide an instance file");
    solve_cmd->add_option("file", file, "instance file")->required();
    solve_cmd->add_flag("--witness", witness, "print a satisfying assignment");
    solve_cmd->add_option("--validate", validate, "check constraint invariance (on|off)")
        ->check(CLI::IsMember({"on", "off"}));
    solve_cmd->add_flag("--stats", stats, "print per-constraint statistics");

    std::size_t budget = std::size_t{1} << 20;
    auto * oracle_cmd = app.add_subcommand("oracle", "brute-force the instance");
    oracle_cmd->add_option("file", file, "instance file")->required();
    oracle_cmd->add_option("--budget", budget, "assignment enumeration cap");
    oracle_cmd->add_flag("--witness", witness, "print the least satisfying assignment");

    auto * op_cmd = app.add_subcommand("op", "operation table utilities");
    op_cmd->require_subcommand(1);
    auto * classify_cmd = op_cmd->add_subcommand("classify",
        "classify every domain pair as majority or minority");
    classify_cmd->add_option("file", file, "operation or instance file")->required();

    std::string family;
    int vars = 0;
    int constraints = 0;
    std::uint64_t seed = 0;
    std::string out_path;
    auto * gen_cmd = app.add_subcommand("gen", "generate a random instance");
    gen_cmd->add_option("family", family, "affine2, twosat, or mixed3")->required();
    gen_cmd->add_option("--vars", vars, "number of variables")->required();
    gen_cmd->add_option("--constraints", constraints, "number of constraints")->required();
    gen_cmd->add_option("--seed", seed, "generator seed")->required();
    gen_cmd->add_option("-o,--out", out_path, "output file (default stdout)");

    auto * check_cmd = app.add_subcommand("check-rep",
        "verify the final representation against brute-force enumeration");
    check_cmd->add_option("file", file, "instance file")->required();
    check_cmd->add_option("--budget", budget, "assignment enumeration cap");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed())
            return run_solve(file, witness, validate == "on", stats);
        if (oracle_cmd->parsed())
            return run_oracle(file, budget, witness);
        if (classify_cmd->parsed())
            return run_classify(file);
        if (gen_cmd->parsed())
            return run_gen(family, vars, constraints, seed, out_path);
        if (check_cmd->parsed())
            return run_check_rep(file, budget);
    } catch (const gmmcsp::NotGmm & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_error;
}
