// vnlab: command-line front end for the experiments.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "vnlab/bounds.hpp"
#include "vnlab/experiment.hpp"

namespace ex = vnlab::experiment;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::string config_path;

    std::optional<int> n, k, t;
    std::optional<std::string> system, signs, polynomial, q, which, emit;
    std::optional<int> restarts, max_iter, pairs, samples, increment_pairs, psi_pairs;
    std::optional<int> n_min, n_max, n_step, seeds, row_trials;
    std::optional<double> tol;
    bool relax_magnitudes = false;
};

template <typename T>
void apply(const std::optional<T>& value, T& field)
{
    if (value) field = *value;
}

ex::ExperimentConfig build_config(const Overrides& o, const std::string& command)
{
    ex::ExperimentConfig c;
    if (!o.config_path.empty()) {
        const std::string text = vnlab::io::read_file(o.config_path);
        ex::Json j;
        try {
            j = ex::Json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ex::ConfigError("(root)", "'" + o.config_path + "' is not valid JSON: " + e.what());
        }
        c = ex::config_from_json(j);
        if (!c.command.empty() && c.command != command) {
            throw ex::ConfigError("command", "config file is for '" + c.command + "', not '" + command + "'");
        }
    }
    c.command = command;
    apply(o.seed, c.seed);
    apply(o.threads, c.threads);
    apply(o.out, c.out);
    apply(o.format, c.format);
    apply(o.n, c.n);
    apply(o.k, c.k);
    apply(o.t, c.t);
    apply(o.system, c.system);
    apply(o.signs, c.signs);
    apply(o.polynomial, c.polynomial);
    apply(o.q, c.q);
    apply(o.which, c.which);
    apply(o.emit, c.emit);
    apply(o.restarts, c.restarts);
    apply(o.max_iter, c.max_iter);
    apply(o.tol, c.tol);
    apply(o.pairs, c.pairs);
    apply(o.samples, c.samples);
    apply(o.increment_pairs, c.increment_pairs);
    apply(o.psi_pairs, c.psi_pairs);
    apply(o.n_min, c.n_min);
    apply(o.n_max, c.n_max);
    apply(o.n_step, c.n_step);
    apply(o.seeds, c.seeds);
    apply(o.row_trials, c.row_trials);
    if (o.relax_magnitudes) c.relax_magnitudes = true;
    return c;
}

void add_ascent(CLI::App* app, Overrides& o)
{
    app->add_option("--restarts", o.restarts, "Multistart count");
    app->add_option("--max-iter", o.max_iter, "Iterations per restart");
    app->add_option("--tol", o.tol, "Relative stall tolerance");
}

void add_system(CLI::App* app, Overrides& o)
{
    app->add_option("-n", o.n, "Number of variables");
    app->add_option("-k", o.k, "Degree / block size");
    app->add_option("--system", o.system, "System file; generated from the seed when absent");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical experiments on von Neumann-type inequalities for Steiner polynomials"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("--seed", o.seed, "Root seed");
    app.add_option("--threads", o.threads, "Worker threads");
    app.add_option("--out", o.out, "Report path ('-' for stdout)");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--config", o.config_path, "JSON config file; flags override its values");

    std::string command;

    auto* steiner = app.add_subcommand("steiner", "Partial Steiner systems");
    steiner->require_subcommand(1);
    steiner->fallthrough();
    auto* gen = steiner->add_subcommand("gen", "Greedy S_p(t, k, n)");
    gen->add_option("-n", o.n, "Number of points");
    gen->add_option("-k", o.k, "Block size");
    gen->add_option("-t", o.t, "Subset size");
    gen->add_option("--emit", o.emit, "Write the system file here");
    gen->callback([&] { command = "steiner gen"; });
    auto* val = steiner->add_subcommand("validate", "Check a system file");
    val->add_option("system", o.system, "System file")->required();
    val->callback([&] { command = "steiner validate"; });

    auto* poly = app.add_subcommand("poly", "Polynomials");
    poly->require_subcommand(1);
    poly->fallthrough();
    auto* rand = poly->add_subcommand("rand", "Random-sign Steiner polynomial");
    add_system(rand, o);
    rand->add_option("--emit", o.emit, "Write the polynomial JSON here");
    rand->callback([&] { command = "poly rand"; });

    auto* norm = app.add_subcommand("norm", "Two-sided estimate of the l_q ball norm");
    norm->add_option("polynomial", o.polynomial, "Expression such as 'z1z2+z3z4', or polynomial JSON");
    norm->add_option("-q,--q", o.q, "Exponent: 2, 3/2, 1.5, inf");
    add_ascent(norm, o);
    norm->add_flag("--relax-magnitudes", o.relax_magnitudes, "q = inf: also optimize moduli");
    norm->callback([&] { command = "norm"; });

    auto* dixon = app.add_subcommand("dixon", "Commuting operator tuples");
    dixon->require_subcommand(1);
    dixon->fallthrough();
    auto* verify = dixon->add_subcommand("verify", "Check the tuple identities");
    add_system(verify, o);
    verify->add_option("--signs", o.signs, "Sign file or polynomial JSON");
    verify->add_option("--row-trials", o.row_trials, "Random directions for the row condition");
    verify->callback([&] { command = "dixon verify"; });

    auto* rad = app.add_subcommand("rademacher", "Rademacher process");
    rad->require_subcommand(1);
    rad->fallthrough();
    auto* check = rad->add_subcommand("check", "Lipschitz and increment checks");
    add_system(check, o);
    check->add_option("--pairs", o.pairs, "Random ball pairs for the Lipschitz check");
    check->add_option("--samples", o.samples, "Monte Carlo draws");
    check->add_option("--increment-pairs", o.increment_pairs, "Pairs for the increment check");
    check->add_option("--psi-pairs", o.psi_pairs, "Pairs with a psi_2 estimate");
    check->callback([&] { command = "rademacher check"; });

    auto* bnd = app.add_subcommand("bounds", "Lower bounds on C and D");
    bnd->require_subcommand(1);
    bnd->fallthrough();
    auto* sweep = bnd->add_subcommand("sweep", "Scaling sweep over n");
    sweep->add_option("--which", o.which, "C or D")->check(CLI::IsMember({"C", "D"}));
    sweep->add_option("-k,--k", o.k, "Degree");
    sweep->add_option("-q,--q", o.q, "Exponent");
    sweep->add_option("--n-min", o.n_min, "Smallest n");
    sweep->add_option("--n-max", o.n_max, "Largest n");
    sweep->add_option("--n-step", o.n_step, "Step in n");
    sweep->add_option("--seeds", o.seeds, "Seeds per n");
    sweep->add_option("--row-trials", o.row_trials, "Random directions for the row condition");
    add_ascent(sweep, o);
    sweep->callback([&] { command = "bounds sweep"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ex::ExitCode::InvalidConfig);
    }

    try {
        const auto config = build_config(o, command);
        const auto report = ex::run(config);
        ex::emit(report, ex::parse_format(config.format), config.out);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        return static_cast<int>(report.status);
    } catch (const vnlab::io::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ex::ExitCode::IoError);
    } catch (const vnlab::bounds::CertificationError& e) {
        std::cerr << "certification failed: " << e.what() << '\n';
        return static_cast<int>(ex::ExitCode::CertificationFailure);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return static_cast<int>(ex::ExitCode::InvalidConfig);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ex::ExitCode::CertificationFailure);
    }
}
