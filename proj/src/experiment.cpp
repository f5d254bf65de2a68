#include "vnlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "vnlab/bounds.hpp"
#include "vnlab/dixon.hpp"
#include "vnlab/exponent.hpp"
#include "vnlab/norm.hpp"
#include "vnlab/rademacher.hpp"
#include "vnlab/rng.hpp"

namespace vnlab::experiment {

namespace {

const std::set<std::string>& commands()
{
    static const std::set<std::string> names{"steiner gen",  "steiner validate", "poly rand",   "norm",
                                             "dixon verify", "rademacher check", "bounds sweep"};
    return names;
}

template <typename T>
void read_field(const Json& j, const char* key, T& field)
{
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(key, "has the wrong type");
    }
}

Exponent parse_q(const std::string& text)
{
    try {
        return Exponent::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("q", e.what());
    }
}

void require(bool ok, const char* field, const std::string& message)
{
    if (!ok) throw ConfigError(field, message);
}

std::vector<int> n_values(const ExperimentConfig& c)
{
    std::vector<int> out;
    for (int n = c.n_min; n <= c.n_max; n += c.n_step) out.push_back(n);
    return out;
}

norm::AscentOptions ascent_options(const ExperimentConfig& c)
{
    norm::AscentOptions o;
    o.restarts = c.restarts;
    o.max_iter = c.max_iter;
    o.tol = c.tol;
    o.seed = derive_seed(c.seed, "experiment.norm");
    o.relax_magnitudes = c.relax_magnitudes;
    o.threads = c.threads;
    return o;
}

std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

steiner::PartialSteinerSystem system_for(const ExperimentConfig& c)
{
    if (!c.system.empty()) return io::load_system(c.system);
    return steiner::greedy_generate(c.n, c.k, c.k - 1, derive_seed(c.seed, "experiment.steiner"));
}

void write_artifact(const std::string& path, const std::string& contents)
{
    if (!path.empty()) io::write_file(path, contents);
}

void run_steiner_gen(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto sys = steiner::greedy_generate(c.n, c.k, c.t, derive_seed(c.seed, "experiment.steiner"));
    const auto ceiling = steiner::max_cardinality(c.n, c.k, c.t);
    const bool valid = steiner::validate(sys).valid;
    r.columns = {"n", "k", "t", "cardinality", "max_cardinality", "max_cardinality_value", "psi_reference", "valid"};
    r.records.push_back(Json{{"n", c.n},
                             {"k", c.k},
                             {"t", c.t},
                             {"cardinality", sys.blocks.size()},
                             {"max_cardinality", ceiling.to_string()},
                             {"max_cardinality_value", ceiling.to_double()},
                             {"psi_reference", c.t == c.k - 1 && c.k >= 3 ? Json(steiner::psi_reference(c.k, c.n)) : Json()},
                             {"valid", valid}});
    r.summary["system"] = io::system_to_json(sys);
    std::ostringstream text;
    steiner::write_system(text, sys);
    write_artifact(c.emit, text.str());
    if (!valid) r.status = ExitCode::CertificationFailure;
}

void run_steiner_validate(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto sys = io::load_system(c.system);
    const auto result = steiner::validate(sys);
    r.columns = {"n", "k", "t", "cardinality", "valid", "structural_errors", "violations"};
    r.records.push_back(Json{{"n", sys.n},
                             {"k", sys.k},
                             {"t", sys.t},
                             {"cardinality", sys.blocks.size()},
                             {"valid", result.valid},
                             {"structural_errors", result.structural_errors.size()},
                             {"violations", result.violations.size()}});
    for (const auto& e : result.structural_errors) r.warnings.push_back(e);
    for (const auto& v : result.violations) {
        r.warnings.push_back("subset {" + join(v.subset) + "} lies in blocks {" + join(v.first.points) + "} and {" +
                             join(v.second.points) + "}");
    }
    if (!result.valid) r.status = ExitCode::CertificationFailure;
}

void run_poly_rand(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto sys = system_for(c);
    const auto p = poly::random_steiner_polynomial(sys, std::nullopt, derive_seed(c.seed, "experiment.signs"));
    r.columns = {"indices", "re", "im"};
    for (const auto& [m, coef] : p.terms()) {
        r.records.push_back(Json{{"indices", join(m.indices)}, {"re", coef.real()}, {"im", coef.imag()}});
    }
    r.summary["polynomial"] = io::polynomial_to_json(p);
    if (!c.emit.empty()) write_artifact(c.emit, io::polynomial_to_json(p).dump(2) + "\n");
}

poly::HomogeneousPolynomial polynomial_for(const ExperimentConfig& c)
{
    const auto first = c.polynomial.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && c.polynomial[first] == '{') {
        try {
            return io::polynomial_from_json(Json::parse(c.polynomial));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("polynomial", e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError("polynomial", e.what());
        }
    }
    try {
        return io::parse_polynomial(c.polynomial);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("polynomial", e.what());
    }
}

void run_norm(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto p = polynomial_for(c);
    const auto q = parse_q(c.q);
    const auto est = norm::estimate_norm(p, q, ascent_options(c));
    r.columns = {"q", "n", "k", "terms", "lower", "lower_method", "upper", "upper_method"};
    r.records.push_back(Json{{"q", q.to_string()},
                             {"n", p.n()},
                             {"k", p.k()},
                             {"terms", p.size()},
                             {"lower", est.lower},
                             {"lower_method", est.lower_method},
                             {"upper", est.upper},
                             {"upper_method", est.upper_method}});
    r.summary["estimate"] = io::norm_estimate_to_json(est);
}

poly::HomogeneousPolynomial signed_polynomial_for(const ExperimentConfig& c, const steiner::PartialSteinerSystem& sys)
{
    if (c.signs.empty()) return poly::random_steiner_polynomial(sys, std::nullopt, derive_seed(c.seed, "experiment.signs"));
    const std::string text = io::read_file(c.signs);
    const auto first = text.find_first_not_of(" \t\r\n");
    try {
        if (first != std::string::npos && text[first] == '{') return io::polynomial_from_json(Json::parse(text));
        std::istringstream in(text);
        return io::polynomial_from_signs(sys, io::read_signs(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("signs", e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("signs", e.what());
    }
}

void run_dixon_verify(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto sys = system_for(c);
    const auto p = signed_polynomial_for(c, sys);
    dixon::DixonTuple tuple = [&] {
        try {
            return dixon::build_tuple(sys, p);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(c.signs.empty() ? "system" : "signs", e.what());
        }
    }();

    const double commutator = dixon::check_commuting(tuple);
    const auto norms = dixon::operator_norms(tuple);
    const double max_norm = *std::max_element(norms.begin(), norms.end());
    const double min_norm = *std::min_element(norms.begin(), norms.end());
    const auto image = dixon::apply_polynomial(p, tuple, dixon::basis_vector(tuple.basis, tuple.basis.e()));
    const double card = static_cast<double>(sys.blocks.size());
    const cplx coefficient = image(static_cast<Eigen::Index>(tuple.basis.g()));
    const double residual = (image - card * dixon::basis_vector(tuple.basis, tuple.basis.g())).norm();
    const double pt_norm = dixon::operator_norm(dixon::polynomial_matrix(p, tuple)).value;
    const double upper = norm::certified_upper(p, Exponent::finite(2)).value;
    const double scale = 1.0 / std::sqrt(1.0 + upper);
    const auto row = dixon::check_row_condition(tuple, scale, c.row_trials, derive_seed(c.seed, "experiment.row"));

    const bool commuting_ok = commutator <= 1e-12;
    const bool norms_ok = std::abs(max_norm - 1.0) <= 1e-10 && std::abs(min_norm - 1.0) <= 1e-10;
    const bool pte_ok = residual <= 1e-12;
    const bool row_ok = row.value <= 1.0 + 1e-9;
    r.columns = {"n", "k", "cardinality", "dimension", "max_commutator", "max_op_norm", "min_op_norm",
                 "max_pair_multiplicity", "pTe_coefficient", "pTe_residual", "pT_norm", "norm_l2_upper", "scale",
                 "row_condition_value", "row_condition_upper", "commuting_ok", "op_norms_ok", "pTe_ok",
                 "row_condition_ok"};
    r.records.push_back(Json{{"n", sys.n},
                             {"k", sys.k},
                             {"cardinality", sys.blocks.size()},
                             {"dimension", tuple.basis.dimension()},
                             {"max_commutator", commutator},
                             {"max_op_norm", max_norm},
                             {"min_op_norm", min_norm},
                             {"max_pair_multiplicity", steiner::max_pair_multiplicity(sys)},
                             {"pTe_coefficient", coefficient.real()},
                             {"pTe_residual", residual},
                             {"pT_norm", pt_norm},
                             {"norm_l2_upper", upper},
                             {"scale", scale},
                             {"row_condition_value", row.value},
                             {"row_condition_upper", row.certified_upper},
                             {"commuting_ok", commuting_ok},
                             {"op_norms_ok", norms_ok},
                             {"pTe_ok", pte_ok},
                             {"row_condition_ok", row_ok}});
    r.summary["op_norms"] = norms;
    r.summary["row_condition_layers"] = Json{{"optimized", row.layer_optimized}, {"upper", row.layer_upper}};
    if (!(commuting_ok && norms_ok && pte_ok && row_ok)) r.status = ExitCode::CertificationFailure;
}

void run_rademacher_check(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto sys = system_for(c);
    const auto process = rademacher::make_process(sys);
    const auto samples = static_cast<std::size_t>(c.samples);
    const auto lip =
        rademacher::lipschitz_check(process, c.pairs, derive_seed(c.seed, "experiment.lipschitz"), c.psi_pairs, samples);
    r.columns = {"check", "index", "lhs", "rhs", "ratio", "psi2", "z_score", "ok"};
    for (std::size_t i = 0; i < lip.rows.size(); ++i) {
        const auto& row = lip.rows[i];
        r.records.push_back(Json{{"check", "lipschitz"},
                                 {"index", i},
                                 {"lhs", row.l2},
                                 {"rhs", row.bound},
                                 {"ratio", row.ratio},
                                 {"psi2", row.psi2 >= 0.0 ? Json(row.psi2) : Json()},
                                 {"z_score", Json()},
                                 {"ok", row.ratio <= 1.0 + 1e-12}});
    }
    int increment_failures = 0;
    for (int i = 0; i < c.increment_pairs; ++i) {
        Rng rng(derive_seed(c.seed, "experiment.increment.pair", static_cast<std::uint64_t>(i)));
        const auto z = rademacher::random_ball_point(rng, sys.n);
        const auto zp = rademacher::random_ball_point(rng, sys.n);
        const auto inc = rademacher::increment_check(process, z, zp, samples,
                                                     derive_seed(c.seed, "experiment.increment", static_cast<std::uint64_t>(i)));
        const bool ok = inc.z_score() <= 3.0;
        if (!ok) ++increment_failures;
        r.records.push_back(Json{{"check", "increment"},
                                 {"index", i},
                                 {"lhs", inc.monte_carlo},
                                 {"rhs", inc.closed_form},
                                 {"ratio", inc.closed_form > 0.0 ? Json(inc.monte_carlo / inc.closed_form) : Json()},
                                 {"psi2", Json()},
                                 {"z_score", inc.z_score()},
                                 {"ok", ok}});
    }
    r.summary["lipschitz"] = Json{{"pairs", lip.pairs},
                                  {"skipped", lip.skipped},
                                  {"violations", lip.violations},
                                  {"max_ratio", lip.max_ratio},
                                  {"min_psi2_ratio", lip.min_psi2_ratio},
                                  {"max_psi2_ratio", lip.max_psi2_ratio}};
    r.summary["increment_failures"] = increment_failures;
    if (increment_failures > 0) {
        r.warnings.push_back(std::to_string(increment_failures) + " increment checks beyond 3 standard errors");
    }
    if (lip.violations > 0) r.status = ExitCode::CertificationFailure;
}

Json fit_to_json(const bounds::ScalingFit& fit)
{
    Json points = Json::array();
    for (const auto& [n, v] : fit.points) points.push_back(Json::array({n, v}));
    return Json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"residual", fit.residual},
                {"inversions", fit.inversions},
                {"points", std::move(points)}};
}

void run_bounds_sweep(const ExperimentConfig& c, ExperimentReport& r)
{
    const auto q = parse_q(c.q);
    const auto which = bounds::parse_which(c.which);
    bounds::PipelineOptions options;
    options.ascent = ascent_options(c);
    options.row_trials = c.row_trials;
    bounds::SweepResult sweep;
    try {
        sweep = bounds::scaling_sweep(c.k, q, n_values(c), c.seeds, which, c.seed, options, c.threads);
    } catch (const std::runtime_error& e) {
        throw bounds::CertificationError(e.what());
    }
    r.columns = {"which", "k", "q", "n", "seed", "cardinality", "norm_l2_lower", "norm_l2_upper", "norm_l2_method",
                 "norm_q_lower", "norm_q_upper", "norm_q_method", "norm_inf_lower", "norm_inf_upper",
                 "norm_inf_method", "scale", "recipe_scale", "recipe_scale_certified", "direct", "analytic",
                 "estimate", "max_commutator", "max_op_norm", "max_op_norm_upper", "row_sup_lower", "row_sup_upper",
                 "scaled_row_condition", "certified"};
    for (const auto& rec : sweep.records) {
        const auto& cert = rec.certification;
        r.records.push_back(Json{{"which", bounds::to_string(rec.which)},
                                 {"k", rec.k},
                                 {"q", rec.q.to_string()},
                                 {"n", rec.n},
                                 {"seed", rec.seed},
                                 {"cardinality", rec.cardinality},
                                 {"norm_l2_lower", rec.norm_l2.lower},
                                 {"norm_l2_upper", rec.norm_l2.upper},
                                 {"norm_l2_method", rec.norm_l2.upper_method},
                                 {"norm_q_lower", rec.norm_q.lower},
                                 {"norm_q_upper", rec.norm_q.upper},
                                 {"norm_q_method", rec.norm_q.upper_method},
                                 {"norm_inf_lower", rec.norm_inf.lower},
                                 {"norm_inf_upper", rec.norm_inf.upper},
                                 {"norm_inf_method", rec.norm_inf.upper_method},
                                 {"scale", rec.scale},
                                 {"recipe_scale", cert.recipe_scale},
                                 {"recipe_scale_certified", cert.recipe_scale_certified},
                                 {"direct", rec.direct},
                                 {"analytic", rec.analytic},
                                 {"estimate", rec.estimate},
                                 {"max_commutator", cert.max_commutator},
                                 {"max_op_norm", cert.max_op_norm},
                                 {"max_op_norm_upper", cert.max_op_norm_upper},
                                 {"row_sup_lower", cert.row_sup_lower},
                                 {"row_sup_upper", cert.row_sup_upper},
                                 {"scaled_row_condition", cert.scaled_row_condition},
                                 {"certified", cert.passed}});
    }
    r.summary["fit"] = fit_to_json(sweep.fit);
    r.summary["estimate_fit"] = fit_to_json(sweep.estimate_fit);
    r.summary["reference_exponents"] = io::exponents_to_json(bounds::reference_exponents(c.k, q));
    r.warnings = sweep.warnings;
}

std::string csv_field(const Json& v)
{
    std::string s;
    if (v.is_null()) {
        return s;
    } else if (v.is_boolean()) {
        s = v.get<bool>() ? "true" : "false";
    } else if (v.is_number_unsigned()) {
        s = std::to_string(v.get<std::uint64_t>());
    } else if (v.is_number_integer()) {
        s = std::to_string(v.get<std::int64_t>());
    } else if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        s = buf;
    } else if (v.is_string()) {
        s = v.get<std::string>();
    } else {
        s = v.dump();
    }
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

}  // namespace

Json config_to_json(const ExperimentConfig& c)
{
    return Json{{"version", c.version},
                {"command", c.command},
                {"seed", c.seed},
                {"threads", c.threads},
                {"n", c.n},
                {"k", c.k},
                {"t", c.t},
                {"system", c.system},
                {"signs", c.signs},
                {"polynomial", c.polynomial},
                {"q", c.q},
                {"restarts", c.restarts},
                {"max_iter", c.max_iter},
                {"tol", c.tol},
                {"relax_magnitudes", c.relax_magnitudes},
                {"pairs", c.pairs},
                {"samples", c.samples},
                {"increment_pairs", c.increment_pairs},
                {"psi_pairs", c.psi_pairs},
                {"which", c.which},
                {"n_min", c.n_min},
                {"n_max", c.n_max},
                {"n_step", c.n_step},
                {"seeds", c.seeds},
                {"row_trials", c.row_trials},
                {"out", c.out},
                {"format", c.format},
                {"emit", c.emit}};
}

ExperimentConfig config_from_json(const Json& j, ExperimentConfig base)
{
    if (!j.is_object()) throw ConfigError("(root)", "config must be a JSON object");
    const Json known = config_to_json(base);
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ConfigError(key, "unknown field");
    }
    ExperimentConfig& c = base;
    read_field(j, "version", c.version);
    read_field(j, "command", c.command);
    read_field(j, "seed", c.seed);
    read_field(j, "threads", c.threads);
    read_field(j, "n", c.n);
    read_field(j, "k", c.k);
    read_field(j, "t", c.t);
    read_field(j, "system", c.system);
    read_field(j, "signs", c.signs);
    if (j.contains("polynomial") && j.at("polynomial").is_object()) {
        c.polynomial = j.at("polynomial").dump();
    } else {
        read_field(j, "polynomial", c.polynomial);
    }
    if (j.contains("q") && j.at("q").is_number()) {
        c.q = j.at("q").is_number_integer() ? std::to_string(j.at("q").get<std::int64_t>()) : j.at("q").dump();
    } else {
        read_field(j, "q", c.q);
    }
    read_field(j, "restarts", c.restarts);
    read_field(j, "max_iter", c.max_iter);
    read_field(j, "tol", c.tol);
    read_field(j, "relax_magnitudes", c.relax_magnitudes);
    read_field(j, "pairs", c.pairs);
    read_field(j, "samples", c.samples);
    read_field(j, "increment_pairs", c.increment_pairs);
    read_field(j, "psi_pairs", c.psi_pairs);
    read_field(j, "which", c.which);
    read_field(j, "n_min", c.n_min);
    read_field(j, "n_max", c.n_max);
    read_field(j, "n_step", c.n_step);
    read_field(j, "seeds", c.seeds);
    read_field(j, "row_trials", c.row_trials);
    read_field(j, "out", c.out);
    read_field(j, "format", c.format);
    read_field(j, "emit", c.emit);
    return c;
}

void validate(const ExperimentConfig& c)
{
    require(c.version == kConfigVersion, "version", "unsupported version " + std::to_string(c.version));
    require(commands().contains(c.command), "command", "unknown command '" + c.command + "'");
    require(c.threads >= 1, "threads", "must be >= 1");
    require(c.format == "json" || c.format == "csv", "format", "must be json or csv");

    const bool uses_generated_system =
        c.system.empty() && (c.command == "poly rand" || c.command == "dixon verify" || c.command == "rademacher check");
    if (uses_generated_system) {
        require(c.k >= 2, "k", "must be >= 2");
        if (c.command != "poly rand") require(c.k >= 3, "k", "must be >= 3");
        require(c.n >= c.k, "n", "must be >= k");
        require(c.n <= 64, "n", "must be <= 64");
    }
    if (c.command == "steiner gen") {
        require(c.t >= 1, "t", "must be >= 1");
        require(c.k >= c.t, "k", "must be >= t");
        require(c.n >= c.k, "n", "must be >= k");
        require(c.n <= 64, "n", "must be <= 64");
    } else if (c.command == "steiner validate") {
        require(!c.system.empty(), "system", "a system file is required");
    } else if (c.command == "norm") {
        require(!c.polynomial.empty(), "polynomial", "a polynomial is required");
        parse_q(c.q);
    } else if (c.command == "dixon verify") {
        require(c.row_trials >= 0, "row_trials", "must be >= 0");
    } else if (c.command == "rademacher check") {
        require(c.pairs >= 1, "pairs", "must be >= 1");
        require(c.samples >= 1000, "samples", "must be >= 1000");
        require(c.increment_pairs >= 0, "increment_pairs", "must be >= 0");
        require(c.psi_pairs >= 0, "psi_pairs", "must be >= 0");
    } else if (c.command == "bounds sweep") {
        const auto q = parse_q(c.q);
        require(c.which == "C" || c.which == "D", "which", "must be C or D");
        require(c.which == "C" || q.equals(2), "q", "the D pipeline needs q = 2");
        require(c.k >= 3, "k", "must be >= 3");
        require(c.n_min >= c.k, "n_min", "must be >= k");
        require(c.n_max <= 64, "n_max", "must be <= 64");
        require(c.n_step >= 1, "n_step", "must be >= 1");
        require(c.n_max >= c.n_min + c.n_step, "n_max", "the sweep needs at least two n values");
        require(c.seeds >= 1, "seeds", "must be >= 1");
        require(c.row_trials >= 0, "row_trials", "must be >= 0");
    }
    if (c.command == "norm" || c.command == "bounds sweep" || c.command == "rademacher check") {
        require(c.restarts >= 1, "restarts", "must be >= 1");
        require(c.max_iter >= 1, "max_iter", "must be >= 1");
        require(c.tol > 0.0, "tol", "must be > 0");
    }
}

ExperimentReport run(const ExperimentConfig& config)
{
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = config_to_json(config);

    std::string inputs = report.config.dump();
    if (!config.system.empty()) inputs += io::read_file(config.system);
    if (!config.signs.empty()) inputs += io::read_file(config.signs);
    report.input_hash = io::content_hash(inputs);

    const std::string& cmd = config.command;
    if (cmd == "steiner gen") {
        run_steiner_gen(config, report);
    } else if (cmd == "steiner validate") {
        run_steiner_validate(config, report);
    } else if (cmd == "poly rand") {
        run_poly_rand(config, report);
    } else if (cmd == "norm") {
        run_norm(config, report);
    } else if (cmd == "dixon verify") {
        run_dixon_verify(config, report);
    } else if (cmd == "rademacher check") {
        run_rademacher_check(config, report);
    } else {
        run_bounds_sweep(config, report);
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("format", "must be json or csv");
}

std::string to_csv(const ExperimentReport& report)
{
    std::string out;
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(report.columns[i]);
    }
    out += "\r\n";
    for (const auto& rec : report.records) {
        for (std::size_t i = 0; i < report.columns.size(); ++i) {
            if (i) out += ',';
            const auto it = rec.find(report.columns[i]);
            if (it != rec.end()) out += csv_field(*it);
        }
        out += "\r\n";
    }
    return out;
}

std::string to_json_text(const ExperimentReport& report)
{
    const Json j{{"config", report.config},
                 {"input_hash", report.input_hash},
                 {"columns", report.columns},
                 {"records", report.records},
                 {"summary", report.summary},
                 {"warnings", report.warnings},
                 {"status", static_cast<int>(report.status)},
                 {"timing", Json{{"seconds", report.seconds}}}};
    return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const Json& j)
{
    ExperimentReport r;
    try {
        r.config = j.at("config");
        r.input_hash = j.at("input_hash").get<std::string>();
        r.columns = j.at("columns").get<std::vector<std::string>>();
        r.records = j.at("records");
        r.summary = j.at("summary");
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.status = static_cast<ExitCode>(j.at("status").get<int>());
        r.seconds = j.at("timing").at("seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("report JSON: ") + e.what());
    }
    return r;
}

void emit(const ExperimentReport& report, Format format, const std::string& path)
{
    const std::string text = format == Format::Csv ? to_csv(report) : to_json_text(report);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw io::IoError("error while writing to standard output");
        return;
    }
    io::write_file(path, text);
}

}  // namespace vnlab::experiment
