#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnlab/io.hpp"

namespace vnlab::experiment {

using Json = io::Json;

enum class ExitCode : int { Ok = 0, InvalidConfig = 1, CertificationFailure = 2, IoError = 3 };

/// A configuration value outside the preconditions of its command.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::invalid_argument("config field '" + field + "': " + message), field_(field)
    {
    }
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline constexpr int kConfigVersion = 1;

/// Every parameter of every command. Unused fields are ignored by commands
/// that do not read them.
struct ExperimentConfig {
    int version = kConfigVersion;
    std::string command;  ///< "steiner gen", "steiner validate", "poly rand", "norm", "dixon verify",
                          ///< "rademacher check" or "bounds sweep"
    std::uint64_t seed = 0;
    int threads = 1;

    int n = 7;
    int k = 3;
    int t = 2;
    std::string system;      ///< system file; generated greedily from (n, k, k-1, seed) when empty
    std::string signs;       ///< sign file for "dixon verify"; drawn from the seed when empty
    std::string polynomial;  ///< expression or polynomial JSON text for "norm"

    std::string q = "2";
    int restarts = 32;
    int max_iter = 2000;
    double tol = 1e-10;
    bool relax_magnitudes = false;

    int pairs = 1000;
    int samples = 100000;
    int increment_pairs = 20;
    int psi_pairs = 20;

    std::string which = "D";
    int n_min = 7;
    int n_max = 25;
    int n_step = 2;
    int seeds = 5;
    int row_trials = 20;

    std::string out;            ///< report path; stdout when empty or "-"
    std::string format = "json";
    std::string emit;           ///< extra artifact: system file, polynomial JSON or sign file
};

Json config_to_json(const ExperimentConfig& config);

/// Reads the fields present in `j` over `base`. Unknown keys are rejected.
ExperimentConfig config_from_json(const Json& j, ExperimentConfig base = {});

/// Throws ConfigError naming the first offending field.
void validate(const ExperimentConfig& config);

struct ExperimentReport {
    Json config;
    std::string input_hash;
    std::vector<std::string> columns;  ///< CSV column order of `records`
    Json records = Json::array();      ///< flat objects, one per row
    Json summary = Json::object();
    std::vector<std::string> warnings;
    double seconds = 0.0;
    ExitCode status = ExitCode::Ok;  ///< CertificationFailure when a check failed
};

/// Validates, then dispatches to the owning module. Deterministic in the
/// config apart from `seconds`.
ExperimentReport run(const ExperimentConfig& config);

enum class Format { Csv, Json };
Format parse_format(const std::string& s);

/// Records as RFC 4180 CSV with a header row; reals printed with %.17g.
std::string to_csv(const ExperimentReport& report);

/// Full report. The "records" and "summary" members are reproducible.
std::string to_json_text(const ExperimentReport& report);
ExperimentReport report_from_json(const Json& j);

/// Writes the report to `path`, or stdout for "" and "-".
void emit(const ExperimentReport& report, Format format, const std::string& path);

}  // namespace vnlab::experiment
