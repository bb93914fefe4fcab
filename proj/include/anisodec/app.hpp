#pragma once

// Batch front end: JSON run configurations, figure presets, the self-test
// battery, and deterministic CSV / JSON writers.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anisodec::app {

/// Malformed configuration: bad JSON, wrong type, missing or unknown key.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_schema = 2,
    exit_precondition = 3,
    exit_nonconvergence = 4,
};

inline constexpr int output_format_version = 1;

/// One output file: a header block of key/value lines, then rows.
struct Table {
    std::string name;  ///< file stem
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

enum class Format { csv, json };

/// Writes `<dir>/<name>.csv` or `.json`; returns the path.
std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir, Format f);

std::string render_csv(const Table& t);
std::string render_json(const Table& t);

struct RunReport {
    std::vector<std::filesystem::path> files;
    bool converged = true;
    std::vector<std::string> warnings;
};

/// Executes a parsed configuration (JSON text). Throws SchemaError,
/// DomainError or NumericalError.
RunReport run_config_text(const std::string& text, const std::filesystem::path& base_dir);

/// Reads and runs a configuration file; relative output directories resolve
/// against the file's directory.
RunReport run_config_file(const std::filesystem::path& path);

/// The configuration of a figure preset ("fig1", "fig2a", "fig2b") writing
/// into `out_dir`.
std::string preset_config(const std::string& name, const std::filesystem::path& out_dir);

struct SelftestOptions {
    /// Relative perturbation applied to hbar in the optical-theorem check
    /// (mutation hook; 0 for a genuine run).
    double perturb_hbar = 0.0;
};

/// Runs the invariant battery, printing one PASS/FAIL line per check.
/// Returns true when every check passes.
bool selftest(std::ostream& out, const SelftestOptions& opts = {});

/// Maps exceptions to exit codes and prints a one-line diagnostic.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace anisodec::app
