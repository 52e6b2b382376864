#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "freiman/extractor.hpp"
#include "freiman/set_engine.hpp"

namespace freiman {

enum class OutputFormat { json, csv };

OutputFormat parse_format(std::string_view text);
const char* to_string(OutputFormat f);

struct RunConfig {
    std::optional<std::string> input_path;
    std::optional<std::string> generator;  // generator spec text, used when no input path is given
    std::optional<GroupSpec> group;        // asserted against (or supplied for) the set file
    ExtractConfig extract;
    std::optional<std::string> output_path;
    OutputFormat format = OutputFormat::json;
};

/// The input descriptor and every setting, as a JSON object.
std::string config_json(const RunConfig& config);
/// Inverse of config_json; absent keys keep their defaults.
RunConfig parse_run_config(std::string_view json);
FiniteSet load_input(const RunConfig& config);

/// `config_echo` is a JSON object text (or empty) embedded under "config".
std::string render_json(const PipelineReport& report, const std::string& config_echo, bool include_timing = true);
/// Columns label, size, energy, e_size, e_energy, meets_theorem.
std::string render_csv(const PipelineReport& report);

/// Runs the pipeline and renders the report; writes it atomically when an output path is set.
std::string cmd_extract(const RunConfig& config);
/// Generates a set from a spec and renders it in the set file format.
std::string cmd_generate(const std::string& spec, const std::optional<std::string>& out_path);

struct PropertyResult {
    std::string name;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::string counterexample;  // JSON of the first failure

    bool ok() const noexcept { return failed == 0; }
};

struct VerifyResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<PropertyResult> properties;
    double wall_ms = 0;

    bool ok() const noexcept;
    std::string summary() const;  // one line per property
    std::string counterexamples() const;  // JSON array of failures
};

VerifyResult verify_oracle(std::uint64_t seed, std::uint64_t trials);
VerifyResult verify_lemmas(std::uint64_t seed, std::uint64_t trials);
VerifyResult verify_pipeline(std::uint64_t seed, std::uint64_t trials);
VerifyResult cmd_verify(const std::string& suite, std::uint64_t seed, std::uint64_t trials);

}  // namespace freiman
