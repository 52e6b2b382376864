// Command-line front end; talks to the library only through the C interface.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "freiman.h"

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kResourceError = 3 };

int exit_code(fr_status s) {
    switch (s) {
        case FR_OK: return kOk;
        case FR_VERIFY_FAILED: return kVerifyFailed;
        case FR_CAP_EXCEEDED:
        case FR_INTERNAL_ERROR: return kResourceError;
        default: return kInputError;
    }
}

int report_error(fr_status s) {
    std::cerr << "freiman: " << fr_status_name(s) << ": " << fr_last_error() << "\n";
    return exit_code(s);
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-certificate extraction for sets with small doubling"};
    app.require_subcommand(1);

    std::vector<std::string> spec_tokens;
    std::string out;
    auto* gen = app.add_subcommand("generate", "Write a generated set in the set file format");
    gen->add_option("spec", spec_tokens, "generator spec, e.g. r-plus-h n=20 dh=8 r=32 seed=7")->required();
    gen->add_option("--out", out, "output path (stdout when omitted)");

    std::string in, gen_spec, group, eps = "1/37", cmax = "8", format = "json";
    std::uint64_t slice_cap = 4096, pair_cap = 1'000'000, seed = 1;
    bool no_reduce = false;
    auto* ext = app.add_subcommand("extract", "Run the extraction pipeline and write a report");
    auto* in_opt = ext->add_option("--in", in, "input set file");
    ext->add_option("--gen", gen_spec, "generator spec used instead of --in")->excludes(in_opt);
    ext->add_option("--group", group, "expected group, e.g. \"f2 n=20\"; supplies a missing header");
    ext->add_option("--out", out, "report path (stdout when omitted)");
    ext->add_option("--eps", eps, "epsilon as a rational")->capture_default_str();
    ext->add_option("--cmax", cmax, "size floor exponent")->capture_default_str();
    ext->add_option("--slice-cap", slice_cap, "maximum number of slices evaluated")->capture_default_str();
    ext->add_option("--pair-cap", pair_cap, "maximum pairs enumerated per slice")->capture_default_str();
    ext->add_option("--seed", seed, "sampling seed")->capture_default_str();
    ext->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    ext->add_flag("--no-reduce", no_reduce, "do not work modulo the stabilizer of A");

    std::string suite;
    std::uint64_t trials = 0;
    auto* ver = app.add_subcommand("verify", "Run a property suite");
    ver->add_option("suite", suite, "oracle, lemmas or pipeline")->required()->check(CLI::IsMember({"oracle", "lemmas", "pipeline"}));
    ver->add_option("--seed", seed, "corpus seed")->capture_default_str();
    ver->add_option("--trials", trials, "trials per property (0: suite default)");
    ver->add_option("--out", out, "write counterexamples here on failure");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    if (gen->parsed()) {
        char* text = nullptr;
        const auto s = fr_run_generate(join(spec_tokens).c_str(), out.empty() ? nullptr : out.c_str(), out.empty() ? &text : nullptr);
        if (s != FR_OK) return report_error(s);
        if (text) std::fputs(text, stdout);
        fr_string_free(text);
        return kOk;
    }

    if (ext->parsed()) {
        nlohmann::ordered_json input = nlohmann::ordered_json::object();
        if (!in.empty()) input["path"] = in;
        if (!gen_spec.empty()) input["generator"] = gen_spec;
        if (!group.empty()) input["group"] = group;
        nlohmann::ordered_json config{{"input", input},          {"eps", eps},           {"cmax", cmax},
                                      {"slice_cap", slice_cap},  {"pair_cap", pair_cap}, {"seed", seed},
                                      {"reduce_by_stabilizer", !no_reduce}, {"format", format}};
        if (!out.empty()) config["output"] = out;
        char* report = nullptr;
        const auto s = fr_run_extract(config.dump().c_str(), &report);
        if (s != FR_OK) return report_error(s);
        if (out.empty()) std::fputs(report, stdout);
        fr_string_free(report);
        return kOk;
    }

    char* summary = nullptr;
    char* counterexamples = nullptr;
    const auto s = fr_verify(suite.c_str(), seed, trials, &summary, &counterexamples);
    if (s != FR_OK && s != FR_VERIFY_FAILED) return report_error(s);
    std::fputs(summary, stdout);
    if (s == FR_VERIFY_FAILED) {
        std::cerr << counterexamples << "\n";
        if (!out.empty()) std::ofstream(out) << counterexamples << "\n";
    }
    fr_string_free(summary);
    fr_string_free(counterexamples);
    return exit_code(s);
}
