#include "freiman/runner.hpp"

#include <json.hpp>

#include "freiman/generators.hpp"
#include "freiman/set_io.hpp"

namespace freiman {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kElementListLimit = 256;

ordered_json big(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

ordered_json exact(const Rational& q) {
    return ordered_json{{"num", big(numerator(q))}, {"den", big(denominator(q))}, {"float", to_double(q)}};
}

ordered_json energy_json(const EnergyReport& e) {
    const auto q = e.normalized();
    return ordered_json{{"quadruples", big(e.quadruples)},
                        {"denominator", big(e.denominator)},
                        {"num", big(numerator(q))},
                        {"den", big(denominator(q))},
                        {"float", to_double(q)}};
}

ordered_json elements_json(const FiniteSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto e : s) arr.push_back(s.group().format(e));
    return arr;
}

ordered_json certificate_json(const CandidateCertificate& c) {
    ordered_json j{{"label", c.label()},
                   {"size", c.size()},
                   {"energy", energy_json(c.energy)},
                   {"e_size", c.e_size},
                   {"e_energy", c.e_energy},
                   {"meets_theorem", c.meets_theorem},
                   {"meets_floor", c.meets_floor}};
    if (c.size() <= kElementListLimit) j["elements"] = elements_json(c.candidate);
    else j["elements_omitted"] = true;
    return j;
}

ordered_json level_json(const DyadicLevel& l) {
    return ordered_json{{"index", l.index},
                        {"max_index", l.max_index},
                        {"lower", to_string(l.lower)},
                        {"upper", to_string(l.upper)},
                        {"cardinality", l.cardinality},
                        {"domain_size", l.domain_size},
                        {"mass", to_string(l.mass)},
                        {"theta", to_string(l.theta)}};
}

ordered_json guarantee_json(const GuaranteeCheck& g) {
    return ordered_json{{"holds", g.holds}, {"required", g.required}, {"achieved", g.achieved}};
}

ordered_json invariance_json(const InvarianceCheck& c) {
    ordered_json j{{"against", c.against}, {"skipped", c.skipped}};
    if (c.skipped) return j;
    const auto& r = c.report;
    j["rho"] = to_string(r.rho);
    j["rho_exponent"] = c.rho_exponent;
    j["log_term"] = r.log_term;
    j["log_exact"] = r.log_exact;
    j["bound"] = exact(r.bound);
    j["actual"] = exact(r.actual);
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["hypothesis_violations"] = r.hypothesis_violations;
    j["bound_holds"] = r.bound_holds;
    if (r.cs2) j["cs2"] = ordered_json{{"lhs", big(r.cs2->lhs)}, {"required", to_string(r.cs2->required)}, {"holds", r.cs2->holds}};
    return j;
}

ordered_json slice_json(const GroupSpec& g, const SliceStats& s) {
    return ordered_json{{"t", g.format(s.t)}, {"slice_size", s.slice_size}, {"spread", s.spread}, {"beta", s.beta}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
    if (text == "json") return OutputFormat::json;
    if (text == "csv" || text == "csv-summary") return OutputFormat::csv;
    fail(ErrorCode::invalid_argument, "unknown format '" + std::string(text) + "' (json | csv)");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

std::string config_json(const RunConfig& c) {
    ordered_json input;
    if (c.input_path) input["path"] = *c.input_path;
    if (c.generator) input["generator"] = to_string(parse_generator_spec(*c.generator));
    if (c.group) input["group"] = c.group->to_string();
    ordered_json j{{"input", input},
                   {"eps", to_string(c.extract.eps)},
                   {"cmax", to_string(c.extract.cmax)},
                   {"slice_cap", c.extract.slice_cap},
                   {"pair_cap", c.extract.pair_cap},
                   {"seed", c.extract.seed},
                   {"reduce_by_stabilizer", c.extract.reduce_by_stabilizer},
                   {"format", to_string(c.format)}};
    if (c.output_path) j["output"] = *c.output_path;
    return j.dump();
}

RunConfig parse_run_config(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("malformed run config: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorCode::parse_error, "run config must be a JSON object");
    RunConfig c;
    try {
        if (j.contains("input")) {
            const auto& in = j.at("input");
            if (in.contains("path")) c.input_path = in.at("path").get<std::string>();
            if (in.contains("generator")) c.generator = in.at("generator").get<std::string>();
            if (in.contains("group")) c.group = GroupSpec::parse(in.at("group").get<std::string>());
        }
        if (j.contains("eps")) c.extract.eps = parse_rational(j.at("eps").get<std::string>());
        if (j.contains("cmax")) c.extract.cmax = parse_rational(j.at("cmax").get<std::string>());
        if (j.contains("slice_cap")) c.extract.slice_cap = j.at("slice_cap").get<std::uint64_t>();
        if (j.contains("pair_cap")) c.extract.pair_cap = j.at("pair_cap").get<std::uint64_t>();
        if (j.contains("seed")) c.extract.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("reduce_by_stabilizer")) c.extract.reduce_by_stabilizer = j.at("reduce_by_stabilizer").get<bool>();
        if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
        if (j.contains("output")) c.output_path = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::parse_error, std::string("bad run config field: ") + e.what());
    }
    return c;
}

FiniteSet load_input(const RunConfig& c) {
    if (c.input_path && c.generator) fail(ErrorCode::invalid_argument, "give either an input file or a generator spec, not both");
    if (c.input_path) return read_set_file(*c.input_path, c.group);
    if (c.generator) {
        auto s = generate(parse_generator_spec(*c.generator));
        if (c.group) require_same_group(*c.group, s.group());
        return s;
    }
    fail(ErrorCode::invalid_argument, "no input: pass --in <file> or --gen <spec>");
}

std::string render_json(const PipelineReport& r, const std::string& config_echo, bool include_timing) {
    const auto& g = r.group;
    ordered_json j;
    j["schema"] = 1;
    j["config"] = config_echo.empty() ? ordered_json::object() : ordered_json::parse(config_echo);
    j["group"] = g.to_string();
    j["set_size"] = r.set_size;
    j["diff_size"] = r.diff_size;
    j["K"] = exact(r.k);
    j["eps"] = to_string(r.config.eps);
    j["energy_A"] = energy_json(r.energy_a);
    j["energy_A_minus_A"] = energy_json(r.energy_diff);
    j["standing_assumptions"] = {{"energy_A_minus_A_below", r.assumption_diff}, {"energy_A_below", r.assumption_a}};
    j["degenerate"] = r.degenerate;
    j["stabilizer"] = {{"order", r.stabilizer_order},
                       {"quotient", r.quotient_group ? ordered_json(r.quotient_group->to_string()) : ordered_json(nullptr)}};

    if (r.refinement) {
        const auto& f = *r.refinement;
        j["refinement"] = {{"heavy_count", f.heavy_count},
                           {"evaluated", f.evaluated.size()},
                           {"T_size", r.T.size()},
                           {"beta", f.beta},
                           {"beta_min", f.beta_min},
                           {"beta_max", f.beta_max},
                           {"threshold_ok", f.threshold_ok},
                           {"level", level_json(f.level)},
                           {"dp1_guarantee", guarantee_json(f.guarantee)},
                           {"T_fraction", f.t_fraction},
                           {"T_target", f.t_target}};
        ordered_json slices = ordered_json::array();
        for (const auto& s : r.slices) slices.push_back(slice_json(g, s));
        j["slices"] = slices;
    }
    if (r.large_beta) {
        const auto& l = *r.large_beta;
        j["large_beta"] = {{"level", level_json(l.level)},
                           {"dp2_guarantee", guarantee_json(l.guarantee)},
                           {"alpha", l.alpha},
                           {"rho", to_string(l.rho)},
                           {"invariance", l.invariance ? invariance_json(*l.invariance) : ordered_json(nullptr)}};
    }
    if (r.small_beta) {
        const auto& s = *r.small_beta;
        ordered_json chains = ordered_json::array();
        const auto& qg = r.quotient_group ? *r.quotient_group : g;
        for (const auto& c : s.chains) {
            ordered_json cj{{"t", qg.format(c.t)}, {"slice_size", c.slice_size}, {"skipped", c.skipped}};
            if (!c.skipped) {
                cj["g1_size"] = c.g1_size;
                cj["alpha_t"] = c.alpha_t;
                cj["in_T_prime"] = c.in_t_prime;
                if (c.in_t_prime) {
                    cj["g_prime_size"] = c.g_prime_size;
                    cj["g_size"] = c.g_size;
                    cj["g_differences"] = c.g_differences;
                    cj["gamma"] = c.gamma;
                }
            }
            chains.push_back(cj);
        }
        ordered_json inv = ordered_json::array();
        for (const auto& c : s.invariance) inv.push_back(invariance_json(c));
        j["small_beta"] = {{"T_prime_size", s.t_prime_size},
                           {"skipped", s.skipped},
                           {"alpha", s.alpha},
                           {"X_prime_size", s.x_prime_size},
                           {"eta", s.eta},
                           {"x_level", s.x_level ? level_json(*s.x_level) : ordered_json(nullptr)},
                           {"invariance", inv},
                           {"counts_in", r.quotient_group ? "quotient" : "ambient"},
                           {"chains", chains},
                           {"notes", s.notes}};
    }

    ordered_json certs = ordered_json::array();
    for (const auto& c : r.certificates) certs.push_back(certificate_json(c));
    j["certificates"] = certs;
    auto chosen = certificate_json(r.chosen_certificate());
    chosen["index"] = r.chosen;
    j["chosen"] = chosen;

    ordered_json trace = ordered_json::array();
    for (const auto& t : r.trace) trace.push_back({{"step", t.step}, {"detail", t.detail}});
    j["trace"] = trace;
    const auto& t = r.truncation;
    j["truncation"] = {{"any", t.any()},
                       {"slices_sampled", t.slices_sampled},
                       {"spread_budget_limited", t.spread_budget_limited},
                       {"heavy_count", t.heavy_count},
                       {"slices_evaluated", t.slices_evaluated},
                       {"slices_skipped_pair_cap", t.slices_skipped_pair_cap},
                       {"T_below_two", t.t_below_two},
                       {"invariance_checks_skipped", t.invariance_checks_skipped}};
    if (include_timing) j["timing"] = {{"wall_ms", r.wall_ms}};
    return j.dump(2) + "\n";
}

std::string render_csv(const PipelineReport& r) {
    std::string out = "label,size,energy,e_size,e_energy,meets_theorem\n";
    for (const auto& c : r.certificates) {
        out += csv_field(c.label()) + "," + std::to_string(c.size()) + "," + csv_double(c.energy.value()) + "," +
               csv_double(c.e_size) + "," + csv_double(c.e_energy) + "," + (c.meets_theorem ? "true" : "false") + "\n";
    }
    return out;
}

std::string cmd_extract(const RunConfig& config) {
    const auto set = load_input(config);
    const auto report = run_pipeline(set, config.extract);
    auto text = config.format == OutputFormat::json ? render_json(report, config_json(config)) : render_csv(report);
    if (config.output_path) write_file_atomic(*config.output_path, text);
    return text;
}

std::string cmd_generate(const std::string& spec, const std::optional<std::string>& out_path) {
    const auto text = format_set_text(generate(parse_generator_spec(spec)));
    if (out_path) write_file_atomic(*out_path, text);
    return text;
}

}  // namespace freiman
