#include <chrono>
#include <functional>
#include <json.hpp>

#include "freiman/generators.hpp"
#include "freiman/runner.hpp"

namespace freiman {

using nlohmann::ordered_json;

namespace {

ordered_json set_json(const FiniteSet& s) {
    ordered_json arr = ordered_json::array();
    for (const auto e : s) arr.push_back(s.group().format(e));
    return ordered_json{{"group", s.group().to_string()}, {"elements", arr}};
}

class Recorder {
public:
    explicit Recorder(VerifyResult& out) : out_(out) {}

    void check(const std::string& name, bool ok, const std::function<ordered_json()>& witness) {
        auto& p = slot(name);
        if (ok) {
            ++p.passed;
            return;
        }
        ++p.failed;
        if (p.counterexample.empty()) {
            auto w = witness();
            w["property"] = name;
            p.counterexample = w.dump();
        }
    }

private:
    PropertyResult& slot(const std::string& name) {
        for (auto& p : out_.properties)
            if (p.name == name) return p;
        out_.properties.push_back(PropertyResult{name});
        return out_.properties.back();
    }

    VerifyResult& out_;
};

std::vector<GroupSpec> oracle_groups() {
    return {GroupSpec::f2(8), GroupSpec::fp(3, 4), GroupSpec::zmod(97), GroupSpec::integers()};
}

FiniteSet random_small_set(const GroupSpec& g, std::uint64_t size, std::uint64_t seed) {
    if (g.kind() == GroupKind::z) return gen_random_interval(-50, 50, size, seed);
    return gen_random(g, size, seed);
}

template <class F>
VerifyResult timed(const char* suite, std::uint64_t seed, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    VerifyResult out;
    out.suite = suite;
    out.seed = seed;
    Recorder rec(out);
    body(rec);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace

bool VerifyResult::ok() const noexcept {
    for (const auto& p : properties)
        if (!p.ok()) return false;
    return true;
}

std::string VerifyResult::summary() const {
    std::string out;
    for (const auto& p : properties)
        out += suite + " " + p.name + ": " + std::to_string(p.passed) + "/" + std::to_string(p.passed + p.failed) +
               (p.ok() ? " pass" : " FAIL") + "\n";
    out += suite + ": " + (ok() ? "all properties hold" : "failures found") + "\n";
    return out;
}

std::string VerifyResult::counterexamples() const {
    ordered_json arr = ordered_json::array();
    for (const auto& p : properties)
        if (!p.counterexample.empty()) arr.push_back(ordered_json::parse(p.counterexample));
    return arr.dump(2);
}

VerifyResult verify_oracle(std::uint64_t seed, std::uint64_t trials) {
    return timed("oracle", seed, [&](Recorder& rec) {
        CounterRng rng(seed);
        for (const auto& g : oracle_groups()) {
            for (std::uint64_t i = 0; i < trials; ++i) {
                const auto a = random_small_set(g, 1 + rng.below(30), rng());
                const auto oracle = energy_oracle(a);
                const auto pairs = energy_exact(a, DiffMethod::pairs);
                const auto fast = energy_exact(a, DiffMethod::transform);
                const auto witness = [&] { return set_json(a); };
                rec.check("energy_pairs_matches_oracle", pairs.quadruples == oracle.quadruples, witness);
                rec.check("energy_transform_matches_oracle", fast.quadruples == oracle.quadruples, witness);

                const auto table = diff_table(a);
                const Rational e = oracle.normalized();
                rec.check("energy_between_inverse_doubling_and_one",
                          e <= 1 && e * Rational(table.size(), a.size()) >= 1, witness);

                std::uint64_t total = 0;
                bool symmetric = true;
                for (std::size_t j = 0; j < table.size(); ++j) {
                    total += table.counts()[j];
                    symmetric = symmetric && table.count(g.neg(table.support()[j])) == table.counts()[j];
                }
                rec.check("table_sum_is_square", total == a.size() * a.size(), witness);
                rec.check("table_zero_is_size", table.count(g.identity()) == a.size(), witness);
                rec.check("table_symmetric", symmetric, witness);
            }
        }
    });
}

VerifyResult verify_lemmas(std::uint64_t seed, std::uint64_t trials) {
    return timed("lemmas", seed, [&](Recorder& rec) {
        CounterRng rng(seed);
        for (std::uint64_t i = 0; i < trials; ++i) {
            const auto n = 1 + rng.below(64);
            const auto top = std::uint64_t{1} << rng.below(24);
            std::vector<std::uint64_t> v1(n), v2(n);
            for (auto& v : v1) v = 1 + rng.below(top);
            for (auto& v : v2) v = rng.below(4) == 0 ? 0 : 1 + rng.below(top);
            if (std::all_of(v2.begin(), v2.end(), [](auto v) { return v == 0; })) v2[0] = 1;
            const auto witness1 = [&] { return ordered_json{{"values", v1}}; };
            const auto witness2 = [&] { return ordered_json{{"values", v2}}; };
            rec.check("dp1_cardinality_bound", dp1_guarantee(dp1_level(v1)).holds, witness1);
            rec.check("dp2_cardinality_bound", dp2_guarantee(dp2_level(v2)).holds, witness2);
        }
        const Rational rhos[] = {Rational(1, 8), Rational(1, 4), Rational(1, 2), Rational(1)};
        const auto g = GroupSpec::f2(10);
        for (std::uint64_t i = 0; i < trials; ++i) {
            const auto b2 = gen_random(g, 20 + rng.below(41), rng());
            const auto& rho = rhos[rng.below(4)];
            const auto heavy = translate_heavy_set(b2, rho);
            CounterRng pick_rng(rng());
            const auto k = 1 + pick_rng.below(heavy.size());
            std::vector<Elem> picked;
            for (const auto j : sample_without_replacement(heavy.size(), k, pick_rng)) picked.push_back(heavy.elements()[j]);
            const auto b1 = FiniteSet::from_sorted(g, std::move(picked));
            const auto r = invariance_energy_bound(b1, b2, rho);
            const auto witness = [&] {
                return ordered_json{{"B1", set_json(b1)}, {"B2", set_json(b2)}, {"rho", to_string(rho)}};
            };
            rec.check("invariance_hypothesis", r.hypothesis_ok, witness);
            rec.check("energy_invariance_bound", r.bound_holds, witness);
            rec.check("cs2_inequality", r.cs2 && r.cs2->holds, witness);
        }
    });
}

VerifyResult verify_pipeline(std::uint64_t seed, std::uint64_t trials) {
    return timed("pipeline", seed, [&](Recorder& rec) {
        CounterRng rng(seed);
        ExtractConfig config;
        config.seed = seed;
        for (std::uint64_t i = 0; i < trials; ++i) {
            FiniteSet a(GroupSpec::integers());
            switch (i % 7) {
                case 0: a = gen_random(GroupSpec::f2(10), 8 + rng.below(33), rng()); break;
                case 1: a = gen_random_interval(-60, 60, 3 + rng.below(18), rng()); break;
                case 2: a = gen_random(GroupSpec::zmod(101), 5 + rng.below(20), rng()); break;
                case 3: a = gen_random(GroupSpec::fp(3, 4), 5 + rng.below(20), rng()); break;
                case 4: a = gen_subspace(GroupSpec::f2(8), static_cast<int>(rng.below(6))); break;
                case 5: a = gen_r_plus_h(RPlusHSpec{12, 3, 1 + rng.below(8), rng()}); break;
                default: {
                    GapSpec s;
                    s.base = static_cast<std::int64_t>(rng.below(10));
                    s.steps = {1, 5 + static_cast<std::int64_t>(rng.below(20))};
                    s.lengths = {2 + rng.below(4), 2 + rng.below(4)};
                    a = gen_gap(s).set;
                }
            }
            const auto witness = [&] { return set_json(a); };
            const auto r1 = run_pipeline(a, config);
            const auto r2 = run_pipeline(a, config);
            rec.check("deterministic_report", render_json(r1, "", false) == render_json(r2, "", false), witness);

            const auto table = diff_table(a);
            const auto d = table.support_set();
            bool subset = true, energy_ok = true;
            for (const auto& c : r1.certificates) {
                subset = subset && is_subset(c.candidate, d);
                energy_ok = energy_ok && energy_exact(c.candidate).normalized() == c.energy.normalized();
            }
            rec.check("certificates_inside_difference_set", subset, witness);
            rec.check("certificate_energy_recomputes", energy_ok, witness);

            bool beta_ok = true;
            for (const auto& s : r1.slices) beta_ok = beta_ok && s.spread >= a.size() && s.spread <= d.size();
            rec.check("beta_in_unit_interval", beta_ok, witness);

            if (r1.degenerate) {
                rec.check("coset_energy_one", r1.k == 1 && r1.chosen_certificate().energy.normalized() == 1, witness);
            } else {
                const auto n = static_cast<unsigned __int128>(a.size());
                bool heavy = true;
                for (const auto t : r1.T) heavy = heavy && 2 * static_cast<unsigned __int128>(table.count(t)) * d.size() >= n * n;
                rec.check("refinement_threshold", heavy && !r1.T.empty(), witness);
                std::uint64_t lo = ~std::uint64_t{0}, hi = 0;
                for (const auto& s : r1.refinement->selected) {
                    lo = std::min(lo, s.spread);
                    hi = std::max(hi, s.spread);
                }
                rec.check("refinement_single_bin", hi <= 2 * lo, witness);
            }

            bool maximal = true;
            const auto best = r1.chosen_certificate().energy.normalized();
            for (const auto& c : r1.certificates) maximal = maximal && (!c.meets_floor || c.energy.normalized() <= best);
            rec.check("chosen_maximizes_energy", maximal && r1.chosen_certificate().meets_floor, witness);

            bool identity = true;
            const auto elems = a.elements();
            for (int k = 0; k < 4; ++k) {
                const auto x = elems[rng.below(elems.size())], y = elems[rng.below(elems.size())];
                const auto diff = a.group().sub(x, y);
                identity = identity && translate_intersect(a, diff).size() == table.count(diff);
            }
            rec.check("pair_value_identity", identity, witness);
        }
    });
}

VerifyResult cmd_verify(const std::string& suite, std::uint64_t seed, std::uint64_t trials) {
    if (suite == "oracle") return verify_oracle(seed, trials ? trials : 200);
    if (suite == "lemmas") return verify_lemmas(seed, trials ? trials : 1000);
    if (suite == "pipeline") return verify_pipeline(seed, trials ? trials : 28);
    fail(ErrorCode::invalid_argument, "unknown suite '" + suite + "' (oracle | lemmas | pipeline)");
}

}  // namespace freiman
