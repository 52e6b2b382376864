#include "freiman/extractor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "freiman/generators.hpp"

namespace freiman {

namespace {

constexpr double kCs2Budget = 5.0e7;

// Cost of a whole-set table: transform when available, otherwise |S|^2 pairs.
double table_cost(const FiniteSet& s) {
    const double pairs = static_cast<double>(s.size()) * static_cast<double>(s.size());
    auto order = s.group().order();
    if (!order && s.group().kind() == GroupKind::z && !s.empty()) {
        const double span = static_cast<double>(s.back().value) - static_cast<double>(s.front().value) + 1;
        if (2 * span <= static_cast<double>(kDenseTransformLimit)) return std::min(pairs, 64.0 * span);
    }
    if (order && *order <= kDenseTransformLimit) return std::min(pairs, 64.0 * static_cast<double>(*order));
    return pairs;
}

void require_table_budget(const FiniteSet& s, const char* what) {
    if (table_cost(s) > kPairBudget)
        fail(ErrorCode::cap_exceeded, std::string("difference table of ") + what + " exceeds the pair budget (|S| = " +
                                          std::to_string(s.size()) + ")");
}

double clean(double v) { return v == 0 ? 0.0 : v; }

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// S - min(S), a translate of S inside A - A whenever S ⊆ A.
FiniteSet anchored(const FiniteSet& s) {
    return translate(s, s.group().neg(s.front()));
}

FiniteSet pick(const FiniteSet& domain, const std::vector<std::size_t>& members) {
    std::vector<Elem> out;
    out.reserve(members.size());
    const auto elems = domain.elements();
    for (const auto i : members) out.push_back(elems[i]);
    std::sort(out.begin(), out.end());
    return FiniteSet::from_sorted(domain.group(), std::move(out));
}

InvarianceCheck run_invariance(const ExtractionContext& ctx, const char* against, const FiniteSet& b1, const FiniteSet& b2,
                               const DiffTable& b2_table, const Rational& rho) {
    InvarianceCheck check;
    check.against = against;
    const bool cs2 = static_cast<double>(b1.size()) * static_cast<double>(b2.size()) <= kCs2Budget;
    check.report = invariance_energy_bound(b1, b2, b2_table, rho, cs2);
    check.rho_exponent = clean(ctx.log_k(Rational(1) / rho));
    return check;
}

}  // namespace

ExtractionContext::ExtractionContext(FiniteSet a, ExtractConfig config)
    : ExtractionContext(a, (require_table_budget(a, "A"), diff_table(a)), std::move(config)) {}

ExtractionContext::ExtractionContext(FiniteSet a, DiffTable table, ExtractConfig config)
    : a_(std::move(a)), table_(std::move(table)), diffs_(table_.support_set()), config_(std::move(config)) {
    if (a_.empty()) fail(ErrorCode::empty_set, "extraction needs a nonempty set");
    index_ = std::make_unique<IndexedSet>(diffs_);
    k_ = Rational(diffs_.size(), a_.size());
}

const DiffTable& ExtractionContext::difference_table() const {
    if (!diff_table_) {
        require_table_budget(diffs_, "A - A");
        diff_table_ = std::make_unique<DiffTable>(diff_table(diffs_));
    }
    return *diff_table_;
}

double ExtractionContext::log_k(const Rational& x) const {
    if (k_ == 1) return 0;
    return log_base(k_, x);
}

RefinementResult first_refinement(const ExtractionContext& ctx) {
    const auto& a = ctx.set();
    const auto& table = ctx.table();
    const auto n = static_cast<unsigned __int128>(a.size());
    const auto d = static_cast<unsigned __int128>(ctx.differences().size());

    // r(t) >= |A|/(2K) = |A|^2 / (2|A-A|)
    std::vector<std::size_t> heavy;
    const auto counts = table.counts();
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (2 * counts[i] * d >= n * n) heavy.push_back(i);

    RefinementResult out;
    out.heavy_count = heavy.size();
    std::size_t keep = std::min<std::size_t>(heavy.size(), ctx.config().slice_cap);
    if (!heavy.empty()) {
        double mean = 0;
        for (const auto i : heavy) mean += static_cast<double>(counts[i]);
        mean /= static_cast<double>(heavy.size());
        const double per_slice = mean * static_cast<double>(a.size());
        if (static_cast<double>(keep) * per_slice > kSpreadBudget) {
            const auto fit = static_cast<std::size_t>(kSpreadBudget / per_slice);
            const auto shrunk = std::min(keep, std::max(fit, kMinSpreadSample));
            out.spread_budget_limited = shrunk < keep;
            keep = shrunk;
        }
    }
    if (heavy.size() > keep) {
        CounterRng rng(ctx.config().seed);
        std::vector<std::size_t> sampled;
        for (const auto j : sample_without_replacement(heavy.size(), keep, rng)) sampled.push_back(heavy[j]);
        heavy = std::move(sampled);
        out.sampled = true;
    }

    const auto& index = ctx.difference_index();
    constexpr std::size_t kMemoBytes = std::size_t{256} << 20;
    std::vector<std::vector<std::uint32_t>> memo;
    std::size_t memo_bytes = 0;
    bool memo_ok = true;
    {
        double estimate = 0;
        for (const auto i : heavy)
            estimate += std::min(static_cast<double>(counts[i]) * static_cast<double>(a.size()),
                                 static_cast<double>(ctx.differences().size()));
        memo_ok = estimate * sizeof(std::uint32_t) <= static_cast<double>(kMemoBytes);
    }

    std::vector<FiniteSet> slices;
    std::vector<std::uint64_t> spreads;
    slices.reserve(heavy.size());
    for (const auto i : heavy) {
        const Elem t = table.support()[i];
        auto s = translate_intersect(a, t);
        if (s.size() != counts[i]) fail(ErrorCode::internal_error, "slice size disagrees with r(t)");
        SliceStats st;
        st.t = t;
        st.slice_size = s.size();
        if (!memo_ok) {
            st.spread = diff_set_size(s, a);
        } else {
            const auto spread = diff_set(s, a);
            st.spread = spread.size();
            memo_bytes += spread.size() * sizeof(std::uint32_t);
            if (memo_bytes > kMemoBytes) {
                memo_ok = false;
                memo.clear();
                memo.shrink_to_fit();
            } else {
                std::vector<std::uint32_t> ids;
                ids.reserve(spread.size());
                for (const auto x : spread) {
                    const auto id = index.index_of(x);
                    if (id < 0) fail(ErrorCode::internal_error, "A[t] - A escapes A - A");
                    ids.push_back(static_cast<std::uint32_t>(id));
                }
                memo.push_back(std::move(ids));
            }
        }
        st.beta = clean(ctx.log_k(Rational(st.spread, a.size())));
        spreads.push_back(st.spread);
        out.evaluated.push_back(st);
        slices.push_back(std::move(s));
    }

    out.level = dp1_level(spreads);
    out.guarantee = dp1_guarantee(out.level);
    out.threshold_ok = true;
    double beta_sum = 0;
    out.beta_min = 1e300;
    out.beta_max = -1e300;
    for (const auto m : out.level.members) {
        const auto& st = out.evaluated[m];
        out.T.push_back(st.t);
        out.selected.push_back(st);
        out.slices.push_back(std::move(slices[m]));
        if (memo_ok) out.spread_index.push_back(std::move(memo[m]));
        out.threshold_ok = out.threshold_ok && 2 * static_cast<unsigned __int128>(st.slice_size) * d >= n * n;
        beta_sum += st.beta;
        out.beta_min = std::min(out.beta_min, st.beta);
        out.beta_max = std::max(out.beta_max, st.beta);
    }
    out.beta = beta_sum / static_cast<double>(out.T.size());
    out.below_two = out.sampled && out.T.size() < 2;
    const double scale = static_cast<double>(out.heavy_count) / static_cast<double>(heavy.size());
    out.t_fraction = static_cast<double>(out.T.size()) * scale / static_cast<double>(ctx.differences().size());
    out.t_target = ctx.k() == 1 ? 1.0 : std::pow(to_double(ctx.k()), -to_double(ctx.config().eps));
    return out;
}

std::string CandidateCertificate::label() const {
    switch (kind) {
        case CandidateKind::a: return "A";
        case CandidateKind::a_minus_a: return "A_minus_A";
        case CandidateKind::a_slice: return "A_slice(" + (t ? candidate.group().format(*t) : std::string("?")) + ")";
        case CandidateKind::x_large_beta: return "X_large_beta";
        case CandidateKind::x_small_beta: return "X_small_beta";
    }
    return "?";
}

CandidateCertificate evaluate_candidate(const ExtractionContext& ctx, CandidateKind kind, FiniteSet s, std::optional<Elem> t,
                                        std::optional<EnergyReport> known) {
    if (s.empty()) fail(ErrorCode::internal_error, "empty candidate");
    const auto& index = ctx.difference_index();
    for (const auto x : s)
        if (!index.contains(x)) fail(ErrorCode::internal_error, "candidate is not a subset of A - A");
    CandidateCertificate c;
    c.kind = kind;
    c.t = t;
    c.energy = known ? *known : energy_exact(s);
    const Rational e = c.energy.normalized();
    const auto a_size = ctx.set().size();
    c.e_size = clean(ctx.log_k(Rational(a_size, s.size())));
    c.e_energy = clean(-ctx.log_k(e));
    c.meets_theorem = at_least_power(e, ctx.k(), Rational(1) - ctx.config().eps);
    const std::size_t min_size = std::min<std::size_t>(2, ctx.differences().size());
    c.meets_floor = s.size() >= min_size &&
                    (s.size() >= a_size || at_least_power(Rational(s.size(), a_size), ctx.k(), ctx.config().cmax));
    c.candidate = std::move(s);
    return c;
}

LargeBetaResult large_beta_candidate(const ExtractionContext& ctx, const RefinementResult& refinement) {
    if (refinement.T.empty()) fail(ErrorCode::invalid_argument, "large-beta cascade needs a nonempty T");
    const auto& diffs = ctx.differences();
    const auto& index = ctx.difference_index();
    std::vector<std::uint64_t> n(diffs.size(), 0);
    if (refinement.spread_index.size() == refinement.slices.size()) {
        for (const auto& ids : refinement.spread_index)
            for (const auto i : ids) ++n[i];
    } else {
        for (const auto& slice : refinement.slices)
            for (const auto x : diff_set(slice, ctx.set())) {
                const auto i = index.index_of(x);
                if (i < 0) fail(ErrorCode::internal_error, "A[t] - A escapes A - A");
                ++n[static_cast<std::size_t>(i)];
            }
    }
    if (std::all_of(n.begin(), n.end(), [](auto v) { return v == 0; }))
        fail(ErrorCode::internal_error, "N(x) vanishes on A - A");

    LargeBetaResult out;
    out.level = dp2_level(n);
    out.guarantee = dp2_guarantee(out.level);
    auto x = pick(diffs, out.level.members);
    std::uint64_t n_min = ~std::uint64_t{0};
    for (const auto m : out.level.members) n_min = std::min(n_min, n[m]);
    out.rho = Rational(n_min, diffs.size());
    out.alpha = clean(ctx.log_k(Rational(diffs.size(), x.size())));
    if (table_cost(diffs) <= kPairBudget)
        out.invariance = run_invariance(ctx, "A-A", x, diffs, ctx.difference_table(), out.rho);
    else
        out.invariance = InvarianceCheck{"A-A", {}, 0, true};
    out.certificate = evaluate_candidate(ctx, CandidateKind::x_large_beta, std::move(x));
    return out;
}

SmallBetaResult small_beta_chain(const ExtractionContext& ctx, const RefinementResult& refinement) {
    if (refinement.T.empty()) fail(ErrorCode::invalid_argument, "small-beta cascade needs a nonempty T");
    const auto& table = ctx.table();
    SmallBetaResult out;

    struct Work {
        std::optional<DiffTable> pairs;  // table of A[t]
        DyadicLevel g1;
    };
    std::vector<Work> work(refinement.T.size());
    std::vector<Rational> densities;
    std::vector<std::size_t> active;

    for (std::size_t i = 0; i < refinement.T.size(); ++i) {
        const auto& s = refinement.slices[i];
        SliceChain chain;
        chain.t = refinement.T[i];
        chain.slice_size = s.size();
        const auto m = static_cast<std::uint64_t>(s.size());
        if (m * m > ctx.config().pair_cap) {
            chain.skipped = true;
            ++out.skipped;
            out.chains.push_back(chain);
            continue;
        }
        // Pairs (a, a') of A[t] grouped by x = a - a' with multiplicity r_{A[t]}(x);
        // the pair value |(a - a' + A) ∩ A| is r_A(x).
        auto st = diff_table(s, DiffMethod::pairs);
        std::vector<std::uint64_t> value;
        value.reserve(st.size());
        for (const auto x : st.support()) value.push_back(table.count(x));
        work[i].g1 = dp2_level(value, st.counts());
        work[i].pairs = std::move(st);
        chain.g1_size = work[i].g1.cardinality;
        const Rational density(chain.g1_size, m * m);
        chain.alpha_t = clean(ctx.log_k(Rational(1) / density));
        densities.push_back(density);
        active.push_back(i);
        out.chains.push_back(chain);
    }
    if (out.skipped) out.notes.push_back(std::to_string(out.skipped) + " slices skipped: |A[t]|^2 above the pair cap");
    if (active.empty()) {
        out.notes.push_back("T' empty: X_small_beta omitted");
        return out;
    }

    out.t_prime_level = dp1_level(densities);
    double alpha_sum = 0;
    std::map<Elem, std::uint64_t> g;  // g(x) over X'
    for (const auto pos : out.t_prime_level->members) {
        const auto i = active[pos];
        auto& chain = out.chains[i];
        chain.in_t_prime = true;
        alpha_sum += chain.alpha_t;
        const auto& st = *work[i].pairs;
        const auto& g1 = work[i].g1;

        // G'(t): differences of G1 with r_{A[t]}(x) >= |G1| / (2 |-(G1)|)
        const auto distinct = static_cast<unsigned __int128>(g1.members.size());
        std::vector<std::uint64_t> values;
        std::vector<Elem> xs;
        for (const auto j : g1.members) {
            const auto r = st.counts()[j];
            if (2 * static_cast<unsigned __int128>(r) * distinct >= g1.cardinality) {
                values.push_back(r);
                xs.push_back(st.support()[j]);
            }
        }
        std::uint64_t g_prime = 0;
        for (const auto v : values) g_prime += v;
        chain.g_prime_size = g_prime;
        const auto level = dp1_level(values, values);
        chain.g_size = level.cardinality;
        chain.g_differences = level.members.size();
        std::uint64_t r_top = 0;
        for (const auto j : level.members) {
            r_top = std::max(r_top, values[j]);
            ++g[xs[j]];
        }
        chain.gamma = clean(ctx.log_k(Rational(chain.slice_size, r_top)));

        const auto& s = refinement.slices[i];
        chain.certificate = out.certificates.size();
        out.certificates.push_back(
            evaluate_candidate(ctx, CandidateKind::a_slice, anchored(s), chain.t, energy_from_table(st)));
    }
    out.t_prime_size = out.t_prime_level->members.size();
    out.alpha = alpha_sum / static_cast<double>(out.t_prime_size);

    std::vector<Elem> xp;
    std::vector<std::uint64_t> gv;
    for (const auto& [x, c] : g) {
        xp.push_back(x);
        gv.push_back(c);
    }
    out.x_prime_size = xp.size();
    const auto x_prime = FiniteSet::from_sorted(ctx.set().group(), xp);
    out.x_level = dp2_level(gv);
    auto x = pick(x_prime, out.x_level->members);
    std::uint64_t g_min = ~std::uint64_t{0}, g_max = 0;
    for (const auto j : out.x_level->members) {
        g_min = std::min(g_min, gv[j]);
        g_max = std::max(g_max, gv[j]);
    }
    const auto d = ctx.differences().size();
    out.eta = clean(ctx.log_k(Rational(d, g_max)));

    // X against A - A with rho = min g / |A - A|, then against A with rho = min r_A / |A|.
    if (table_cost(ctx.differences()) <= kPairBudget)
        out.invariance.push_back(run_invariance(ctx, "A-A", x, ctx.differences(), ctx.difference_table(), Rational(g_min, d)));
    else
        out.invariance.push_back(InvarianceCheck{"A-A", {}, 0, true});
    std::uint64_t r_min = ~std::uint64_t{0};
    for (const auto e : x) r_min = std::min(r_min, table.count(e));
    out.invariance.push_back(run_invariance(ctx, "A", x, ctx.set(), table, Rational(r_min, ctx.set().size())));

    out.certificates.push_back(evaluate_candidate(ctx, CandidateKind::x_small_beta, std::move(x)));
    return out;
}

namespace {

// Carries a quotient certificate to the ambient group: candidate lift(S) + P, same normalized energy.
CandidateCertificate lift_certificate(const ExtractionContext& ambient, const QuotientMap& qm, const CandidateCertificate& c) {
    const BigInt p = qm.kernel().size();
    const EnergyReport e{c.energy.quadruples * p * p * p, c.energy.denominator * p * p * p};
    std::optional<Elem> t;
    if (c.t) t = qm.lift(*c.t);
    return evaluate_candidate(ambient, c.kind, qm.lift_set(c.candidate), t, e);
}

SliceStats lift_stats(const QuotientMap& qm, SliceStats st) {
    const auto p = qm.kernel().size();
    st.t = qm.lift(st.t);
    st.slice_size *= p;
    st.spread *= p;
    return st;
}

}  // namespace

PipelineReport run_pipeline(const FiniteSet& a, const ExtractConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    if (a.empty()) fail(ErrorCode::empty_set, "extraction needs a nonempty set");
    if (config.eps <= 0 || config.eps >= 1) fail(ErrorCode::invalid_argument, "eps must lie in (0, 1)");
    if (config.cmax <= 0) fail(ErrorCode::invalid_argument, "cmax must be positive");
    if (config.slice_cap == 0) fail(ErrorCode::invalid_argument, "slice cap must be positive");

    PipelineReport rep;
    rep.config = config;
    rep.group = a.group();
    ExtractionContext ambient(a, config);
    rep.set_size = a.size();
    rep.diff_size = ambient.differences().size();
    rep.k = ambient.k();
    rep.energy_a = energy_from_table(ambient.table());
    rep.energy_diff = energy_from_table(ambient.difference_table());
    rep.assumption_diff = !at_least_power(rep.energy_diff.normalized(), rep.k, Rational(1) - 2 * config.eps);
    rep.assumption_a = !at_least_power(rep.energy_a.normalized(), rep.k, Rational(1) - config.eps);
    rep.trace.push_back({"input", "|A| = " + std::to_string(rep.set_size) + ", |A-A| = " + std::to_string(rep.diff_size) +
                                      ", K = " + to_string(rep.k)});

    auto finish = [&] {
        std::size_t best = 0;
        bool found = false;
        for (std::size_t i = 0; i < rep.certificates.size(); ++i) {
            const auto& c = rep.certificates[i];
            if (!c.meets_floor) continue;
            if (!found || c.energy.normalized() > rep.certificates[best].energy.normalized()) {
                best = i;
                found = true;
            }
        }
        if (!found) fail(ErrorCode::internal_error, "no certificate meets the size floor");
        rep.chosen = best;
        rep.trace.push_back({"choose", rep.certificates[best].label() + " with E = " +
                                           to_string(rep.certificates[best].energy.normalized())});
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return rep;
    };

    rep.certificates.push_back(evaluate_candidate(ambient, CandidateKind::a_minus_a, ambient.differences(), std::nullopt,
                                                  rep.energy_diff));
    if (ambient.degenerate()) {
        rep.degenerate = true;
        rep.trace.push_back({"degenerate", "K <= 1 + 2^-20: A is a coset, A - A returned"});
        return finish();
    }
    rep.trace.push_back({"standing-assumption", std::string("E(A-A) < K^-(1-2eps): ") + (rep.assumption_diff ? "yes" : "no")});
    rep.certificates.push_back(evaluate_candidate(ambient, CandidateKind::a, anchored(a), std::nullopt, rep.energy_a));
    rep.trace.push_back({"standing-assumption", std::string("E(A) < K^-(1-eps): ") + (rep.assumption_a ? "yes" : "no")});

    // Work modulo the stabilizer when it is nontrivial.
    std::optional<QuotientMap> qm;
    const auto stab = stabilizer(ambient.table());
    rep.stabilizer_order = stab.size();
    if (config.reduce_by_stabilizer && stab.size() > 1) qm = QuotientMap::make(stab);
    std::unique_ptr<ExtractionContext> reduced;
    if (qm) {
        rep.quotient_group = qm->quotient();
        reduced = std::make_unique<ExtractionContext>(qm->project_set(a), config);
        rep.trace.push_back({"stabilizer", "|P| = " + std::to_string(stab.size()) + ", cascades run in " +
                                               qm->quotient().to_string()});
    }
    const ExtractionContext& work = reduced ? *reduced : ambient;
    auto lift_cert = [&](const CandidateCertificate& c) { return qm ? lift_certificate(ambient, *qm, c) : c; };

    auto ref = first_refinement(work);
    for (const auto& st : ref.evaluated) rep.slices.push_back(qm ? lift_stats(*qm, st) : st);
    for (const auto t : ref.T) {
        if (!qm) {
            rep.T.push_back(t);
            continue;
        }
        const auto base = qm->lift(t);
        for (const auto p : qm->kernel()) rep.T.push_back(a.group().add(base, p));
    }
    std::sort(rep.T.begin(), rep.T.end());
    rep.truncation.slices_sampled = ref.sampled;
    rep.truncation.spread_budget_limited = ref.spread_budget_limited;
    rep.truncation.heavy_count = ref.heavy_count;
    rep.truncation.slices_evaluated = ref.evaluated.size();
    rep.truncation.t_below_two = ref.below_two;
    rep.trace.push_back({"first_refinement", std::to_string(ref.heavy_count) + " heavy t, " + std::to_string(ref.evaluated.size()) +
                                                 " evaluated, |T| = " + std::to_string(ref.T.size()) +
                                                 ", beta in [" + fmt_double(ref.beta_min) + ", " + fmt_double(ref.beta_max) + "]"});

    auto large = large_beta_candidate(work, ref);
    rep.certificates.push_back(lift_cert(large.certificate));
    if (large.invariance && large.invariance->skipped) ++rep.truncation.invariance_checks_skipped;
    rep.trace.push_back({"large_beta", "X_large_beta from dp2 level " + std::to_string(large.level.index) + ", |X| = " +
                                           std::to_string(large.certificate.size()) + ", alpha = " + fmt_double(large.alpha)});

    auto small = small_beta_chain(work, ref);
    rep.truncation.slices_skipped_pair_cap = small.skipped;
    for (const auto& inv : small.invariance)
        if (inv.skipped) ++rep.truncation.invariance_checks_skipped;
    for (const auto& c : small.certificates) rep.certificates.push_back(lift_cert(c));
    rep.trace.push_back({"small_beta", "|T'| = " + std::to_string(small.t_prime_size) + ", " +
                                           std::to_string(small.certificates.size()) + " certificates, alpha = " +
                                           fmt_double(small.alpha) + ", eta = " + fmt_double(small.eta)});
    for (const auto& note : small.notes) rep.trace.push_back({"small_beta", note});

    rep.refinement = std::move(ref);
    rep.large_beta = std::move(large);
    rep.small_beta = std::move(small);
    auto result = finish();

    // Lifted energies rest on E(S + P) = E(S); confirm the chosen one directly.
    if (qm) {
        const auto& c = result.chosen_certificate();
        if (table_cost(c.candidate) <= kPairBudget && energy_exact(c.candidate).normalized() != c.energy.normalized())
            fail(ErrorCode::internal_error, "lifted energy disagrees with the ambient recomputation");
    }
    return result;
}

}  // namespace freiman
