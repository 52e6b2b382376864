#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "freiman/dyadic.hpp"
#include "freiman/rational.hpp"
#include "freiman/set_engine.hpp"

namespace freiman {

struct ExtractConfig {
    Rational eps{1, 37};
    Rational cmax{8};
    std::size_t slice_cap = 4096;
    std::uint64_t pair_cap = 1'000'000;
    std::uint64_t seed = 1;
    // Run the cascades on A/P for the stabilizer P of A and lift the results back.
    bool reduce_by_stabilizer = true;
};

/// Degenerate (coset) threshold on K.
inline const Rational kDegenerateK = Rational(1) + Rational(1, 1 << 20);

/// A with its difference table, A - A and K. Neither copyable nor movable.
class ExtractionContext {
public:
    ExtractionContext(FiniteSet a, ExtractConfig config);
    ExtractionContext(FiniteSet a, DiffTable table, ExtractConfig config);
    ExtractionContext(const ExtractionContext&) = delete;
    ExtractionContext& operator=(const ExtractionContext&) = delete;

    const FiniteSet& set() const noexcept { return a_; }
    const DiffTable& table() const noexcept { return table_; }
    const FiniteSet& differences() const noexcept { return diffs_; }
    const IndexedSet& difference_index() const noexcept { return *index_; }
    const Rational& k() const noexcept { return k_; }
    const ExtractConfig& config() const noexcept { return config_; }
    bool degenerate() const { return k_ <= kDegenerateK; }

    /// Table of A - A, built on first use.
    const DiffTable& difference_table() const;
    /// log_K(x); 0 when K = 1.
    double log_k(const Rational& x) const;

private:
    FiniteSet a_;
    DiffTable table_;
    FiniteSet diffs_;
    std::unique_ptr<IndexedSet> index_;
    Rational k_;
    ExtractConfig config_;
    mutable std::unique_ptr<DiffTable> diff_table_;
};

struct SliceStats {
    Elem t;
    std::uint64_t slice_size = 0;  // |A[t]|
    std::uint64_t spread = 0;      // |A[t] - A|
    double beta = 0;               // log_K(spread / |A|)
};

struct RefinementResult {
    std::vector<Elem> T;             // sorted
    std::vector<FiniteSet> slices;   // A[t] for t in T, aligned with T
    std::vector<SliceStats> evaluated;
    std::vector<SliceStats> selected;  // aligned with T
    double beta = 0;  // mean over T
    double beta_min = 0;
    double beta_max = 0;
    bool threshold_ok = false;
    std::uint64_t heavy_count = 0;
    bool sampled = false;
    bool spread_budget_limited = false;  // sample shrunk below the slice cap
    bool below_two = false;
    DyadicLevel level;
    GuaranteeCheck guarantee;
    double t_fraction = 0;  // |T| / |A - A|, scaled up when sampled
    double t_target = 0;    // K^-eps
    // A[t] - A as indices into A - A, aligned with T; empty when over the memory budget.
    std::vector<std::vector<std::uint32_t>> spread_index;
};

/// Heavy support {t : r(t) >= |A|/(2K)}, spreads, and the largest dyadic spread bin.
RefinementResult first_refinement(const ExtractionContext& ctx);

enum class CandidateKind { a, a_minus_a, a_slice, x_large_beta, x_small_beta };

struct CandidateCertificate {
    CandidateKind kind = CandidateKind::a;
    std::optional<Elem> t;
    FiniteSet candidate{GroupSpec::integers()};
    EnergyReport energy;
    double e_size = 0;
    double e_energy = 0;
    bool meets_theorem = false;
    bool meets_floor = false;

    std::uint64_t size() const noexcept { return candidate.size(); }
    std::string label() const;
};

/// Checks S ⊆ A - A and certifies size and energy. `known` skips the energy computation.
CandidateCertificate evaluate_candidate(const ExtractionContext& ctx, CandidateKind kind, FiniteSet s,
                                        std::optional<Elem> t = std::nullopt,
                                        std::optional<EnergyReport> known = std::nullopt);

struct InvarianceCheck {
    std::string against;  // "A-A" or "A"
    InvarianceBoundReport report;
    double rho_exponent = 0;  // log_K(1/rho)
    bool skipped = false;
};

struct LargeBetaResult {
    CandidateCertificate certificate;
    DyadicLevel level;
    GuaranteeCheck guarantee;
    double alpha = 0;  // log_K(|A-A| / |X|)
    Rational rho;      // min N(x) / |A-A| over X
    std::optional<InvarianceCheck> invariance;
};

/// N(x) = |{t in T : x in A[t] - A}| over A - A, largest-mass dyadic level.
LargeBetaResult large_beta_candidate(const ExtractionContext& ctx, const RefinementResult& refinement);

struct SliceChain {
    Elem t;
    std::uint64_t slice_size = 0;
    bool skipped = false;  // |A[t]|^2 above the pair cap
    std::uint64_t g1_size = 0;
    double alpha_t = 0;
    bool in_t_prime = false;
    std::uint64_t g_prime_size = 0;
    std::uint64_t g_size = 0;
    std::uint64_t g_differences = 0;
    double gamma = 0;
    std::optional<std::size_t> certificate;  // index into SmallBetaResult::certificates
};

struct SmallBetaResult {
    std::vector<CandidateCertificate> certificates;  // slices in T' order, then X
    std::vector<SliceChain> chains;
    std::size_t skipped = 0;
    std::size_t t_prime_size = 0;
    double alpha = 0;
    std::optional<DyadicLevel> t_prime_level;
    std::optional<DyadicLevel> x_level;
    std::size_t x_prime_size = 0;
    double eta = 0;
    std::vector<InvarianceCheck> invariance;
    std::vector<std::string> notes;
};

SmallBetaResult small_beta_chain(const ExtractionContext& ctx, const RefinementResult& refinement);

struct TraceEntry {
    std::string step;
    std::string detail;
};

struct Truncation {
    bool slices_sampled = false;
    bool spread_budget_limited = false;
    std::uint64_t heavy_count = 0;
    std::uint64_t slices_evaluated = 0;
    std::uint64_t slices_skipped_pair_cap = 0;
    bool t_below_two = false;
    std::uint64_t invariance_checks_skipped = 0;

    bool any() const noexcept {
        return slices_sampled || spread_budget_limited || slices_skipped_pair_cap || t_below_two || invariance_checks_skipped;
    }
};

struct PipelineReport {
    ExtractConfig config;
    GroupSpec group = GroupSpec::integers();
    std::uint64_t set_size = 0;
    std::uint64_t diff_size = 0;
    Rational k;
    EnergyReport energy_a;
    EnergyReport energy_diff;
    // Standing assumptions E(A-A) < K^-(1-2eps) and E(A) < K^-(1-eps).
    bool assumption_diff = false;
    bool assumption_a = false;
    bool degenerate = false;

    std::uint64_t stabilizer_order = 1;
    std::optional<GroupSpec> quotient_group;

    // Ambient-group views; dyadic levels and counts inside the branch results are
    // taken in the quotient when one was used.
    std::vector<Elem> T;
    std::vector<SliceStats> slices;
    std::optional<RefinementResult> refinement;
    std::optional<LargeBetaResult> large_beta;
    std::optional<SmallBetaResult> small_beta;

    std::vector<CandidateCertificate> certificates;
    std::size_t chosen = 0;
    std::vector<TraceEntry> trace;
    Truncation truncation;
    double wall_ms = 0;

    const CandidateCertificate& chosen_certificate() const { return certificates.at(chosen); }
};

/// Pair-enumeration budget for whole-set tables without a transform path.
inline constexpr double kPairBudget = 8.0e9;
// Total |A[t]|*|A| work for slice spreads; the slice sample shrinks to fit.
inline constexpr double kSpreadBudget = 4.0e9;
inline constexpr std::size_t kMinSpreadSample = 64;

PipelineReport run_pipeline(const FiniteSet& a, const ExtractConfig& config = {});

}  // namespace freiman
