#include "freiman/generators.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_set>

namespace freiman {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kMaxGenerated = std::uint64_t{1} << 28;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

template <class T>
T to_number(std::string_view s, std::string_view key) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail(ErrorCode::parse_error, "malformed value for " + std::string(key) + ": '" + std::string(s) + "'");
    return v;
}

template <class T>
std::vector<T> to_list(std::string_view s, std::string_view key) {
    std::vector<T> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(to_number<T>(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start), key));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

GroupSpec group_from_keys(std::map<std::string, std::string, std::less<>>& kv) {
    const auto it = kv.find("group");
    if (it == kv.end()) fail(ErrorCode::parse_error, "generator spec needs group=");
    std::string header = it->second;
    for (const char* key : {"p", "n", "m"}) {
        if (auto k = kv.find(key); k != kv.end()) {
            header += std::string(" ") + key + "=" + k->second;
            kv.erase(k);
        }
    }
    kv.erase(it);
    return GroupSpec::parse(header);
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    return out;
}

std::string group_keys(const GroupSpec& g) {
    switch (g.kind()) {
        case GroupKind::f2: return "group=f2 n=" + std::to_string(g.dimension());
        case GroupKind::fp: return "group=fp p=" + std::to_string(g.prime()) + " n=" + std::to_string(g.dimension());
        case GroupKind::zmod: return "group=zmod m=" + std::to_string(g.modulus());
        case GroupKind::z: break;
    }
    return "group=z";
}

}  // namespace

CounterRng::result_type CounterRng::at(std::uint64_t index) const { return mix(seed_ + (index + 1) * kGolden); }

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) fail(ErrorCode::invalid_argument, "empty sampling range");
    const std::uint64_t limit = max() - max() % bound;
    while (true) {
        const auto v = (*this)();
        if (v < limit) return v % bound;
    }
}

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t population, std::uint64_t k, CounterRng& rng) {
    if (k > population) fail(ErrorCode::invalid_argument, "sample size exceeds population");
    if (k > kMaxGenerated) fail(ErrorCode::cap_exceeded, "sample too large");
    std::vector<std::uint64_t> out;
    out.reserve(k);
    if (population <= std::max<std::uint64_t>(4 * k, 1024)) {
        std::vector<std::uint64_t> pool(population);
        for (std::uint64_t i = 0; i < population; ++i) pool[i] = i;
        for (std::uint64_t i = 0; i < k; ++i) {
            const auto j = i + rng.below(population - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
    } else {
        // Floyd's algorithm
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(k * 2);
        for (std::uint64_t j = population - k; j < population; ++j) {
            const auto v = rng.below(j + 1);
            const auto pick = seen.contains(v) ? j : v;
            seen.insert(pick);
            out.push_back(pick);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

FiniteSet gen_random(const GroupSpec& g, std::uint64_t size, std::uint64_t seed) {
    const auto order = g.order();
    if (!order) fail(ErrorCode::invalid_argument, "gen_random needs a finite group; use an integer window for z");
    if (size > *order) fail(ErrorCode::invalid_argument, "requested size exceeds the group order");
    CounterRng rng(seed);
    std::vector<Elem> elems;
    for (const auto v : sample_without_replacement(*order, size, rng)) elems.push_back(Elem{static_cast<std::int64_t>(v)});
    return FiniteSet::from_sorted(g, std::move(elems));
}

FiniteSet gen_random_interval(std::int64_t lo, std::int64_t hi, std::uint64_t size, std::uint64_t seed) {
    if (hi < lo) fail(ErrorCode::invalid_argument, "empty integer window");
    const std::uint64_t width = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (width == ~std::uint64_t{0}) fail(ErrorCode::invalid_argument, "integer window too wide");
    if (size > width + 1) fail(ErrorCode::invalid_argument, "requested size exceeds the window");
    CounterRng rng(seed);
    std::vector<Elem> elems;
    for (const auto v : sample_without_replacement(width + 1, size, rng))
        elems.push_back(Elem{static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v)});
    return FiniteSet::from_sorted(GroupSpec::integers(), std::move(elems));
}

FiniteSet gen_subspace(const GroupSpec& g, int dim) {
    if (g.kind() != GroupKind::f2 && g.kind() != GroupKind::fp)
        fail(ErrorCode::invalid_argument, "gen_subspace needs an f2 or fp group");
    if (dim < 0 || dim > g.dimension()) fail(ErrorCode::invalid_argument, "subspace dimension out of range");
    // Span of the first `dim` coordinate vectors: payloads [0, p^dim).
    std::uint64_t size = 1;
    for (int i = 0; i < dim; ++i) size *= g.prime();
    if (size > kMaxGenerated) fail(ErrorCode::cap_exceeded, "subspace too large to materialize");
    std::vector<Elem> elems(size);
    for (std::uint64_t i = 0; i < size; ++i) elems[i] = Elem{static_cast<std::int64_t>(i)};
    return FiniteSet::from_sorted(g, std::move(elems));
}

FiniteSet gen_r_plus_h(const RPlusHSpec& spec) {
    const auto g = GroupSpec::f2(spec.n);
    if (spec.dim_h < 0 || spec.dim_h >= spec.n) fail(ErrorCode::invalid_argument, "r-plus-h needs 0 <= dh < n");
    const std::uint64_t cosets = std::uint64_t{1} << (spec.n - spec.dim_h);
    if (spec.r_count < 1 || spec.r_count > cosets)
        fail(ErrorCode::invalid_argument, "|R| must lie in [1, 2^(n-dh)] = [1, " + std::to_string(cosets) + "]");
    const std::uint64_t h_size = std::uint64_t{1} << spec.dim_h;
    if (spec.r_count * h_size > kMaxGenerated) fail(ErrorCode::cap_exceeded, "r-plus-h set too large to materialize");
    CounterRng rng(spec.seed);
    const auto reps = sample_without_replacement(cosets, spec.r_count, rng);
    std::vector<Elem> elems;
    elems.reserve(spec.r_count * h_size);
    for (const auto v : reps)
        for (std::uint64_t h = 0; h < h_size; ++h) elems.push_back(Elem{static_cast<std::int64_t>((v << spec.dim_h) | h)});
    return FiniteSet::from_sorted(g, std::move(elems));
}

GapResult gen_gap(const GapSpec& spec) {
    if (spec.steps.empty() || spec.steps.size() != spec.lengths.size())
        fail(ErrorCode::invalid_argument, "gap needs matching, nonempty steps and lengths");
    __int128 lo = spec.base, hi = spec.base;
    unsigned __int128 product = 1;
    for (std::size_t i = 0; i < spec.steps.size(); ++i) {
        if (spec.lengths[i] == 0) fail(ErrorCode::invalid_argument, "gap lengths must be positive");
        const __int128 reach = static_cast<__int128>(spec.steps[i]) * static_cast<__int128>(spec.lengths[i] - 1);
        (reach < 0 ? lo : hi) += reach;
        if (lo < INT64_MIN || hi > INT64_MAX) fail(ErrorCode::overflow, "gap elements overflow the int64 range");
        product *= spec.lengths[i];
        if (product > kMaxGenerated) fail(ErrorCode::cap_exceeded, "gap too large to materialize");
    }
    std::vector<Elem> elems;
    elems.reserve(static_cast<std::size_t>(product));
    std::vector<std::uint64_t> idx(spec.steps.size(), 0);
    while (true) {
        std::int64_t v = spec.base;
        for (std::size_t i = 0; i < idx.size(); ++i) v += spec.steps[i] * static_cast<std::int64_t>(idx[i]);
        elems.push_back(Elem{v});
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == spec.lengths[k]) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    FiniteSet set(GroupSpec::integers(), std::move(elems));
    const bool proper = set.size() == static_cast<std::size_t>(product);
    return {std::move(set), proper};
}

FiniteSet generate(const GeneratorSpec& spec) {
    return std::visit(
        [](const auto& s) -> FiniteSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomSpec>) {
                if (s.group.kind() == GroupKind::z) return gen_random_interval(s.lo, s.hi, s.size, s.seed);
                return gen_random(s.group, s.size, s.seed);
            } else if constexpr (std::is_same_v<T, SubspaceSpec>) {
                return gen_subspace(s.group, s.dim);
            } else if constexpr (std::is_same_v<T, RPlusHSpec>) {
                return gen_r_plus_h(s);
            } else {
                return gen_gap(s).set;
            }
        },
        spec);
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    std::vector<std::string_view> tokens;
    for (std::size_t i = 0; i < text.size();) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
        if (j > i) tokens.push_back(text.substr(i, j - i));
        i = j;
    }
    if (tokens.empty()) fail(ErrorCode::parse_error, "empty generator spec");
    std::map<std::string, std::string, std::less<>> kv;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string_view::npos) fail(ErrorCode::parse_error, "expected key=value in generator spec, got '" + std::string(tokens[i]) + "'");
        kv[std::string(tokens[i].substr(0, eq))] = std::string(tokens[i].substr(eq + 1));
    }
    auto take = [&](std::string_view key) -> std::string {
        const auto it = kv.find(key);
        if (it == kv.end()) fail(ErrorCode::parse_error, "generator spec missing " + std::string(key) + "=");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_or = [&](std::string_view key, std::string fallback) -> std::string {
        return kv.contains(key) ? take(key) : fallback;
    };
    auto done = [&] {
        if (!kv.empty()) fail(ErrorCode::parse_error, "unknown generator key '" + kv.begin()->first + "'");
    };

    const auto kind = tokens.front();
    if (kind == "random") {
        RandomSpec s;
        s.size = to_number<std::uint64_t>(take("size"), "size");
        s.seed = to_number<std::uint64_t>(take_or("seed", "0"), "seed");
        const bool integers = kv.contains("group") && kv.at("group") == "z";
        if (integers) {
            s.lo = to_number<std::int64_t>(take("lo"), "lo");
            s.hi = to_number<std::int64_t>(take("hi"), "hi");
        }
        s.group = group_from_keys(kv);
        done();
        return s;
    }
    if (kind == "subspace") {
        SubspaceSpec s;
        if (!kv.contains("group")) kv["group"] = "f2";
        s.dim = to_number<int>(take("d"), "d");
        s.group = group_from_keys(kv);
        done();
        return s;
    }
    if (kind == "r-plus-h") {
        RPlusHSpec s;
        s.n = to_number<int>(take("n"), "n");
        if (auto it = kv.find("dH"); it != kv.end()) {
            kv["dh"] = it->second;
            kv.erase(it);
        }
        s.dim_h = to_number<int>(take("dh"), "dh");
        s.r_count = to_number<std::uint64_t>(take("r"), "r");
        s.seed = to_number<std::uint64_t>(take_or("seed", "0"), "seed");
        done();
        return s;
    }
    if (kind == "gap") {
        GapSpec s;
        s.base = to_number<std::int64_t>(take_or("base", "0"), "base");
        s.steps = to_list<std::int64_t>(take("steps"), "steps");
        s.lengths = to_list<std::uint64_t>(take("lens"), "lens");
        if (kv.contains("rank") && to_number<std::size_t>(take("rank"), "rank") != s.steps.size())
            fail(ErrorCode::parse_error, "gap rank does not match the number of steps");
        done();
        return s;
    }
    fail(ErrorCode::parse_error, "unknown generator '" + std::string(kind) + "'");
}

std::string to_string(const GeneratorSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, RandomSpec>) {
                std::string out = "random " + group_keys(s.group);
                if (s.group.kind() == GroupKind::z) out += " lo=" + std::to_string(s.lo) + " hi=" + std::to_string(s.hi);
                return out + " size=" + std::to_string(s.size) + " seed=" + std::to_string(s.seed);
            } else if constexpr (std::is_same_v<T, SubspaceSpec>) {
                return "subspace " + group_keys(s.group) + " d=" + std::to_string(s.dim);
            } else if constexpr (std::is_same_v<T, RPlusHSpec>) {
                return "r-plus-h n=" + std::to_string(s.n) + " dh=" + std::to_string(s.dim_h) + " r=" + std::to_string(s.r_count) +
                       " seed=" + std::to_string(s.seed);
            } else {
                return "gap base=" + std::to_string(s.base) + " steps=" + join(s.steps) + " lens=" + join(s.lengths);
            }
        },
        spec);
}

}  // namespace freiman
