#include "freiman/group.hpp"

#include <charconv>
#include <limits>

namespace freiman {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_argument: return "invalid argument";
        case ErrorCode::parse_error: return "parse error";
        case ErrorCode::invalid_element: return "invalid element";
        case ErrorCode::group_mismatch: return "group mismatch";
        case ErrorCode::overflow: return "integer overflow";
        case ErrorCode::empty_set: return "empty set";
        case ErrorCode::cap_exceeded: return "cap exceeded";
        case ErrorCode::io_error: return "i/o error";
        case ErrorCode::internal_error: return "internal error";
    }
    return "unknown error";
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_number(std::string_view s, const char* what) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range)
        fail(ErrorCode::overflow, std::string(what) + " out of range: '" + std::string(s) + "'");
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        fail(ErrorCode::parse_error, std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

}  // namespace

bool is_prime(std::uint64_t v) noexcept {
    if (v < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (v % q == 0) return v == q;
    }
    std::uint64_t d = v - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, v);
        if (x == 1 || x == v - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, v);
            if (x == v - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

GroupSpec GroupSpec::f2(int n) {
    if (n < 1 || n > 63) fail(ErrorCode::invalid_argument, "f2 dimension must lie in [1, 63], got " + std::to_string(n));
    return GroupSpec(GroupKind::f2, n, 2, std::uint64_t{1} << n);
}

GroupSpec GroupSpec::fp(std::uint64_t p, int n) {
    if (p == 2) fail(ErrorCode::invalid_argument, "fp requires an odd prime; use f2 for p = 2");
    if (!is_prime(p)) fail(ErrorCode::invalid_argument, "fp modulus " + std::to_string(p) + " is not prime");
    if (n < 1) fail(ErrorCode::invalid_argument, "fp dimension must be at least 1");
    constexpr std::uint64_t limit = std::uint64_t{1} << 63;
    std::uint64_t order = 1;
    for (int i = 0; i < n; ++i) {
        if (order > limit / p) fail(ErrorCode::invalid_argument, "fp group order exceeds 2^63");
        order *= p;
    }
    return GroupSpec(GroupKind::fp, n, p, order);
}

GroupSpec GroupSpec::zmod(std::uint64_t m) {
    if (m < 1 || m > (std::uint64_t{1} << 63)) fail(ErrorCode::invalid_argument, "zmod modulus must lie in [1, 2^63]");
    return GroupSpec(GroupKind::zmod, 1, 0, m);
}

GroupSpec GroupSpec::integers() { return GroupSpec(GroupKind::z, 1, 0, 0); }

GroupSpec GroupSpec::parse(std::string_view text) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r') ++j;
        if (j > i) tokens.push_back(text.substr(i, j - i));
        i = j;
    }
    if (!tokens.empty() && tokens.front() == "group") tokens.erase(tokens.begin());
    if (tokens.empty()) fail(ErrorCode::parse_error, "missing group kind");

    std::optional<std::uint64_t> n, p, m;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto eq = tokens[k].find('=');
        if (eq == std::string_view::npos) fail(ErrorCode::parse_error, "expected key=value, got '" + std::string(tokens[k]) + "'");
        const auto key = tokens[k].substr(0, eq);
        const auto val = parse_number<std::uint64_t>(tokens[k].substr(eq + 1), "group parameter");
        if (key == "n") n = val;
        else if (key == "p") p = val;
        else if (key == "m") m = val;
        else fail(ErrorCode::parse_error, "unknown group parameter '" + std::string(key) + "'");
    }
    auto need = [&](const std::optional<std::uint64_t>& v, const char* name) {
        if (!v) fail(ErrorCode::parse_error, std::string("missing group parameter ") + name);
        return *v;
    };
    const auto kind = tokens.front();
    if (kind == "f2") {
        if (p || m) fail(ErrorCode::parse_error, "f2 takes only n=");
        return f2(static_cast<int>(std::min<std::uint64_t>(need(n, "n"), 1000)));
    }
    if (kind == "fp") {
        if (m) fail(ErrorCode::parse_error, "fp takes p= and n=");
        return fp(need(p, "p"), static_cast<int>(std::min<std::uint64_t>(need(n, "n"), 1000)));
    }
    if (kind == "zmod") {
        if (n || p) fail(ErrorCode::parse_error, "zmod takes only m=");
        return zmod(need(m, "m"));
    }
    if (kind == "z") {
        if (n || p || m) fail(ErrorCode::parse_error, "z takes no parameters");
        return integers();
    }
    fail(ErrorCode::parse_error, "unknown group kind '" + std::string(kind) + "'");
}

std::optional<std::uint64_t> GroupSpec::order() const noexcept {
    if (kind_ == GroupKind::z) return std::nullopt;
    return m_;
}

std::string GroupSpec::to_string() const {
    switch (kind_) {
        case GroupKind::f2: return "f2 n=" + std::to_string(n_);
        case GroupKind::fp: return "fp p=" + std::to_string(p_) + " n=" + std::to_string(n_);
        case GroupKind::zmod: return "zmod m=" + std::to_string(m_);
        case GroupKind::z: break;
    }
    return "z";
}

bool GroupSpec::valid(Elem a) const noexcept {
    if (kind_ == GroupKind::z) return true;
    return a.value >= 0 && static_cast<std::uint64_t>(a.value) < m_;
}

void GroupSpec::check(Elem a) const {
    if (!valid(a))
        fail(ErrorCode::invalid_element, "element payload " + std::to_string(a.value) + " is not valid in " + to_string());
}

Elem GroupSpec::add(Elem a, Elem b) const {
    check(a);
    check(b);
    switch (kind_) {
        case GroupKind::f2: return Elem{arith::F2::add(a.value, b.value)};
        case GroupKind::fp: return Elem{arith::Fp{p_, n_}.add(a.value, b.value)};
        case GroupKind::zmod: return Elem{arith::Zmod{m_}.add(a.value, b.value)};
        case GroupKind::z: break;
    }
    std::int64_t r = 0;
    if (__builtin_add_overflow(a.value, b.value, &r))
        fail(ErrorCode::overflow, "integer addition overflows: " + std::to_string(a.value) + " + " + std::to_string(b.value));
    return Elem{r};
}

Elem GroupSpec::neg(Elem a) const {
    check(a);
    switch (kind_) {
        case GroupKind::f2: return a;
        case GroupKind::fp: return Elem{arith::Fp{p_, n_}.neg(a.value)};
        case GroupKind::zmod: return Elem{arith::Zmod{m_}.neg(a.value)};
        case GroupKind::z: break;
    }
    if (a.value == std::numeric_limits<std::int64_t>::min()) fail(ErrorCode::overflow, "integer negation overflows");
    return Elem{-a.value};
}

std::vector<std::uint64_t> GroupSpec::coordinates(Elem a) const {
    check(a);
    if (kind_ == GroupKind::fp) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(n_));
        auto x = static_cast<std::uint64_t>(a.value);
        for (auto& d : c) {
            d = x % p_;
            x /= p_;
        }
        return c;
    }
    if (kind_ == GroupKind::f2) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) c[static_cast<std::size_t>(i)] = (static_cast<std::uint64_t>(a.value) >> i) & 1;
        return c;
    }
    return {static_cast<std::uint64_t>(a.value)};
}

Elem GroupSpec::from_coordinates(std::span<const std::uint64_t> coords) const {
    if (kind_ == GroupKind::fp || kind_ == GroupKind::f2) {
        if (coords.size() != static_cast<std::size_t>(n_))
            fail(ErrorCode::invalid_element, "expected " + std::to_string(n_) + " coordinates, got " + std::to_string(coords.size()));
        std::uint64_t v = 0, w = 1;
        for (const auto c : coords) {
            if (c >= p_) fail(ErrorCode::invalid_element, "coordinate " + std::to_string(c) + " out of range for " + to_string());
            v += c * w;
            w *= p_;
        }
        return Elem{static_cast<std::int64_t>(v)};
    }
    if (coords.size() != 1) fail(ErrorCode::invalid_element, "expected a single coordinate");
    if (kind_ == GroupKind::z) return Elem{static_cast<std::int64_t>(coords[0])};
    const Elem e{static_cast<std::int64_t>(coords[0])};
    check(e);
    return e;
}

Elem GroupSpec::parse_elem(std::string_view text) const {
    text = trim(text);
    switch (kind_) {
        case GroupKind::f2: {
            if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
                std::uint64_t v = 0;
                const auto digits = text.substr(2);
                const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, 16);
                if (ec == std::errc::result_out_of_range)
                    fail(ErrorCode::invalid_element, "hex element out of range: '" + std::string(text) + "'");
                if (ec != std::errc() || ptr != digits.data() + digits.size())
                    fail(ErrorCode::parse_error, "malformed hex element: '" + std::string(text) + "'");
                if (v >> n_) fail(ErrorCode::invalid_element, "element '" + std::string(text) + "' exceeds " + std::to_string(n_) + " bits");
                return Elem{static_cast<std::int64_t>(v)};
            }
            if (text.size() != static_cast<std::size_t>(n_))
                fail(ErrorCode::parse_error, "binary element must have exactly " + std::to_string(n_) + " digits: '" + std::string(text) + "'");
            std::uint64_t v = 0;
            for (const char c : text) {
                if (c != '0' && c != '1') fail(ErrorCode::parse_error, "malformed binary element: '" + std::string(text) + "'");
                v = (v << 1) | static_cast<std::uint64_t>(c - '0');
            }
            return Elem{static_cast<std::int64_t>(v)};
        }
        case GroupKind::fp: {
            std::vector<std::uint64_t> coords;
            std::size_t start = 0;
            while (true) {
                const auto comma = text.find(',', start);
                const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
                if (trim(piece).starts_with('-')) fail(ErrorCode::invalid_element, "negative coordinate in '" + std::string(text) + "'");
                coords.push_back(parse_number<std::uint64_t>(piece, "coordinate"));
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            if (coords.size() != static_cast<std::size_t>(n_))
                fail(ErrorCode::invalid_element, "expected " + std::to_string(n_) + " coordinates in '" + std::string(text) + "'");
            return from_coordinates(coords);
        }
        case GroupKind::zmod: {
            if (text.starts_with('-')) fail(ErrorCode::invalid_element, "residue must be nonnegative: '" + std::string(text) + "'");
            const auto v = parse_number<std::uint64_t>(text, "residue");
            if (v >= m_) fail(ErrorCode::invalid_element, "residue " + std::to_string(v) + " out of range for " + to_string());
            return Elem{static_cast<std::int64_t>(v)};
        }
        case GroupKind::z: break;
    }
    return Elem{parse_number<std::int64_t>(text, "integer")};
}

std::string GroupSpec::format(Elem a) const {
    check(a);
    switch (kind_) {
        case GroupKind::f2: {
            char buf[24];
            buf[0] = '0';
            buf[1] = 'x';
            const auto [ptr, ec] = std::to_chars(buf + 2, buf + sizeof buf, static_cast<std::uint64_t>(a.value), 16);
            return std::string(buf, ptr);
        }
        case GroupKind::fp: {
            std::string out;
            auto x = static_cast<std::uint64_t>(a.value);
            for (int i = 0; i < n_; ++i) {
                if (i) out += ',';
                out += std::to_string(x % p_);
                x /= p_;
            }
            return out;
        }
        case GroupKind::zmod:
        case GroupKind::z: break;
    }
    return std::to_string(a.value);
}

void require_same_group(const GroupSpec& a, const GroupSpec& b) {
    if (!(a == b)) fail(ErrorCode::group_mismatch, "group mismatch: " + a.to_string() + " vs " + b.to_string());
}

}  // namespace freiman
