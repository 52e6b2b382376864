#include <cmath>
#include <complex>
#include <numbers>

#include "freiman/set_engine.hpp"

namespace freiman {

namespace {

using cd = std::complex<double>;

void walsh_hadamard(std::vector<std::int64_t>& a) {
    const std::size_t n = a.size();
    for (std::size_t h = 1; h < n; h <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j) {
                const auto x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
}

cd root_of_unity(std::uint64_t k, std::uint64_t n, int sign) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
    return {std::cos(angle), sign * std::sin(angle)};
}

void fft_pow2(std::vector<cd>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        std::vector<cd> w(half);
        for (std::size_t k = 0; k < half; ++k) w[k] = root_of_unity(k, len, sign);
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                const cd u = a[i + k], v = a[i + k + half] * w[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
    }
}

// Unnormalized DFT of one length, reused across lines of a multidimensional array.
class LinePlan {
public:
    LinePlan(std::size_t n, int sign) : n_(n), sign_(sign) {
        if (std::has_single_bit(n) || n == 1) {
            kind_ = Kind::pow2;
        } else if (n <= 64) {
            kind_ = Kind::naive;
            twiddle_.resize(n);
            for (std::size_t k = 0; k < n; ++k) twiddle_[k] = root_of_unity(k, n, sign);
        } else {
            kind_ = Kind::bluestein;
            m_ = std::bit_ceil(2 * n - 1);
            chirp_.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                // exp(sign * i*pi*k^2/n), with k^2 reduced mod 2n for accuracy
                const auto kk = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * k) % (2 * n));
                chirp_[k] = root_of_unity(kk, 2 * n, sign);
            }
            kernel_.assign(m_, cd{});
            kernel_[0] = std::conj(chirp_[0]);
            for (std::size_t k = 1; k < n; ++k) kernel_[k] = kernel_[m_ - k] = std::conj(chirp_[k]);
            fft_pow2(kernel_, -1);
        }
    }

    void run(std::vector<cd>& line) const {
        switch (kind_) {
            case Kind::pow2:
                if (n_ > 1) fft_pow2(line, sign_);
                return;
            case Kind::naive: {
                std::vector<cd> out(n_);
                for (std::size_t k = 0; k < n_; ++k) {
                    cd s{};
                    for (std::size_t j = 0; j < n_; ++j) s += line[j] * twiddle_[(j * k) % n_];
                    out[k] = s;
                }
                line.swap(out);
                return;
            }
            case Kind::bluestein: {
                std::vector<cd> buf(m_, cd{});
                for (std::size_t k = 0; k < n_; ++k) buf[k] = line[k] * chirp_[k];
                fft_pow2(buf, -1);
                for (std::size_t k = 0; k < m_; ++k) buf[k] *= kernel_[k];
                fft_pow2(buf, +1);
                const double scale = 1.0 / static_cast<double>(m_);
                for (std::size_t k = 0; k < n_; ++k) line[k] = buf[k] * scale * chirp_[k];
                return;
            }
        }
    }

private:
    enum class Kind { pow2, naive, bluestein };
    std::size_t n_;
    int sign_;
    Kind kind_ = Kind::pow2;
    std::size_t m_ = 0;
    std::vector<cd> twiddle_, chirp_, kernel_;
};

// Applies the DFT along every axis of a row-major array whose axis i has stride prod(dims[<i]).
void transform_axes(std::vector<cd>& data, const std::vector<std::size_t>& dims, int sign) {
    std::size_t stride = 1;
    for (const auto len : dims) {
        const LinePlan plan(len, sign);
        std::vector<cd> line(len);
        const std::size_t block = stride * len;
        for (std::size_t base = 0; base < data.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::size_t k = 0; k < len; ++k) line[k] = data[base + off + k * stride];
                plan.run(line);
                for (std::size_t k = 0; k < len; ++k) data[base + off + k * stride] = line[k];
            }
        stride = block;
    }
}

}  // namespace

std::optional<std::vector<std::uint64_t>> dense_autocorrelation(const FiniteSet& a) {
    const auto order = a.group().order();
    if (!order || *order > kDenseTransformLimit) return std::nullopt;
    const auto n = static_cast<std::size_t>(*order);
    std::vector<std::uint64_t> out(n);

    if (a.group().kind() == GroupKind::f2) {
        // Over F2^n, -A = A, so r = 1_A * 1_A and the integer transform is exact.
        std::vector<std::int64_t> f(n, 0);
        for (const auto x : a) f[static_cast<std::size_t>(x.value)] = 1;
        walsh_hadamard(f);
        for (auto& v : f) v *= v;
        walsh_hadamard(f);
        for (std::size_t i = 0; i < n; ++i) {
            if (f[i] < 0 || (f[i] & static_cast<std::int64_t>(n - 1)) != 0)
                fail(ErrorCode::internal_error, "Walsh-Hadamard autocorrelation is not integral");
            out[i] = static_cast<std::uint64_t>(f[i]) / n;
        }
        return out;
    }

    std::vector<std::size_t> dims;
    if (a.group().kind() == GroupKind::fp)
        dims.assign(static_cast<std::size_t>(a.group().dimension()), static_cast<std::size_t>(a.group().prime()));
    else
        dims.push_back(n);

    std::vector<cd> f(n, cd{});
    for (const auto x : a) f[static_cast<std::size_t>(x.value)] = 1.0;
    transform_axes(f, dims, -1);
    for (auto& v : f) v = std::norm(v);
    transform_axes(f, dims, +1);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = f[i].real() * scale;
        const double rounded = std::nearbyint(v);
        if (std::fabs(v - rounded) >= 0.25 || rounded < 0)
            fail(ErrorCode::internal_error, "transform autocorrelation residual too large at index " + std::to_string(i));
        out[i] = static_cast<std::uint64_t>(rounded);
    }
    return out;
}

}  // namespace freiman
