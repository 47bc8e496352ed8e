#include "tsclust/errors.hpp"
#include "tsclust/kshape.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace tsclust {

namespace {

struct FftwDeleter {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

RealBuffer make_real(std::size_t n) {
    return RealBuffer(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuffer make_complex(std::size_t n) {
    return ComplexBuffer(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

/// FFTW plans keyed by transform length. Planning is not thread-safe in FFTW
/// and is serialized here; executing a plan on fresh fftw_malloc'd buffers is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.inverse);
        }
    }

    PlanPair get(std::size_t n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) return it->second;
        auto real = make_real(n);
        auto spectrum = make_complex(n / 2 + 1);
        const int len = static_cast<int>(n);
        PlanPair p;
        p.forward = fftw_plan_dft_r2c_1d(len, real.get(), spectrum.get(), FFTW_ESTIMATE);
        p.inverse = fftw_plan_dft_c2r_1d(len, spectrum.get(), real.get(), FFTW_ESTIMATE);
        plans_.emplace(n, p);
        return p;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
    if (x.empty()) throw ParameterError("cross-correlation of empty series");
    if (x.size() != y.size()) {
        throw ParameterError("cross-correlation needs equal lengths (" + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()) + ")");
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

CrossCorrelation cross_correlation_naive(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    const std::size_t m = x.size();
    CrossCorrelation cc;
    cc.values.assign(2 * m - 1, 0.0);
    for (std::size_t s = 0; s < m; ++s) {
        double pos = 0.0;
        double neg = 0.0;
        for (std::size_t l = 0; l + s < m; ++l) {
            pos += x[l + s] * y[l];
            neg += y[l + s] * x[l];
        }
        cc.values[m - 1 + s] = pos;
        if (s > 0) cc.values[m - 1 - s] = neg;
    }
    return cc;
}

CrossCorrelation cross_correlation_fft(std::span<const double> x, std::span<const double> y) {
    check_lengths(x, y);
    const std::size_t m = x.size();
    const std::size_t n = next_pow2(2 * m - 1);
    const std::size_t bins = n / 2 + 1;
    const PlanPair plans = plan_cache().get(n);

    auto buf = make_real(n);
    auto fx = make_complex(bins);
    auto fy = make_complex(bins);

    std::fill(buf.get(), buf.get() + n, 0.0);
    std::copy(x.begin(), x.end(), buf.get());
    fftw_execute_dft_r2c(plans.forward, buf.get(), fx.get());
    std::fill(buf.get(), buf.get() + n, 0.0);
    std::copy(y.begin(), y.end(), buf.get());
    fftw_execute_dft_r2c(plans.forward, buf.get(), fy.get());

    for (std::size_t k = 0; k < bins; ++k) {
        const double ar = fx[k][0], ai = fx[k][1];
        const double br = fy[k][0], bi = -fy[k][1];
        fx[k][0] = ar * br - ai * bi;
        fx[k][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(plans.inverse, fx.get(), buf.get());

    const double scale = 1.0 / static_cast<double>(n);
    CrossCorrelation cc;
    cc.values.resize(2 * m - 1);
    for (std::size_t w = 0; w < cc.values.size(); ++w) {
        const auto shift = static_cast<std::ptrdiff_t>(w) - static_cast<std::ptrdiff_t>(m - 1);
        const std::size_t idx = shift < 0 ? n - static_cast<std::size_t>(-shift)
                                          : static_cast<std::size_t>(shift);
        cc.values[w] = buf[idx] * scale;
    }
    return cc;
}

}  // namespace tsclust
