// Compiled with -mavx2 (no FMA) so vector results match the scalar path.
#include "gridlab/kernels.hpp"

#include <immintrin.h>

#include <cassert>

namespace gridlab::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double vmax(double a, double b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

void scale(std::span<const double> in, double k, std::span<double> out) {
    assert(out.size() == in.size());
    const __m256d vk = _mm256_set1_pd(k);
    std::size_t i = 0;
    for (; i + kLanes <= in.size(); i += kLanes) {
        _mm256_storeu_pd(&out[i], _mm256_mul_pd(_mm256_loadu_pd(&in[i]), vk));
    }
    for (; i < in.size(); ++i) out[i] = in[i] * k;
}

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && out.size() == a.size());
    std::size_t i = 0;
    for (; i + kLanes <= a.size(); i += kLanes) {
        _mm256_storeu_pd(&out[i], _mm256_add_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i])));
    }
    for (; i < a.size(); ++i) out[i] = a[i] + b[i];
}

void sub_floor0(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && out.size() == a.size());
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= a.size(); i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
        _mm256_storeu_pd(&out[i], _mm256_max_pd(d, zero));
    }
    for (; i < a.size(); ++i) out[i] = vmax(a[i] - b[i], 0.0);
}

void scale_clip1(std::span<const double> in, double k, std::span<double> out) {
    assert(out.size() == in.size());
    const __m256d vk = _mm256_set1_pd(k);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + kLanes <= in.size(); i += kLanes) {
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(&in[i]), vk);
        _mm256_storeu_pd(&out[i], _mm256_min_pd(v, one));
    }
    for (; i < in.size(); ++i) out[i] = vmin(in[i] * k, 1.0);
}

void net_demand(std::span<const double> demand, std::span<const double> re,
                std::span<const double> hydro, std::span<const double> nuclear,
                std::span<double> net, std::span<double> curtail) {
    const std::size_t n = demand.size();
    assert(re.size() == n && hydro.size() == n && nuclear.size() == n);
    assert(net.size() == n && curtail.size() == n);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d m = _mm256_add_pd(
            _mm256_add_pd(_mm256_loadu_pd(&re[i]), _mm256_loadu_pd(&hydro[i])),
            _mm256_loadu_pd(&nuclear[i]));
        const __m256d d = _mm256_loadu_pd(&demand[i]);
        _mm256_storeu_pd(&net[i], _mm256_max_pd(_mm256_sub_pd(d, m), zero));
        _mm256_storeu_pd(&curtail[i], _mm256_max_pd(_mm256_sub_pd(m, d), zero));
    }
    for (; i < n; ++i) {
        const double must_run = (re[i] + hydro[i]) + nuclear[i];
        net[i] = vmax(demand[i] - must_run, 0.0);
        curtail[i] = vmax(must_run - demand[i], 0.0);
    }
}

void fill_tranche(std::span<double> remaining, std::span<const double> cap,
                  std::span<double> take) {
    assert(cap.size() == remaining.size() && take.size() == remaining.size());
    std::size_t i = 0;
    for (; i + kLanes <= remaining.size(); i += kLanes) {
        const __m256d r = _mm256_loadu_pd(&remaining[i]);
        const __m256d t = _mm256_min_pd(r, _mm256_loadu_pd(&cap[i]));
        _mm256_storeu_pd(&take[i], t);
        _mm256_storeu_pd(&remaining[i], _mm256_sub_pd(r, t));
    }
    for (; i < remaining.size(); ++i) {
        const double t = vmin(remaining[i], cap[i]);
        take[i] = t;
        remaining[i] = remaining[i] - t;
    }
}

void buffer_shortfall(std::span<const double> cap, std::span<const double> out,
                      std::span<const double> demand, double buffer,
                      std::span<double> headroom, std::span<double> required,
                      std::span<double> shortfall) {
    const std::size_t n = cap.size();
    assert(out.size() == n && demand.size() == n);
    assert(headroom.size() == n && required.size() == n && shortfall.size() == n);
    const __m256d vb = _mm256_set1_pd(buffer);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= n; i += kLanes) {
        const __m256d h = _mm256_sub_pd(_mm256_loadu_pd(&cap[i]), _mm256_loadu_pd(&out[i]));
        const __m256d r = _mm256_mul_pd(vb, _mm256_loadu_pd(&demand[i]));
        _mm256_storeu_pd(&headroom[i], h);
        _mm256_storeu_pd(&required[i], r);
        _mm256_storeu_pd(&shortfall[i], _mm256_max_pd(_mm256_sub_pd(r, h), zero));
    }
    for (; i < n; ++i) {
        const double h = cap[i] - out[i];
        const double r = buffer * demand[i];
        headroom[i] = h;
        required[i] = r;
        shortfall[i] = vmax(r - h, 0.0);
    }
}

double sum(std::span<const double> in) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + kLanes <= in.size(); i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(&in[i]));
    alignas(32) double l[kLanes];
    _mm256_store_pd(l, acc);
    double total = (l[0] + l[1]) + (l[2] + l[3]);
    for (; i < in.size(); ++i) total += in[i];
    return total;
}

double max(std::span<const double> in) {
    if (in.empty()) return 0.0;
    if (in.size() < kLanes) {
        double m = in[0];
        for (std::size_t i = 1; i < in.size(); ++i) m = vmax(m, in[i]);
        return m;
    }
    __m256d acc = _mm256_loadu_pd(&in[0]);
    std::size_t i = kLanes;
    for (; i + kLanes <= in.size(); i += kLanes) acc = _mm256_max_pd(acc, _mm256_loadu_pd(&in[i]));
    alignas(32) double l[kLanes];
    _mm256_store_pd(l, acc);
    double m = vmax(vmax(l[0], l[1]), vmax(l[2], l[3]));
    for (; i < in.size(); ++i) m = vmax(m, in[i]);
    return m;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{Isa::avx2,  scale,      add,  sub_floor0,
                                   scale_clip1, net_demand, fill_tranche,
                                   buffer_shortfall, sum,   max};
    return table;
}

}  // namespace gridlab::kernels
