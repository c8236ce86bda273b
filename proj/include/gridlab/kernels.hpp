#pragma once

// Data-parallel inner loops over half-hourly series.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime. Elementwise kernels are bit-identical across
// variants. Reductions accumulate in four interleaved lanes that are folded
// as ((l0 + l1) + (l2 + l3)) before the tail, so sums are bit-identical too.

#include <cstddef>
#include <span>
#include <string_view>

namespace gridlab::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    /// out[i] = in[i] * k
    void (*scale)(std::span<const double> in, double k, std::span<double> out);
    /// out[i] = a[i] + b[i]
    void (*add)(std::span<const double> a, std::span<const double> b, std::span<double> out);
    /// out[i] = max(0, a[i] - b[i])
    void (*sub_floor0)(std::span<const double> a, std::span<const double> b,
                       std::span<double> out);
    /// out[i] = min(1, in[i] * k)
    void (*scale_clip1)(std::span<const double> in, double k, std::span<double> out);
    /// m = (re + hydro) + nuclear; net = max(0, d - m); curtail = max(0, m - d)
    void (*net_demand)(std::span<const double> demand, std::span<const double> re,
                       std::span<const double> hydro, std::span<const double> nuclear,
                       std::span<double> net, std::span<double> curtail);
    /// take = min(remaining, cap); remaining -= take
    void (*fill_tranche)(std::span<double> remaining, std::span<const double> cap,
                         std::span<double> take);
    /// headroom = cap - out; required = buffer * demand; shortfall = max(0, required - headroom)
    void (*buffer_shortfall)(std::span<const double> cap, std::span<const double> out,
                             std::span<const double> demand, double buffer,
                             std::span<double> headroom, std::span<double> required,
                             std::span<double> shortfall);
    double (*sum)(std::span<const double> in);
    /// Largest element; 0 for an empty span. Inputs must be NaN-free.
    double (*max)(std::span<const double> in);
};

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif

/// Table in use by the process. Picks AVX2 when the CPU reports it unless
/// GRIDLAB_SIMD=scalar is set in the environment.
const KernelTable& active();

/// Overrides the process-wide selection. Returns false if `isa` is unavailable.
bool select(Isa isa);
bool available(Isa isa);
std::string_view name(Isa isa);

}  // namespace gridlab::kernels
