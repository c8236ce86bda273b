#include "gridlab/kernels.hpp"

#include <cassert>

namespace gridlab::kernels {
namespace {

// Same selection rule as maxpd/minpd so scalar and vector agree bit for bit.
inline double vmax(double a, double b) { return a > b ? a : b; }
inline double vmin(double a, double b) { return a < b ? a : b; }

void scale(std::span<const double> in, double k, std::span<double> out) {
    assert(out.size() == in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * k;
}

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && out.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
}

void sub_floor0(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    assert(a.size() == b.size() && out.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = vmax(a[i] - b[i], 0.0);
}

void scale_clip1(std::span<const double> in, double k, std::span<double> out) {
    assert(out.size() == in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = vmin(in[i] * k, 1.0);
}

void net_demand(std::span<const double> demand, std::span<const double> re,
                std::span<const double> hydro, std::span<const double> nuclear,
                std::span<double> net, std::span<double> curtail) {
    const std::size_t n = demand.size();
    assert(re.size() == n && hydro.size() == n && nuclear.size() == n);
    assert(net.size() == n && curtail.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
        const double must_run = (re[i] + hydro[i]) + nuclear[i];
        net[i] = vmax(demand[i] - must_run, 0.0);
        curtail[i] = vmax(must_run - demand[i], 0.0);
    }
}

void fill_tranche(std::span<double> remaining, std::span<const double> cap,
                  std::span<double> take) {
    assert(cap.size() == remaining.size() && take.size() == remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        const double h = cap[i] - out[i];
        const double r = buffer * demand[i];
        headroom[i] = h;
        required[i] = r;
        shortfall[i] = vmax(r - h, 0.0);
    }
}

double sum(std::span<const double> in) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= in.size(); i += 4) {
        l0 += in[i];
        l1 += in[i + 1];
        l2 += in[i + 2];
        l3 += in[i + 3];
    }
    double total = (l0 + l1) + (l2 + l3);
    for (; i < in.size(); ++i) total += in[i];
    return total;
}

double max(std::span<const double> in) {
    if (in.empty()) return 0.0;
    double m = in[0];
    for (std::size_t i = 1; i < in.size(); ++i) m = vmax(m, in[i]);
    return m;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Isa::scalar, scale,      add,  sub_floor0,
                                   scale_clip1, net_demand, fill_tranche,
                                   buffer_shortfall, sum,   max};
    return table;
}

}  // namespace gridlab::kernels
