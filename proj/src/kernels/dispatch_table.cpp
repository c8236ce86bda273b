#include <atomic>
#include <cstdlib>
#include <string>

#include "gridlab/kernels.hpp"

namespace gridlab::kernels {
namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return &scalar_table();
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return cpu_has_avx2() ? &avx2_table() : nullptr;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("GRIDLAB_SIMD"); env && std::string(env) == "scalar") {
        return &scalar_table();
    }
    if (const KernelTable* t = table_for(Isa::avx2)) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool available(Isa isa) { return table_for(isa) != nullptr; }

bool select(Isa isa) {
    const KernelTable* t = table_for(isa);
    if (!t) return false;
    current().store(t, std::memory_order_release);
    return true;
}

std::string_view name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "unknown";
}

}  // namespace gridlab::kernels
