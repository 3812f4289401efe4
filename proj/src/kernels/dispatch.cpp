#include "tables.hpp"

#include <cstdlib>

namespace agriseg::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(AGRISEG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

bool force_scalar() {
    const char* v = std::getenv("AGRISEG_FORCE_SCALAR");
    return v != nullptr && *v != '\0';
}

}  // namespace

const KernelTable& scalar() { return detail::scalar_table(); }

const KernelTable* avx2() {
#if defined(AGRISEG_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* table = [] {
        const KernelTable* simd = avx2();
        return (simd && !force_scalar()) ? simd : &detail::scalar_table();
    }();
    return *table;
}

std::vector<const KernelTable*> available() {
    std::vector<const KernelTable*> out{&detail::scalar_table()};
    if (const KernelTable* simd = avx2()) out.push_back(simd);
    return out;
}

}  // namespace agriseg::kernels
