#pragma once

#include "agriseg/kernels.hpp"

namespace agriseg::kernels::detail {

const KernelTable& scalar_table();
#if defined(AGRISEG_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace agriseg::kernels::detail
