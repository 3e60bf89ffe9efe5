#include <cstdlib>
#include <cstring>

#include "conescan/kernels.hpp"

namespace conescan::kernels {

// Picks the widest implementation the CPU supports.  CONESCAN_KERNELS=scalar
// forces the reference path (useful for A/B timing and debugging).
const batch_ops& active() {
    static const batch_ops& chosen = []() -> const batch_ops& {
        const char* force = std::getenv("CONESCAN_KERNELS");
        if (force && std::strcmp(force, "scalar") == 0)
            return scalar();
        if (const batch_ops* v = avx2())
            return *v;
        return scalar();
    }();
    return chosen;
}

}  // namespace conescan::kernels
