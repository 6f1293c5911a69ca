#include <cstdlib>
#include <cstring>

#include "fgl/kernels.hpp"

namespace fgl::kern {
namespace {

const ModKernels* select() {
    const char* want = std::getenv("FGL_KERNELS");
#if defined(__x86_64__) || defined(_M_X64)
    const ModKernels* vec = avx2_kernels();
#else
    const ModKernels* vec = nullptr;
#endif
    if (want) {
        if (std::strcmp(want, "scalar") == 0) return &scalar_kernels();
        if (vec && std::strcmp(want, vec->name) == 0) return vec;
    }
    return vec ? vec : &scalar_kernels();
}

}  // namespace

const ModKernels& active() {
    static const ModKernels* chosen = select();
    return *chosen;
}

std::vector<const ModKernels*> available() {
    std::vector<const ModKernels*> out{&scalar_kernels()};
#if defined(__x86_64__) || defined(_M_X64)
    if (const ModKernels* vec = avx2_kernels()) out.push_back(vec);
#endif
    return out;
}

}  // namespace fgl::kern
