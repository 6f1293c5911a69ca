#include "fgl/kernels.hpp"

namespace fgl::kern {
namespace {

void add_s(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i) dst[i] = add_mod(a[i], b[i], m);
}

void sub_s(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    for (size_t i = 0; i < n; ++i) dst[i] = sub_mod(a[i], b[i], m);
}

void axpy_s(uint32_t* acc, const uint32_t* src, size_t n, uint32_t w, uint32_t m) {
    if (w == 0) return;
    for (size_t i = 0; i < n; ++i)
        acc[i] = add_mod(acc[i], mul_mod(w, src[i], m), m);
}

void scale_s(uint32_t* dst, const uint32_t* src, size_t n, uint32_t w, uint32_t m) {
    for (size_t i = 0; i < n; ++i) dst[i] = mul_mod(w, src[i], m);
}

const ModKernels table = {"scalar", add_s, sub_s, axpy_s, scale_s};

}  // namespace

const ModKernels& scalar_kernels() { return table; }

}  // namespace fgl::kern
