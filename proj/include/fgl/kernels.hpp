#pragma once
// Vector kernels for arithmetic mod m on uint32_t words, m < 2^31.
//
// A scalar reference implementation and an AVX2 variant share one table of
// function pointers; the table is picked once at startup from the CPU
// capabilities (overridable through the FGL_KERNELS environment variable).
// Both variants produce bit-identical results and are equivalence-tested.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fgl::kern {

inline constexpr uint32_t max_modulus_exclusive = 0x80000000u;  // m < 2^31

struct ModKernels {
    const char* name;
    // dst[i] = (a[i] + b[i]) mod m          (dst may alias a or b)
    void (*add)(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m);
    // dst[i] = (a[i] - b[i]) mod m          (dst may alias a or b)
    void (*sub)(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m);
    // acc[i] = (acc[i] + w*src[i]) mod m, 0 <= w < m   (acc must not alias src)
    void (*axpy)(uint32_t* acc, const uint32_t* src, size_t n, uint32_t w, uint32_t m);
    // dst[i] = (w*src[i]) mod m, 0 <= w < m            (dst may alias src)
    void (*scale)(uint32_t* dst, const uint32_t* src, size_t n, uint32_t w, uint32_t m);
};

const ModKernels& scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
const ModKernels* avx2_kernels();  // nullptr when the CPU lacks AVX2
#endif

// Runtime-selected table.
const ModKernels& active();

// Every table usable on this machine, scalar first (for equivalence tests).
std::vector<const ModKernels*> available();

// Scalar one-off helpers used outside the bulk loops.
inline uint32_t mul_mod(uint32_t a, uint32_t b, uint32_t m) {
    return static_cast<uint32_t>(uint64_t(a) * b % m);
}
inline uint32_t add_mod(uint32_t a, uint32_t b, uint32_t m) {
    uint32_t s = a + b;  // < 2m < 2^32
    return s >= m ? s - m : s;
}
inline uint32_t sub_mod(uint32_t a, uint32_t b, uint32_t m) {
    return a >= b ? a - b : a + m - b;
}

}  // namespace fgl::kern
