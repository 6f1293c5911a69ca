// AVX2 variant of the mod-m word kernels. Compiled with -mavx2 for x86-64
// only; the dispatcher checks CPU support before handing this table out.
//
// Multiplications use Shoup's precomputed-quotient trick: with
// ws = floor(w * 2^32 / m) and w < m < 2^31,
//   q = mulhi32(ws, x),  r = lo32(w*x) - lo32(q*m)
// satisfies r in [0, 2m) and r = w*x mod m after one conditional subtract.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "fgl/kernels.hpp"

namespace fgl::kern {
namespace {

inline __m256i mulhi_epu32(__m256i a, __m256i b) {
    __m256i prod_even = _mm256_mul_epu32(a, b);
    __m256i prod_odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
    // high halves of even products sit in even 32-bit lanes after the shift;
    // high halves of odd products already sit in odd 32-bit lanes.
    return _mm256_blend_epi32(_mm256_srli_epi64(prod_even, 32), prod_odd, 0xAA);
}

// r in [0, 2m) -> r mod m. Relies on unsigned wrap: if r < m then r - m wraps huge.
inline __m256i reduce_once(__m256i r, __m256i m) {
    return _mm256_min_epu32(r, _mm256_sub_epi32(r, m));
}

inline __m256i mulmod_shoup(__m256i x, __m256i wv, __m256i wsv, __m256i mv) {
    __m256i q = mulhi_epu32(wsv, x);
    __m256i r = _mm256_sub_epi32(_mm256_mullo_epi32(wv, x), _mm256_mullo_epi32(q, mv));
    return reduce_once(r, mv);
}

void add_v(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i s = reduce_once(_mm256_add_epi32(av, bv), mv);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), s);
    }
    for (; i < n; ++i) dst[i] = add_mod(a[i], b[i], m);
}

void sub_v(uint32_t* dst, const uint32_t* a, const uint32_t* b, size_t n, uint32_t m) {
    __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i av = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i d = _mm256_sub_epi32(av, bv);
        // if a < b the difference wrapped; d + m is then the right value
        d = _mm256_min_epu32(d, _mm256_add_epi32(d, mv));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), d);
    }
    for (; i < n; ++i) dst[i] = sub_mod(a[i], b[i], m);
}

void axpy_v(uint32_t* acc, const uint32_t* src, size_t n, uint32_t w, uint32_t m) {
    if (w == 0) return;
    uint32_t ws = static_cast<uint32_t>((uint64_t(w) << 32) / m);
    __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    __m256i wv = _mm256_set1_epi32(static_cast<int>(w));
    __m256i wsv = _mm256_set1_epi32(static_cast<int>(ws));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i r = mulmod_shoup(x, wv, wsv, mv);
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i s = reduce_once(_mm256_add_epi32(a, r), mv);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), s);
    }
    for (; i < n; ++i) acc[i] = add_mod(acc[i], mul_mod(w, src[i], m), m);
}

void scale_v(uint32_t* dst, const uint32_t* src, size_t n, uint32_t w, uint32_t m) {
    uint32_t ws = static_cast<uint32_t>((uint64_t(w) << 32) / m);
    __m256i mv = _mm256_set1_epi32(static_cast<int>(m));
    __m256i wv = _mm256_set1_epi32(static_cast<int>(w));
    __m256i wsv = _mm256_set1_epi32(static_cast<int>(ws));
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), mulmod_shoup(x, wv, wsv, mv));
    }
    for (; i < n; ++i) dst[i] = mul_mod(w, src[i], m);
}

const ModKernels table = {"avx2", add_v, sub_v, axpy_v, scale_v};

}  // namespace

const ModKernels* avx2_kernels() {
    return __builtin_cpu_supports("avx2") ? &table : nullptr;
}

}  // namespace fgl::kern

#endif  // x86-64
