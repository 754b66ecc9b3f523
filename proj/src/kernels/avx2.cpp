// AVX2 variants of the kernels in scalar.cpp. This translation unit is built
// with -mavx2 -mfma and must only be entered after a runtime CPU check.

#include "fwsn/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numbers>

namespace fwsn::kernels::avx2 {
namespace {

constexpr double kPi = std::numbers::pi;

inline __m256d splat(double v) { return _mm256_set1_pd(v); }

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(splat(-0.0), x); }

inline __m256d select(__m256d mask, __m256d if_true, __m256d if_false) {
    return _mm256_blendv_pd(if_false, if_true, mask);
}

// Cephes double-precision arctangent, all lanes in parallel.
__m256d atan_pd(__m256d x) {
    const __m256d sign = _mm256_and_pd(x, splat(-0.0));
    x = vabs(x);

    const __m256d big = _mm256_cmp_pd(x, splat(2.41421356237309504880), _CMP_GT_OQ);
    const __m256d mid = _mm256_andnot_pd(big, _mm256_cmp_pd(x, splat(0.66), _CMP_GT_OQ));

    const __m256d x_big = _mm256_div_pd(splat(-1.0), x);
    const __m256d x_mid = _mm256_div_pd(_mm256_sub_pd(x, splat(1.0)), _mm256_add_pd(x, splat(1.0)));
    __m256d xr = select(big, x_big, select(mid, x_mid, x));
    const __m256d base = select(big, splat(kPi / 2), select(mid, splat(kPi / 4), splat(0.0)));
    const __m256d extra = select(big, splat(6.123233995736765886130e-17),
                                 select(mid, splat(0.5 * 6.123233995736765886130e-17), splat(0.0)));

    const __m256d z = _mm256_mul_pd(xr, xr);
    __m256d num = splat(-8.750608600031904122785e-1);
    num = _mm256_fmadd_pd(num, z, splat(-1.615753718733365076637e1));
    num = _mm256_fmadd_pd(num, z, splat(-7.500855792314704667340e1));
    num = _mm256_fmadd_pd(num, z, splat(-1.228866684490136173410e2));
    num = _mm256_fmadd_pd(num, z, splat(-6.485021904942025371773e1));
    __m256d den = _mm256_add_pd(z, splat(2.485846490142306297962e1));
    den = _mm256_fmadd_pd(den, z, splat(1.650270098316988542046e2));
    den = _mm256_fmadd_pd(den, z, splat(4.328810604912902668951e2));
    den = _mm256_fmadd_pd(den, z, splat(4.853903996359136964868e2));
    den = _mm256_fmadd_pd(den, z, splat(1.945506571482613964425e2));

    const __m256d poly = _mm256_div_pd(_mm256_mul_pd(z, num), den);
    __m256d y = _mm256_fmadd_pd(xr, poly, xr);
    y = _mm256_add_pd(_mm256_add_pd(base, y), extra);
    return _mm256_or_pd(y, sign);
}

struct Radius {
    __m256d r;
    __m256d r2;
    __m256d full;
};

inline __m256d half_chord_pd(__m256d u, const Radius& rad) {
    const __m256d d = _mm256_mul_pd(_mm256_sub_pd(rad.r, u), _mm256_add_pd(rad.r, u));
    return _mm256_sqrt_pd(_mm256_max_pd(d, splat(0.0)));
}

// atan2(u, w) for w >= 0 and (u, w) != (0, 0); w = 0 divides to +-inf.
inline __m256d angle_pd(__m256d u, __m256d w) { return atan_pd(_mm256_div_pd(u, w)); }

// Area of B(0, r) & {u >= h}.
__m256d segment_pd(__m256d h, const Radius& rad) {
    const __m256d hc = _mm256_min_pd(_mm256_max_pd(h, _mm256_sub_pd(splat(0.0), rad.r)), rad.r);
    const __m256d w = half_chord_pd(hc, rad);
    const __m256d angle = _mm256_sub_pd(splat(kPi / 2), angle_pd(hc, w));
    return _mm256_sub_pd(_mm256_mul_pd(rad.r2, angle), _mm256_mul_pd(hc, w));
}

inline __m256d chord_integral_pd(__m256d u, __m256d w, const Radius& rad) {
    return _mm256_mul_pd(splat(0.5), _mm256_add_pd(_mm256_mul_pd(u, w), _mm256_mul_pd(rad.r2, angle_pd(u, w))));
}

// Area of B(0, r) & {u >= a, v >= b}, a, b >= 0; exactly 0 via clamping when
// the corner (a, b) lies outside the disk.
__m256d quadrant_nonneg_pd(__m256d a, __m256d b, const Radius& rad) {
    const __m256d bc = _mm256_min_pd(b, rad.r);
    const __m256d x1 = half_chord_pd(bc, rad);
    const __m256d ac = _mm256_min_pd(a, x1);
    const __m256d area = _mm256_sub_pd(
        _mm256_sub_pd(chord_integral_pd(x1, bc, rad), chord_integral_pd(ac, half_chord_pd(ac, rad), rad)),
        _mm256_mul_pd(bc, _mm256_sub_pd(x1, ac)));
    return _mm256_max_pd(area, splat(0.0));
}

// General-sign quadrant area from the nonnegative case by reflection.
__m256d quadrant_pd(__m256d a, __m256d b, __m256d seg_a, __m256d seg_b, const Radius& rad) {
    const __m256d q = quadrant_nonneg_pd(vabs(a), vabs(b), rad);
    const __m256d zero = splat(0.0);
    const __m256d a_neg = _mm256_cmp_pd(a, zero, _CMP_LT_OQ);
    const __m256d b_neg = _mm256_cmp_pd(b, zero, _CMP_LT_OQ);
    if (_mm256_movemask_pd(_mm256_or_pd(a_neg, b_neg)) == 0) return q;

    const __m256d only_a = _mm256_andnot_pd(b_neg, a_neg);
    const __m256d only_b = _mm256_andnot_pd(a_neg, b_neg);
    const __m256d both = _mm256_and_pd(a_neg, b_neg);
    const __m256d neg_q = _mm256_sub_pd(zero, q);
    const __m256d both_val = _mm256_add_pd(_mm256_sub_pd(_mm256_add_pd(seg_b, seg_a), rad.full), q);
    __m256d out = q;
    out = select(only_a, _mm256_add_pd(seg_b, neg_q), out);
    out = select(only_b, _mm256_add_pd(seg_a, neg_q), out);
    out = select(both, both_val, out);
    return out;
}

__m256d clipped_area_pd(__m256d cx, __m256d cy, const Radius& rad) {
    const __m256d half = splat(0.5);
    const __m256d right = _mm256_sub_pd(half, cx);
    const __m256d left = _mm256_add_pd(half, cx);
    const __m256d top = _mm256_sub_pd(half, cy);
    const __m256d bottom = _mm256_add_pd(half, cy);

    const __m256d s_right = segment_pd(right, rad);
    const __m256d s_left = segment_pd(left, rad);
    const __m256d s_top = segment_pd(top, rad);
    const __m256d s_bottom = segment_pd(bottom, rad);

    __m256d area = _mm256_sub_pd(rad.full, _mm256_add_pd(_mm256_add_pd(s_right, s_left),
                                                         _mm256_add_pd(s_top, s_bottom)));
    area = _mm256_add_pd(area, quadrant_pd(right, top, s_right, s_top, rad));
    area = _mm256_add_pd(area, quadrant_pd(right, bottom, s_right, s_bottom, rad));
    area = _mm256_add_pd(area, quadrant_pd(left, top, s_left, s_top, rad));
    area = _mm256_add_pd(area, quadrant_pd(left, bottom, s_left, s_bottom, rad));
    const __m256d cap = _mm256_min_pd(rad.full, splat(1.0));
    area = _mm256_min_pd(_mm256_max_pd(area, splat(0.0)), cap);
    const __m256d fx = _mm256_add_pd(half, vabs(cx));
    const __m256d fy = _mm256_add_pd(half, vabs(cy));
    const __m256d whole = _mm256_cmp_pd(_mm256_add_pd(_mm256_mul_pd(fx, fx), _mm256_mul_pd(fy, fy)), rad.r2, _CMP_LE_OQ);
    const __m256d gx = _mm256_max_pd(_mm256_sub_pd(vabs(cx), half), splat(0.0));
    const __m256d gy = _mm256_max_pd(_mm256_sub_pd(vabs(cy), half), splat(0.0));
    const __m256d none = _mm256_cmp_pd(_mm256_add_pd(_mm256_mul_pd(gx, gx), _mm256_mul_pd(gy, gy)), rad.r2, _CMP_GE_OQ);
    return select(whole, splat(1.0), select(none, splat(0.0), area));
}

inline __m256d dist2_pd(const double* xs, const double* ys, __m256d qx, __m256d qy) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys), qy);
    return _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
}

}  // namespace

void clipped_disk_area(std::span<const double> xs, std::span<const double> ys, double r,
                       std::span<double> out) {
    assert(xs.size() == ys.size() && out.size() >= xs.size());
    const std::size_t n = xs.size();
    if (!(r > 0.0)) {
        std::fill_n(out.begin(), n, 0.0);
        return;
    }
    const Radius rad{splat(r), splat(r * r), splat(kPi * r * r)};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out.data() + i,
                         clipped_area_pd(_mm256_loadu_pd(xs.data() + i), _mm256_loadu_pd(ys.data() + i), rad));
    }
    if (i < n) {
        alignas(32) double tx[4] = {0, 0, 0, 0};
        alignas(32) double ty[4] = {0, 0, 0, 0};
        alignas(32) double to[4];
        std::copy(xs.begin() + i, xs.end(), tx);
        std::copy(ys.begin() + i, ys.end(), ty);
        _mm256_store_pd(to, clipped_area_pd(_mm256_load_pd(tx), _mm256_load_pd(ty), rad));
        std::copy(to, to + (n - i), out.begin() + i);
    }
}

std::size_t count_within(std::span<const double> xs, std::span<const double> ys, double qx,
                         double qy, double r2) {
    const std::size_t n = xs.size();
    const __m256d vqx = splat(qx), vqy = splat(qy), vr2 = splat(r2);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d in = _mm256_cmp_pd(dist2_pd(xs.data() + i, ys.data() + i, vqx, vqy), vr2, _CMP_LE_OQ);
        count += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(in))));
    }
    return count + scalar::count_within(xs.subspan(i), ys.subspan(i), qx, qy, r2);
}

std::uint32_t classify_membership(std::span<const double> xs, std::span<const double> ys,
                                  double qx, double qy, double inner2, double outer2,
                                  std::uint32_t stop_at, std::vector<std::uint32_t>& boundary) {
    const std::size_t n = xs.size();
    const __m256d vqx = splat(qx), vqy = splat(qy), vin = splat(inner2), vout = splat(outer2);
    std::uint32_t strict = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d2 = dist2_pd(xs.data() + i, ys.data() + i, vqx, vqy);
        const unsigned s = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d2, vin, _CMP_LT_OQ)));
        unsigned b = static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d2, vout, _CMP_LE_OQ))) & ~s;
        strict += static_cast<std::uint32_t>(std::popcount(s));
        if (strict >= stop_at) return stop_at;
        while (b != 0) {
            boundary.push_back(static_cast<std::uint32_t>(i) + static_cast<std::uint32_t>(std::countr_zero(b)));
            b &= b - 1;
        }
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - qx;
        const double dy = ys[i] - qy;
        const double d2 = dx * dx + dy * dy;
        if (d2 < inner2) {
            if (++strict >= stop_at) return stop_at;
        } else if (d2 <= outer2) {
            boundary.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return strict;
}

void collect_within(std::span<const double> xs, std::span<const double> ys, double qx,
                    double qy, double r2, std::uint32_t index_offset,
                    std::vector<std::uint32_t>& out) {
    const std::size_t n = xs.size();
    const __m256d vqx = splat(qx), vqy = splat(qy), vr2 = splat(r2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        unsigned m = static_cast<unsigned>(
            _mm256_movemask_pd(_mm256_cmp_pd(dist2_pd(xs.data() + i, ys.data() + i, vqx, vqy), vr2, _CMP_LE_OQ)));
        while (m != 0) {
            out.push_back(index_offset + static_cast<std::uint32_t>(i) + static_cast<std::uint32_t>(std::countr_zero(m)));
            m &= m - 1;
        }
    }
    scalar::collect_within(xs.subspan(i), ys.subspan(i), qx, qy, r2,
                           index_offset + static_cast<std::uint32_t>(i), out);
}

}  // namespace fwsn::kernels::avx2
