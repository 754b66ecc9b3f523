#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the dispatching entry points pick one at first
// use from CPU support and the FWSN_ISA environment variable
// (scalar | avx2 | auto).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fwsn::kernels {

enum class Isa : std::uint8_t { scalar, avx2 };

inline constexpr const char* kIsaEnv = "FWSN_ISA";

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
// Throws PreconditionError when the CPU lacks the requested ISA.
void set_isa(Isa isa);

// out[i] = area(B((xs[i], ys[i]), r) & S0).
void clipped_disk_area(std::span<const double> xs, std::span<const double> ys, double r,
                       std::span<double> out);

// Number of points with squared distance to q at most r2.
std::size_t count_within(std::span<const double> xs, std::span<const double> ys, double qx,
                         double qy, double r2);

// Counts points with d^2 < inner2 ("strict") and appends the indices with
// inner2 <= d^2 <= outer2 to `boundary`. Once the strict count reaches
// stop_at the scan may stop: the return value is then stop_at and the
// boundary list is unspecified. Otherwise the exact strict count is returned
// and `boundary` holds every boundary index in ascending order.
std::uint32_t classify_membership(std::span<const double> xs, std::span<const double> ys,
                                  double qx, double qy, double inner2, double outer2,
                                  std::uint32_t stop_at, std::vector<std::uint32_t>& boundary);

// Appends index_offset + i for every point with d^2 <= r2, ascending.
void collect_within(std::span<const double> xs, std::span<const double> ys, double qx,
                    double qy, double r2, std::uint32_t index_offset,
                    std::vector<std::uint32_t>& out);

#define FWSN_KERNEL_DECLS                                                                  \
    void clipped_disk_area(std::span<const double> xs, std::span<const double> ys,         \
                           double r, std::span<double> out);                               \
    std::size_t count_within(std::span<const double> xs, std::span<const double> ys,       \
                             double qx, double qy, double r2);                             \
    std::uint32_t classify_membership(std::span<const double> xs,                          \
                                      std::span<const double> ys, double qx, double qy,    \
                                      double inner2, double outer2, std::uint32_t stop_at, \
                                      std::vector<std::uint32_t>& boundary);               \
    void collect_within(std::span<const double> xs, std::span<const double> ys,           \
                        double qx, double qy, double r2, std::uint32_t index_offset,       \
                        std::vector<std::uint32_t>& out);

namespace scalar {
FWSN_KERNEL_DECLS
}  // namespace scalar

#if defined(FWSN_HAVE_AVX2)
namespace avx2 {
FWSN_KERNEL_DECLS
}  // namespace avx2
#endif

#undef FWSN_KERNEL_DECLS

}  // namespace fwsn::kernels
