#include "fwsn/error.hpp"
#include "fwsn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fwsn::kernels {
namespace {

struct Table {
    decltype(&scalar::clipped_disk_area) clipped_disk_area;
    decltype(&scalar::count_within) count_within;
    decltype(&scalar::classify_membership) classify_membership;
    decltype(&scalar::collect_within) collect_within;
};

constexpr Table kScalar{&scalar::clipped_disk_area, &scalar::count_within,
                        &scalar::classify_membership, &scalar::collect_within};
#if defined(FWSN_HAVE_AVX2)
constexpr Table kAvx2{&avx2::clipped_disk_area, &avx2::count_within,
                      &avx2::classify_membership, &avx2::collect_within};
#endif

const Table* table_for(Isa isa) {
#if defined(FWSN_HAVE_AVX2)
    if (isa == Isa::avx2) return &kAvx2;
#endif
    (void)isa;
    return &kScalar;
}

Isa detect() {
    Isa best = isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv(kIsaEnv)) {
        const std::string want(env);
        if (want == "scalar") return Isa::scalar;
        if (want == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
    }
    return best;
}

std::atomic<const Table*>& current_slot() {
    static std::atomic<const Table*> slot{table_for(detect())};
    return slot;
}

const Table& current() { return *current_slot().load(std::memory_order_relaxed); }

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(FWSN_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() noexcept { return current_slot().load() == &kScalar ? Isa::scalar : Isa::avx2; }

void set_isa(Isa isa) {
    require(isa_supported(isa), "kernel ISA '" + std::string(isa_name(isa)) + "' is not supported on this CPU");
    current_slot().store(table_for(isa));
}

void clipped_disk_area(std::span<const double> xs, std::span<const double> ys, double r,
                       std::span<double> out) {
    current().clipped_disk_area(xs, ys, r, out);
}

std::size_t count_within(std::span<const double> xs, std::span<const double> ys, double qx,
                         double qy, double r2) {
    return current().count_within(xs, ys, qx, qy, r2);
}

std::uint32_t classify_membership(std::span<const double> xs, std::span<const double> ys,
                                  double qx, double qy, double inner2, double outer2,
                                  std::uint32_t stop_at, std::vector<std::uint32_t>& boundary) {
    return current().classify_membership(xs, ys, qx, qy, inner2, outer2, stop_at, boundary);
}

void collect_within(std::span<const double> xs, std::span<const double> ys, double qx,
                    double qy, double r2, std::uint32_t index_offset,
                    std::vector<std::uint32_t>& out) {
    current().collect_within(xs, ys, qx, qy, r2, index_offset, out);
}

}  // namespace fwsn::kernels
