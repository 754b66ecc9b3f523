#include "fwsn/rng.hpp"

#include <utility>

namespace fwsn {

double pair_uniform(std::uint64_t seed, std::uint32_t i, std::uint32_t j) noexcept {
    if (i > j) std::swap(i, j);
    const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | j;
    return to_unit(mix64(seed ^ mix64(key ^ 0xd1b54a32d192ed03ULL)));
}

}  // namespace fwsn
