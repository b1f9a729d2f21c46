#pragma once

#include <cstdint>
#include <initializer_list>

namespace dgbo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent sub-stream seed for (base, i, j, ...).
template <class... Ts>
std::uint64_t derive_seed(std::uint64_t base, Ts... parts) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : {static_cast<std::uint64_t>(parts)...}) h = splitmix64(h ^ splitmix64(p));
    return h;
}

}  // namespace dgbo
