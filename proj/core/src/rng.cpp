#include "drillport/rng.hpp"

#include <cmath>
#include <limits>

#include "drillport/error.hpp"

namespace drillport {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(master);
    for (auto k : keys) {
        h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

double open_uniform(Rng& rng) {
    // 53 random mantissa bits, shifted off zero by half an ulp of the grid.
    constexpr double scale = 1.0 / 9007199254740992.0; // 2^-53
    const auto bits = rng() >> 11;
    return (static_cast<double>(bits) + 0.5) * scale;
}

double sample_beta(Rng& rng, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw InputError("sample_beta: shape parameters must be positive");
    }
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    // Small shapes can underflow both gammas to zero; redraw in that case.
    for (;;) {
        const double x = ga(rng);
        const double y = gb(rng);
        const double s = x + y;
        if (s > 0.0 && std::isfinite(s)) {
            double v = x / s;
            if (v <= 0.0) v = std::numeric_limits<double>::min();
            if (v >= 1.0) v = 1.0 - std::numeric_limits<double>::epsilon();
            return v;
        }
    }
}

} // namespace drillport
