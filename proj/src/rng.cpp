#include "wirssi/rng.hpp"

#include <cmath>

namespace wirssi {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng Rng::split(std::uint64_t stream_id) const {
    std::uint64_t s = state_;
    std::uint64_t a = splitmix64(s);
    // fold the stream id through one more mixing round
    std::uint64_t t = a ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
    return Rng(splitmix64(t));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
}

}  // namespace wirssi
