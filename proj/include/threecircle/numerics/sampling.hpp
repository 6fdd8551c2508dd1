#pragma once

// Deterministic low-discrepancy samples of the real unit sphere S^(m-1) and a
// small index-parallel loop whose results are merged by index.

#include "threecircle/numerics/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace threecircle {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/// `count` points on the unit sphere of R^m, m even.
///
/// m == 2 uses equally spaced angles; otherwise a Cranley-Patterson rotated
/// Halton sequence is pushed through Box-Muller pairs and normalized. The
/// rotation (and the angular offset for m == 2) is derived from `seed`.
inline std::vector<RVector> sphere_directions(int m, std::size_t count, std::uint64_t seed) {
    if (m < 2 || m % 2 != 0) throw ConfigError("sphere dimension must be a positive even number");
    if (m > 12) throw ConfigError("sphere dimension too large for the Halton bases");
    static constexpr std::array<std::uint64_t, 12> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> shift(static_cast<std::size_t>(m));
    for (auto& s : shift) s = uni(rng);

    std::vector<RVector> out;
    out.reserve(count);
    if (m == 2) {
        for (std::size_t k = 0; k < count; ++k) {
            const double th = 2.0 * std::numbers::pi * (static_cast<double>(k) + shift[0]) / static_cast<double>(count);
            RVector v(2);
            v << std::cos(th), std::sin(th);
            out.push_back(v);
        }
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
        RVector v(m);
        for (int p = 0; p < m / 2; ++p) {
            double u1 = radical_inverse(k + 1, primes[static_cast<std::size_t>(2 * p)]) + shift[static_cast<std::size_t>(2 * p)];
            double u2 = radical_inverse(k + 1, primes[static_cast<std::size_t>(2 * p + 1)]) +
                        shift[static_cast<std::size_t>(2 * p + 1)];
            u1 -= std::floor(u1);
            u2 -= std::floor(u2);
            const double rad = std::sqrt(-2.0 * std::log(1.0 - u1 * (1.0 - 1e-16)));
            v(2 * p) = rad * std::cos(2.0 * std::numbers::pi * u2);
            v(2 * p + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
        }
        const double nrm = v.norm();
        if (nrm < 1e-300) {
            v.setZero();
            v(0) = 1.0;
        } else {
            v /= nrm;
        }
        out.push_back(v);
    }
    return out;
}

/// Run body(i) for i in [0, count) on up to hardware_concurrency workers.
/// The body writes its result into index-addressed storage, so the merged
/// output does not depend on scheduling. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, const Body& body) {
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace threecircle
