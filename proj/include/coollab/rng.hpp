#ifndef COOLLAB_RNG_HPP
#define COOLLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "coollab/matrix.hpp"

namespace coollab {

/// Identifies an independent random stream. Experiments derive one substream
/// per trial as (master seed, trial index), so trials are order-independent
/// and results do not depend on how many workers evaluate them.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    RngSeed substream(std::uint64_t index) const {
        // splitmix64 finalizer keeps nearby indices decorrelated.
        std::uint64_t z = stream_id + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
        return {seed, z};
    }

    bool operator==(const RngSeed&) const = default;
};

/// Deterministic generator over an (seed, stream_id) pair. Gaussian samples
/// use an explicit Box-Muller transform rather than std::normal_distribution,
/// whose output sequence is not pinned by the standard.
class Rng {
  public:
    explicit Rng(RngSeed s) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
            static_cast<std::uint32_t>(s.stream_id), static_cast<std::uint32_t>(s.stream_id >> 32)};
        engine_.seed(seq);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive (rejection-free for small ranges).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        auto k = static_cast<std::uint64_t>(uniform() * static_cast<double>(span));
        return lo + (k < span ? k : span - 1);
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Flat Dirichlet over the (n-1)-simplex: normalized unit exponentials.
    std::vector<double> dirichlet_flat(std::size_t n) {
        if (n == 0) throw InvalidInput("dirichlet_flat: n must be >= 1");
        std::vector<double> w(n);
        double total = 0.0;
        for (auto& x : w) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            x = -std::log(u);
            total += x;
        }
        for (auto& x : w) x /= total;
        return w;
    }

    /// Ginibre matrix: iid standard complex Gaussian entries.
    ComplexMatrix ginibre(Eigen::Index dim) {
        ComplexMatrix g(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j)
                g(i, j) = Complex(gaussian(), gaussian());
        return g;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace coollab

#endif
