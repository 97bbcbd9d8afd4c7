#include "tzone/core.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace tzone {

ModelParams validate(const ModelParams& p) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.alpha) || !(p.alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!finite(p.sigma) || !(p.sigma > 0.0)) throw DomainError("sigma must be positive");
    if (!finite(p.f_bar) || !(p.f_bar > 0.0)) throw DomainError("f_bar must be positive");
    if (!finite(p.horizon_T) || !(p.horizon_T > 0.0)) throw DomainError("horizon_T must be positive");
    if (!finite(p.beta) || p.beta < 0.0) throw DomainError("beta must be non-negative");
    if (!finite(p.r_share) || p.r_share < 0.0 || p.r_share >= 1.0)
        throw DomainError("r_share must lie in [0, 1)");
    if (!finite(p.rho())) throw DomainError("rho = beta^2/2 + alpha must be finite");
    return p;
}

Grid::Grid(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("grid needs at least 2 points");
    if (!(hi > lo)) throw DomainError("grid bounds must be increasing");
    spacing_ = (hi - lo) / static_cast<double>(n - 1);
    points_.resize(n);
    for (std::size_t i = 0; i < n; ++i) points_[i] = lo + spacing_ * static_cast<double>(i);
    points_.front() = lo;
    points_.back() = hi;
}

Grid Grid::band(const ModelParams& p, std::size_t n) { return Grid(-p.f_bar, p.f_bar, n); }

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t state = seed ^ splitmix64(stream_id);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers = std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &err = errors[w]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    // first failing chunk wins, independent of timing
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace tzone
