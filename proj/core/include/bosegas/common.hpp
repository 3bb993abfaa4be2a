#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bosegas {

// bad user input / configuration; the CLI maps this to exit code 2
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a computation that cannot proceed (bracket failure, non-finite sum, ...); exit code 1
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kahan-Babuska (Neumaier) compensated accumulator. Adding terms in a fixed
// order gives bit-stable sums independent of thread count.
struct kahan_sum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// Runs fn(i) for i in [0, n). Each index must touch only its own output slot;
// the result is then identical for any thread count. Exceptions are rethrown
// on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& fn, unsigned threads = 1) {
    if (threads <= 1 || n < 2 * static_cast<std::size_t>(threads)) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &first_error, &error_mutex] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace bosegas
