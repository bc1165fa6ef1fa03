#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace axiscat {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kImag{0.0, 1.0};

/// Error raised by solver components; `what()` carries a diagnostic line.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of worker threads used by parallel loops. 0 resets to hardware default.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [begin, end). Each index writes to its own slot, so the
/// result is independent of the thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& fn);

/// Deterministic standard-normal generator: Box-Muller over mt19937_64.
/// std::normal_distribution is implementation-defined; this is reproducible.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace axiscat
