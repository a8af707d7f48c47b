#pragma once

// Conversions between library matrices and the oracle representations.

#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "epigraphon/error.hpp"
#include "epigraphon/matrix.hpp"
#include "epigraphon/rng.hpp"

namespace support {

inline Eigen::MatrixXd to_eigen(const epigraphon::Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

inline std::vector<std::vector<double>> to_nested(const epigraphon::Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
}

/// Kind of the epigraphon::Error thrown by fn; fails the test if nothing is thrown.
inline epigraphon::ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const epigraphon::Error& e) {
        return e.kind();
    }
    FAIL("expected an epigraphon::Error");
    return epigraphon::ErrorKind::InvalidArgument;
}

/// Deterministic uniform draws for test inputs, independent of the code under test's counters.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : seed_(seed) {}
    double next() { return epigraphon::counter_uniform(seed_ ^ 0x5eedULL, counter_++); }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace support
