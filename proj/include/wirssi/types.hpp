#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wirssi {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
double norm(const Point2& p);
double distance(const Point2& a, const Point2& b);

/// Dense row-major matrix of doubles.
struct RealMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Dense row-major matrix of complex doubles.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::complex<double>> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    std::complex<double>& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const std::complex<double>& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

}  // namespace wirssi
