#pragma once

#include <vector>

namespace omm {

/// Rectangular phase-space window and sampling resolution. Coordinates are
/// quadrature units with alpha = (x + i y) / sqrt(2).
struct GridSpec {
    double x_min = -5.0;
    double x_max = 5.0;
    double y_min = -5.0;
    double y_max = 5.0;
    int nx = 201;
    int ny = 201;

    double x(int i) const { return x_min + (x_max - x_min) * i / (nx - 1); }
    double y(int j) const { return y_min + (y_max - y_min) * j / (ny - 1); }
    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
};

/// Sampled quasi-probability field. Convention: normalized to unit integral
/// over (x, y) with the vacuum peak at 1/pi.
struct WignerGrid {
    GridSpec spec;
    std::vector<double> values;  // row-major, index j*nx + i

    double& at(int i, int j) { return values[static_cast<size_t>(j) * spec.nx + i]; }
    double at(int i, int j) const { return values[static_cast<size_t>(j) * spec.nx + i]; }

    /// Cell-sum integral over the window.
    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * spec.dx() * spec.dy();
    }
    double min_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = v < m ? v : m;
        return m;
    }
};

inline constexpr const char* wigner_convention = "vacuum-peak-1-over-pi";

}  // namespace omm
