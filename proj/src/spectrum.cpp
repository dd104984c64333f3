#include "phantom/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace phantom {

const char* to_string(Property p) {
    return p == Property::conductivity ? "conductivity" : "permittivity";
}

Property property_from_string(const std::string& s) {
    if (s == "conductivity") return Property::conductivity;
    if (s == "permittivity") return Property::permittivity;
    throw std::invalid_argument("unknown property '" + s + "'");
}

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz, double min_hz, double max_hz)
    : points_(std::move(points_hz)) {
    if (points_.empty()) throw std::invalid_argument("frequency grid is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double f = points_[i];
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::invalid_argument("frequency grid point " + std::to_string(i) +
                                        " is not a positive finite value");
        if (f < min_hz || f > max_hz)
            throw std::invalid_argument("frequency grid point " + std::to_string(i) + " (" +
                                        std::to_string(f) + " Hz) outside bounds [" +
                                        std::to_string(min_hz) + ", " + std::to_string(max_hz) +
                                        "]");
        if (i > 0 && !(points_[i - 1] < f))
            throw std::invalid_argument("frequency grid not strictly increasing at index " +
                                        std::to_string(i));
    }
}

FrequencyGrid FrequencyGrid::log_spaced(double fmin_hz, double fmax_hz, int n_points) {
    if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz))
        throw std::invalid_argument("log_spaced requires 0 < fmin < fmax");
    if (n_points < 2) throw std::invalid_argument("log_spaced requires at least 2 points");
    std::vector<double> pts(static_cast<std::size_t>(n_points));
    const double lo = std::log10(fmin_hz);
    const double hi = std::log10(fmax_hz);
    const double step = (hi - lo) / (n_points - 1);
    for (int i = 0; i < n_points; ++i) pts[static_cast<std::size_t>(i)] = std::pow(10.0, lo + step * i);
    pts.front() = fmin_hz;
    pts.back() = fmax_hz;
    return FrequencyGrid(std::move(pts), fmin_hz, fmax_hz);
}

FrequencyGrid FrequencyGrid::default_grid() {
    return log_spaced(kDefaultMinHz, kDefaultMaxHz, kDefaultPoints);
}

void DielectricSpectrum::validate() const {
    if (rel_permittivity.size() != grid.size() || conductivity.size() != grid.size())
        throw std::invalid_argument("spectrum arrays do not match grid length");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(conductivity[i] > 0.0) || !std::isfinite(conductivity[i]))
            throw std::invalid_argument("conductivity not positive at grid index " +
                                        std::to_string(i));
        if (!(rel_permittivity[i] >= 1.0) || !std::isfinite(rel_permittivity[i]))
            throw std::invalid_argument("rel_permittivity below 1 at grid index " +
                                        std::to_string(i));
    }
}

double interp_loglog(const std::vector<double>& grid, const std::vector<double>& values, double x) {
    if (grid.size() != values.size() || grid.size() < 2)
        throw std::invalid_argument("interp_loglog needs two or more tabulated points");
    if (x < grid.front() || x > grid.back())
        throw std::out_of_range("interpolation abscissa outside tabulated range");
    auto it = std::lower_bound(grid.begin(), grid.end(), x);
    if (it != grid.end() && *it == x) return values[static_cast<std::size_t>(it - grid.begin())];
    std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    std::size_t lo = hi - 1;
    const double t = (std::log(x) - std::log(grid[lo])) / (std::log(grid[hi]) - std::log(grid[lo]));
    return std::exp(std::log(values[lo]) + t * (std::log(values[hi]) - std::log(values[lo])));
}

DielectricSpectrum resample(const DielectricSpectrum& spec, const FrequencyGrid& target) {
    spec.validate();
    if (spec.grid == target) return spec;
    if (spec.grid.size() < 2)
        throw std::invalid_argument("cannot resample a single-point spectrum to a new grid");
    DielectricSpectrum out;
    out.grid = target;
    out.rel_permittivity.reserve(target.size());
    out.conductivity.reserve(target.size());
    for (double f : target.points()) {
        out.rel_permittivity.push_back(interp_loglog(spec.grid.points(), spec.rel_permittivity, f));
        out.conductivity.push_back(interp_loglog(spec.grid.points(), spec.conductivity, f));
    }
    return out;
}

}  // namespace phantom
