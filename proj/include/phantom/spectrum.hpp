#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace phantom {

// Which of the two dielectric properties a query refers to.
enum class Property { conductivity, permittivity };

const char* to_string(Property p);
Property property_from_string(const std::string& s);

// Strictly increasing frequency grid in Hz. Points must stay inside the
// configured bounds; the defaults cover the 100 kHz - 100 MHz band.
class FrequencyGrid {
public:
    static constexpr double kDefaultMinHz = 1e5;
    static constexpr double kDefaultMaxHz = 1e8;
    static constexpr int kDefaultPoints = 201;

    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> points_hz,
                           double min_hz = kDefaultMinHz,
                           double max_hz = kDefaultMaxHz);

    static FrequencyGrid log_spaced(double fmin_hz, double fmax_hz, int n_points);
    static FrequencyGrid default_grid();

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    bool operator==(const FrequencyGrid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
};

// Paired relative-permittivity / conductivity samples on a frequency grid.
struct DielectricSpectrum {
    FrequencyGrid grid;
    std::vector<double> rel_permittivity;  // dimensionless, >= 1
    std::vector<double> conductivity;      // S/m, > 0

    void validate() const;
    const std::vector<double>& values(Property p) const {
        return p == Property::conductivity ? conductivity : rel_permittivity;
    }
};

// Log-log piecewise-linear resampling onto a new grid. Target points must lie
// within the source grid's span; there is no extrapolation. Resampling onto
// the identical grid returns a verbatim copy.
DielectricSpectrum resample(const DielectricSpectrum& spec, const FrequencyGrid& target);

// log-log interpolation of a single curve tabulated on `grid`.
double interp_loglog(const std::vector<double>& grid, const std::vector<double>& values, double x);

}  // namespace phantom
