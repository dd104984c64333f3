#pragma once

#include <string>
#include <vector>

#include "phantom/dispersion.hpp"
#include "phantom/materials.hpp"
#include "phantom/spectrum.hpp"

namespace phantom {

// Maximal frequency interval on which a sample matches a tissue property
// within the threshold used to produce it.
struct MatchBand {
    TissueId tissue;
    Property property;
    Method method;
    double concentration;
    double fmin_hz;
    double fmax_hz;
    double worst_error;   // max error strictly inside the band
};

struct Band {
    double fmin_hz;
    double fmax_hz;
    double worst_error;
};

// error(f) = |x_sample(f) - x_tissue(f)| / x_tissue(f); grids must be identical.
std::vector<double> relative_error_curve(const DielectricSpectrum& sample,
                                         const DielectricSpectrum& tissue, Property property);

// Maximal runs of consecutive grid points with error strictly below the
// threshold. Edges between bracketing grid points are refined by linear
// interpolation of the error in log f; worst_error is the max over the grid
// points inside the run.
std::vector<Band> find_bands(const FrequencyGrid& grid, const std::vector<double>& error_curve,
                             double threshold = 0.10);

struct MatchOptions {
    double threshold = 0.10;
    FrequencyGrid grid = FrequencyGrid::default_grid();
};

// Qualifying bands of all samples against one tissue property, restricted to
// those intersecting [fmin, fmax], ranked by coverage of the request, then
// band worst_error, then concentration, then oil_only before oil_kerosene.
std::vector<MatchBand> best_matches(const MaterialDatabase& db, const TissueModel& tissue,
                                    Property property, double fmin_hz, double fmax_hz,
                                    std::size_t top_k = 0, const MatchOptions& opts = {});

struct MatchReport {
    struct Group {
        TissueId tissue;
        Property property;
        std::vector<MatchBand> bands;   // sorted by fmin
    };
    double threshold = 0.10;
    std::vector<Group> groups;          // tissue-major, conductivity first

    const Group* find(TissueId tissue, Property property) const;
};

// All qualifying bands for every tissue x property over the full grid.
MatchReport match_table(const MaterialDatabase& db, const std::vector<TissueModel>& library,
                        double threshold = 0.10,
                        const FrequencyGrid& grid = FrequencyGrid::default_grid());

std::string report_to_json(const MatchReport& report);
std::string report_to_csv(const MatchReport& report);
std::string report_to_markdown(const MatchReport& report);

struct ConcentrationFit {
    double concentration = 0.0;
    double worst_error = 0.0;   // achieved minimax error over the band
    bool feasible = false;      // worst_error below the threshold
};

// Concentration in [0.10, 0.90] minimizing the maximum relative error over
// the requested band of the interpolated spectrum (golden-section search with
// a dense-grid inner maximum). Never returns a result worse than the best
// tabulated concentration.
ConcentrationFit solve_concentration(const MaterialDatabase& db, Method method,
                                     const TissueModel& tissue, Property property,
                                     double fmin_hz, double fmax_hz, double threshold = 0.10,
                                     const FrequencyGrid& grid = FrequencyGrid::default_grid());

}  // namespace phantom
