#pragma once

#include <vector>

#include "phantom/dispersion.hpp"
#include "phantom/materials.hpp"

namespace phantom {

// One designed matching band of the bundled reference dataset: the sample's
// relative error against the tissue crosses the 10% threshold at fmin/fmax.
struct ReferenceBand {
    TissueId tissue;
    Method method;
    int percent;          // nominal concentration label
    Property property;
    double fmin_mhz;
    double fmax_mhz;
};

// Band targets the reference dataset is designed to reproduce.
const std::vector<ReferenceBand>& reference_schedule();

// Extra bands that are unavoidable by-products of the design (transversal
// tube crossings forced by the concentration-monotone fan); documented and
// pinned by tests.
const std::vector<ReferenceBand>& reference_extras();

// Deterministically constructs the bundled synthetic reference dataset from a
// tissue library: 9 concentrations per method, spectra stored on a dense
// 601-point grid, built so each scheduled band's error crosses 10% exactly at
// the target edges while the fan stays monotone in concentration.
MaterialDatabase build_reference_database(const std::vector<TissueModel>& library);

// The tissue library the reference dataset was designed against (same content
// as the bundled data/tissues.json).
std::vector<TissueModel> reference_tissue_library();

}  // namespace phantom
