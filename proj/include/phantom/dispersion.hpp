#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "phantom/spectrum.hpp"

namespace phantom {

// CODATA vacuum permittivity, F/m.
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;

enum class TissueId { skin_dry, skin_wet, muscle, fat, cortical_bone, bone_marrow };

inline constexpr std::array<TissueId, 6> kAllTissues = {
    TissueId::skin_dry,     TissueId::skin_wet, TissueId::muscle,
    TissueId::fat,          TissueId::cortical_bone, TissueId::bone_marrow};

const char* to_string(TissueId id);
TissueId tissue_from_string(const std::string& s);

struct ColeColePole {
    double delta_eps = 0.0;  // dispersion strength, dimensionless, >= 0
    double tau_s = 0.0;      // relaxation time, seconds, > 0
    double alpha = 0.0;      // broadening exponent, in [0, 1)
};

// Multi-pole Cole-Cole description of one material: up to four relaxation
// poles plus a static ionic conductivity term.
struct ColeColeParams {
    double eps_inf = 1.0;
    std::vector<ColeColePole> poles;  // 1..4 entries
    double sigma_ionic = 0.0;         // S/m

    // Throws std::invalid_argument naming the offending field on violation.
    void validate() const;
};

struct TissueModel {
    TissueId tissue_id;
    ColeColeParams params;
    std::string source_label;
};

struct DielectricPoint {
    double rel_permittivity;
    double conductivity;
};

// Evaluate the dispersion model at a single frequency. Returns the real part
// of the complex permittivity and the total conductivity -w*e0*Im(eps).
// Principal branch for the fractional power. Throws on non-finite
// intermediates, naming the pole.
DielectricPoint evaluate_point(const ColeColeParams& params, double f_hz);

// Pointwise sweep over a grid.
DielectricSpectrum tissue_spectrum(const TissueModel& model, const FrequencyGrid& grid);

// Load a tissue parameter library from a JSON file. Unknown fields and
// duplicate tissue ids are rejected; every record is validated.
std::vector<TissueModel> load_tissue_library(const std::filesystem::path& file);
std::vector<TissueModel> parse_tissue_library(const std::string& json_text);

const TissueModel& find_tissue(const std::vector<TissueModel>& library, TissueId id);

}  // namespace phantom
