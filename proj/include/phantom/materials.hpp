#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phantom/spectrum.hpp"

namespace phantom {

enum class Method { oil_only, oil_kerosene };
enum class Provenance { measured, interpolated, synthetic };

const char* to_string(Method m);
Method method_from_string(const std::string& s);
const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// One fabricated formulation with its spectrum and provenance metadata.
// Concentration is the nominal oil(-kerosene) solution share, 0.10..0.90.
struct MaterialSample {
    Method method;
    double concentration = 0.0;
    DielectricSpectrum spectrum;
    Provenance provenance = Provenance::synthetic;
    std::optional<std::string> measured_at;      // ISO date, measured samples
    std::optional<double> sample_thickness_mm;   // fixture limit: <= 3 mm

    void validate() const;
};

// Collection of samples keyed by (method, concentration); measured samples are
// additionally distinguished by measurement date.
class MaterialDatabase {
public:
    static constexpr int kSchemaVersion = 1;

    void add(MaterialSample sample);

    const std::vector<MaterialSample>& samples() const { return samples_; }
    // Samples of one method ordered by concentration; for a (method,
    // concentration) pair carrying several measurement dates the latest wins.
    std::vector<const MaterialSample*> samples_for(Method m) const;
    const MaterialSample* find(Method m, double concentration) const;
    std::vector<double> concentrations(Method m) const;
    bool empty() const { return samples_.empty(); }
    int schema_version() const { return schema_version_; }

    // Directory layout: manifest.json plus one CSV per sample.
    static MaterialDatabase load_dir(const std::filesystem::path& dir);
    void save_dir(const std::filesystem::path& dir) const;

private:
    std::vector<MaterialSample> samples_;
    int schema_version_ = kSchemaVersion;
};

struct IngestOptions {
    bool widen_bounds = false;   // keep rows outside the configured band
    bool use_median = false;     // median instead of mean over replicates
    double fmin_hz = FrequencyGrid::kDefaultMinHz;
    double fmax_hz = FrequencyGrid::kDefaultMaxHz;
};

struct IngestMetadata {
    Provenance provenance = Provenance::measured;
    std::optional<std::string> measured_at;
    std::optional<double> sample_thickness_mm;
};

// Parse a measurement CSV (header: frequency_hz,rel_permittivity_1..N,
// conductivity_s_per_m_1..N), average replicates, validate. Out-of-band rows
// are dropped with a warning unless widen_bounds is set.
MaterialSample ingest_measurement(std::istream& in, Method method, double concentration,
                                  const IngestMetadata& meta, const IngestOptions& opts = {},
                                  std::vector<std::string>* warnings = nullptr);
MaterialSample ingest_measurement_file(const std::filesystem::path& file, Method method,
                                       double concentration, const IngestMetadata& meta,
                                       const IngestOptions& opts = {},
                                       std::vector<std::string>* warnings = nullptr);

// One instance where a property increases with concentration (it should not).
struct MonotoneViolation {
    double f_hz;
    double concentration_low, concentration_high;
    Property property;
    double value_low, value_high;
};

// Empty result means the database is consistent with properties decreasing as
// concentration increases.
std::vector<MonotoneViolation> validate_monotone_in_concentration(const MaterialDatabase& db,
                                                                  Method method,
                                                                  const FrequencyGrid& grid);

// Piecewise-linear interpolation in concentration of log(sigma) and log(eps),
// after resampling the bracketing stored spectra onto `grid` (log-log).
// Tabulated concentrations reproduce the stored spectrum exactly.
MaterialSample interpolate_spectrum(const MaterialDatabase& db, Method method,
                                    double concentration, const FrequencyGrid& grid);

// Relative property drift between two measurements of the same formulation.
struct AgingReport {
    FrequencyGrid grid;
    std::vector<double> delta_conductivity;      // (b - a) / a
    std::vector<double> delta_rel_permittivity;
    double max_abs_delta = 0.0;
};

AgingReport aging_drift(const MaterialSample& a, const MaterialSample& b);

}  // namespace phantom
