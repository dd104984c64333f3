#include "phantom/refdata.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace phantom {

namespace {

// ------------------------------------------------------------ tissue set
// Same parameter values as the bundled data/tissues.json. Corner frequencies
// are stored here; tau = 1/(2*pi*fc).

struct PoleSpec {
    double delta_eps, fc_hz, alpha;
};
struct TissueSpec {
    TissueId id;
    double eps_inf;
    double sigma_ionic;
    PoleSpec poles[4];
    const char* label;
};

const TissueSpec kTissueSpecs[] = {
    {TissueId::skin_dry, 165.0, 0.0008,
     {{4800, 0.15e6, 0.10}, {1080, 0.85e6, 0.06}, {340, 2.9e6, 0.03}, {140, 90e6, 0.02}},
     "reference four-pole fit, dry skin"},
    {TissueId::skin_wet, 42.38, 0.09554,
     {{3117.1, 0.18e6, 0.10}, {908.2, 1.0e6, 0.06}, {251.5, 4.0e6, 0.03}, {121.0, 40e6, 0.02}},
     "reference four-pole fit, wet skin"},
    {TissueId::muscle, 1.0, 0.365,
     {{2209, 0.18e6, 0.10}, {620.8, 1.0e6, 0.06}, {199.3, 4.0e6, 0.03}, {107.4, 90e6, 0.02}},
     "reference four-pole fit, muscle"},
    {TissueId::fat, 15.0, 0.0005,
     {{73, 0.14e6, 0.10}, {7.9, 0.8e6, 0.06}, {3.6, 13.5e6, 0.03}, {0.8, 60e6, 0.02}},
     "reference four-pole fit, fat"},
    {TissueId::cortical_bone, 2.9, 0.0030,
     {{21, 0.24e6, 0.12}, {3.4, 1.3e6, 0.06}, {4.5, 13e6, 0.03}, {5.8, 45e6, 0.02}},
     "reference four-pole fit, cortical bone"},
    {TissueId::bone_marrow, 15.0, 0.0010,
     {{95, 0.14e6, 0.10}, {9.0, 0.8e6, 0.06}, {4.0, 12.5e6, 0.03}, {3.0, 60e6, 0.02}},
     "reference four-pole fit, bone marrow"},
};

// --------------------------------------------------------- curve programs
// A sample curve is a chain of waypoints (f, tissue, ratio). Between
// waypoints the ratio relative to the right waypoint's tissue is linear in
// log f (the left end inherits the value for continuity), so each designed
// band's error crosses the 10% threshold exactly at its target edge.

struct Waypoint {
    double f_hz;
    TissueId ref;
    double ratio;
};

struct CurveProgram {
    int percent;
    std::vector<Waypoint> points;
};

constexpr TissueId D = TissueId::skin_dry;
constexpr TissueId W = TissueId::skin_wet;
constexpr TissueId U = TissueId::muscle;
constexpr TissueId F = TissueId::fat;
constexpr TissueId C = TissueId::cortical_bone;
constexpr TissueId MA = TissueId::bone_marrow;

const CurveProgram kSigmaOilOnly[] = {
    {10, {{1e5, W, 1.19}, {7e7, W, 1.19}, {1e8, W, 1.285}}},
    {20,
     {{1e5, D, 1.24},
      {8e6, D, 1.18},
      {9.55e6, D, 1.125},
      {1e7, D, 1.1},
      {1.45e7, D, 0.9},
      {1.52e7, D, 0.875},
      {2e7, D, 0.8},
      {1e8, D, 0.75}}},
    {30,
     {{1e5, D, 1.17},
      {4e6, D, 1.17},
      {6.69e6, D, 1.137},
      {7e6, D, 1.1},
      {9e6, D, 0.9},
      {9.42e6, D, 0.863},
      {1.3e7, D, 0.8},
      {1e8, D, 0.7}}},
    {40, {{1e5, D, 0.62}, {1e8, D, 0.62}}},
    {50, {{1e5, D, 0.47}, {1e8, D, 0.47}}},
    {60,
     {{1e5, C, 1.3},
      {2e6, C, 1.28},
      {5.63e6, C, 1.103},
      {5.9e6, C, 1.1},
      {2.36e7, C, 1.01},
      {1e8, C, 1.02}}},
    {70, {{1e5, MA, 1.55}, {9.35e6, MA, 1.21}, {3e7, MA, 1.22}, {1e8, MA, 1.25}}},
    {80,
     {{1e5, MA, 1.42},
      {7e6, MA, 1.175},
      {1.222e7, MA, 1.103},
      {1.28e7, MA, 1.1},
      {5.1e7, MA, 1.01},
      {1e8, MA, 1.02}}},
    {90, {{1e5, MA, 0.8}, {1.233e7, MA, 0.835}, {4e7, MA, 0.82}, {1e8, MA, 0.79}}},
};

const CurveProgram kSigmaOilKerosene[] = {
    {10, {{1e5, D, 0.85}, {3e7, D, 0.85}, {1e8, D, 0.75}}},
    {20, {{1e5, D, 0.76}, {3e7, D, 0.76}, {1e8, D, 0.68}}},
    {30, {{1e5, D, 0.67}, {3e7, D, 0.67}, {1e8, D, 0.6}}},
    {40, {{1e5, D, 0.58}, {3e7, D, 0.58}, {1e8, D, 0.52}}},
    {50, {{1e5, D, 0.5}, {3e7, D, 0.5}, {1e8, D, 0.45}}},
    {60, {{1e5, D, 0.42}, {3e7, D, 0.42}, {1e8, D, 0.39}}},
    {70,
     {{1e5, C, 0.8},
      {2.5e6, C, 0.875},
      {4.01e6, C, 0.892},
      {4.2e6, C, 0.9},
      {6.8e6, C, 0.98},
      {1.1e7, C, 0.9},
      {1.152e7, C, 0.892},
      {3e7, C, 0.84},
      {1e8, C, 0.84}}},
    {80,
     {{1e5, F, 0.78},
      {7e6, F, 0.873},
      {1.05e7, F, 0.897},
      {1.1e7, F, 0.9},
      {4e7, F, 0.985},
      {1e8, F, 0.97}}},
    {90, {{1e5, F, 0.6}, {1e8, F, 0.8}}},
};

const CurveProgram kEpsOilOnly[] = {
    {10,
     {{1e5, U, 1.21},
      {9e6, U, 1.21},
      {1.135e7, W, 0.8734},
      {1.19e7, W, 0.9},
      {1.414e7, W, 1.0},
      {1.68e7, W, 1.1},
      {1.762e7, W, 1.126},
      {2.2e7, W, 1.16},
      {2.39e7, D, 0.872},
      {2.5e7, D, 0.9},
      {2.9e7, D, 0.98},
      {3.37e7, D, 0.9},
      {3.53e7, D, 0.874},
      {3.76e7, D, 0.845},
      {4.01e7, D, 0.872},
      {4.2e7, D, 0.9},
      {4.97e7, D, 1.0},
      {5.8e7, D, 1.1},
      {6.08e7, D, 1.128},
      {1e8, D, 1.2}}},
    {20,
     {{1e5, U, 1.16},
      {1.7e7, U, 1.16},
      {2.2e7, W, 1.13},
      {4.5e7, W, 1.13},
      {5.3e7, D, 0.846},
      {5.84e7, D, 0.9},
      {7.25e7, D, 1.0},
      {9e7, D, 1.1},
      {9.42e7, D, 1.127},
      {1e8, D, 1.14}}},
    {30,
     {{1e5, U, 0.86},
      {1.55e7, U, 0.86},
      {1.65e7, U, 0.777},
      {2.4e7, U, 0.9},
      {3.8e7, U, 1.066},
      {4.5e7, U, 1.08},
      {5.4e7, U, 1.1},
      {5.8e7, U, 1.118},
      {7.1e7, W, 1.1},
      {7.9e7, W, 1.19},
      {8.88e7, D, 0.881},
      {9.3e7, D, 0.9},
      {1e8, D, 0.93}}},
    {40,
     {{1e5, U, 0.72},
      {6.3e7, U, 0.72},
      {6.9e7, U, 0.9},
      {7.3e7, W, 0.9},
      {1e8, W, 1.05}}},
    {50, {{1e5, U, 0.58}, {1e8, U, 0.55}}},
    {60, {{1e5, U, 0.46}, {1e8, U, 0.44}}},
    {70, {{1e5, U, 0.385}, {1e8, U, 0.385}}},
    {80, {{1e5, U, 0.3}, {3e7, U, 0.3}, {1e8, U, 0.36}}},
    {90,
     {{1e5, MA, 1.3},
      {1e6, MA, 1.21},
      {1.72e6, MA, 1.126},
      {1.8e6, MA, 1.1},
      {2.2e6, F, 1.1037},
      {2.3e6, F, 1.1},
      {4e6, F, 1.055},
      {8e6, F, 1.055},
      {1.15e7, F, 1.1},
      {1.204e7, F, 1.1057},
      {2.5e7, MA, 1.1},
      {2.56e7, MA, 1.104},
      {3.5e7, MA, 1.125},
      {1e8, MA, 1.14}}},
};

const CurveProgram kEpsOilKerosene[] = {
    {10, {{1e5, D, 1.16}, {1e8, D, 1.16}}},
    {20,
     {{1e5, U, 1.16},
      {1.9e7, U, 1.16},
      {2.29e7, W, 0.8794},
      {2.4e7, W, 0.9},
      {3.02e7, W, 1.0},
      {3.8e7, W, 1.1},
      {3.98e7, W, 1.12},
      {4.6e7, W, 1.19},
      {1e8, W, 1.19}}},
    {30,
     {{1e5, U, 0.855},
      {2.76e7, U, 0.855},
      {3.72e7, U, 0.894},
      {3.9e7, U, 0.9},
      {5.4e7, U, 0.945},
      {7.3e7, U, 0.98},
      {1e8, U, 1.0}}},
    {40, {{1e5, U, 0.72}, {1e8, U, 0.8}}},
    {50, {{1e5, U, 0.6}, {1e8, U, 0.62}}},
    {60,
     {{1e5, C, 1.22},
      {1.4e6, C, 1.147},
      {1.72e6, C, 1.105},
      {1.8e6, C, 1.1},
      {3.55e6, C, 1.03},
      {7e6, C, 1.1},
      {7.33e6, C, 1.105},
      {1e7, C, 1.16},
      {3e7, C, 1.25},
      {1e8, C, 1.25}}},
    {70,
     {{1e5, C, 0.8},
      {9e6, C, 0.86},
      {1.127e7, C, 0.883},
      {1.18e7, C, 0.9},
      {2e7, C, 1.1},
      {2.095e7, C, 1.117},
      {2.5e7, C, 1.17},
      {1e8, C, 1.17}}},
    {80,
     {{1e5, C, 0.64},
      {1.9e7, C, 0.8},
      {2.74e7, C, 0.887},
      {3e7, C, 0.9},
      {6e7, C, 1.0},
      {1e8, C, 1.02}}},
    {90, {{1e5, C, 0.5}, {3e7, C, 0.55}, {1e8, C, 0.8}}},
};

constexpr int kStorePoints = 601;  // 200 points per decade

}  // namespace

std::vector<TissueModel> reference_tissue_library() {
    std::vector<TissueModel> out;
    for (const TissueSpec& spec : kTissueSpecs) {
        TissueModel model;
        model.tissue_id = spec.id;
        model.source_label = spec.label;
        model.params.eps_inf = spec.eps_inf;
        model.params.sigma_ionic = spec.sigma_ionic;
        for (const PoleSpec& p : spec.poles)
            model.params.poles.push_back({p.delta_eps, 1.0 / (2.0 * M_PI * p.fc_hz), p.alpha});
        model.params.validate();
        out.push_back(std::move(model));
    }
    return out;
}

const std::vector<ReferenceBand>& reference_schedule() {
    static const std::vector<ReferenceBand> schedule = {
        {TissueId::cortical_bone, Method::oil_kerosene, 70, Property::conductivity, 4.2, 11},
        {TissueId::cortical_bone, Method::oil_only, 60, Property::conductivity, 5.9, 100},
        {TissueId::bone_marrow, Method::oil_only, 80, Property::conductivity, 12.8, 100},
        {TissueId::skin_dry, Method::oil_only, 30, Property::conductivity, 7, 9},
        {TissueId::skin_dry, Method::oil_only, 20, Property::conductivity, 10, 14.5},
        {TissueId::fat, Method::oil_kerosene, 80, Property::conductivity, 11, 100},
        {TissueId::cortical_bone, Method::oil_kerosene, 60, Property::permittivity, 1.8, 7},
        {TissueId::cortical_bone, Method::oil_kerosene, 70, Property::permittivity, 11.8, 20},
        {TissueId::cortical_bone, Method::oil_kerosene, 80, Property::permittivity, 30, 100},
        {TissueId::bone_marrow, Method::oil_only, 90, Property::permittivity, 1.8, 25},
        {TissueId::skin_dry, Method::oil_only, 10, Property::permittivity, 25, 33.7},
        {TissueId::skin_dry, Method::oil_only, 10, Property::permittivity, 42, 58},
        {TissueId::skin_dry, Method::oil_only, 20, Property::permittivity, 58.4, 90},
        {TissueId::skin_dry, Method::oil_only, 30, Property::permittivity, 93, 100},
        {TissueId::skin_wet, Method::oil_only, 10, Property::permittivity, 11.9, 16.8},
        {TissueId::skin_wet, Method::oil_kerosene, 20, Property::permittivity, 24, 38},
        {TissueId::skin_wet, Method::oil_only, 30, Property::permittivity, 38, 71},
        {TissueId::skin_wet, Method::oil_only, 40, Property::permittivity, 73, 100},
        {TissueId::fat, Method::oil_only, 90, Property::permittivity, 2.3, 11.5},
        {TissueId::muscle, Method::oil_only, 30, Property::permittivity, 24, 54},
        {TissueId::muscle, Method::oil_kerosene, 30, Property::permittivity, 39, 100},
    };
    return schedule;
}

const std::vector<ReferenceBand>& reference_extras() {
    static const std::vector<ReferenceBand> extras = {
        {TissueId::skin_wet, Method::oil_only, 20, Property::permittivity, 17.880, 21.413},
        {TissueId::muscle, Method::oil_only, 40, Property::permittivity, 69.039, 82.751},
    };
    return extras;
}

namespace {

class CurveBuilder {
public:
    explicit CurveBuilder(const std::vector<TissueModel>& library) {
        grid_ = FrequencyGrid::log_spaced(FrequencyGrid::kDefaultMinHz,
                                          FrequencyGrid::kDefaultMaxHz, kStorePoints);
        for (const auto& t : library) spectra_[t.tissue_id] = tissue_spectrum(t, grid_);
    }

    const FrequencyGrid& grid() const { return grid_; }

    double tissue_value(TissueId id, Property prop, double f) const {
        const auto& spec = spectra_.at(id);
        return interp_loglog(grid_.points(), spec.values(prop), f);
    }

    std::vector<double> evaluate(const CurveProgram& prog, Property prop) const {
        const auto& pts = prog.points;
        if (pts.size() < 2 || pts.front().f_hz > grid_.front() || pts.back().f_hz < grid_.back())
            throw std::logic_error("curve program does not span the storage grid");
        std::vector<double> out(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const double f = grid_[i];
            std::size_t k = 0;
            while (k + 1 < pts.size() && pts[k + 1].f_hz < f) ++k;
            const Waypoint& a = pts[k];
            const Waypoint& b = pts[k + 1];
            const double va = a.ratio * tissue_value(a.ref, prop, a.f_hz);
            const double t =
                (std::log(f) - std::log(a.f_hz)) / (std::log(b.f_hz) - std::log(a.f_hz));
            const double r0 = va / tissue_value(b.ref, prop, a.f_hz);
            const double r = r0 + t * (b.ratio - r0);
            out[i] = r * tissue_value(b.ref, prop, f);
        }
        return out;
    }

private:
    FrequencyGrid grid_;
    std::map<TissueId, DielectricSpectrum> spectra_;
};

}  // namespace

MaterialDatabase build_reference_database(const std::vector<TissueModel>& library) {
    CurveBuilder builder(library);
    MaterialDatabase db;
    struct MethodTables {
        Method method;
        const CurveProgram* sigma;
        const CurveProgram* eps;
    };
    const MethodTables tables[] = {
        {Method::oil_only, kSigmaOilOnly, kEpsOilOnly},
        {Method::oil_kerosene, kSigmaOilKerosene, kEpsOilKerosene},
    };
    for (const auto& mt : tables) {
        for (int k = 0; k < 9; ++k) {
            const CurveProgram& ps = mt.sigma[k];
            const CurveProgram& pe = mt.eps[k];
            if (ps.percent != pe.percent) throw std::logic_error("curve tables out of order");
            MaterialSample sample;
            sample.method = mt.method;
            sample.concentration = ps.percent / 100.0;
            sample.provenance = Provenance::synthetic;
            sample.spectrum.grid = builder.grid();
            sample.spectrum.conductivity = builder.evaluate(ps, Property::conductivity);
            sample.spectrum.rel_permittivity = builder.evaluate(pe, Property::permittivity);
            db.add(std::move(sample));
        }
    }
    return db;
}

}  // namespace phantom
