#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "phantom/matching.hpp"
#include "phantom/refdata.hpp"

using namespace phantom;

namespace {

struct Fixture {
    std::vector<TissueModel> library = reference_tissue_library();
    MaterialDatabase db = build_reference_database(library);
};

// brute-force sub-threshold intervals on a dense grid (index ranges)
std::vector<std::pair<std::size_t, std::size_t>> dense_runs(const std::vector<double>& err,
                                                            double thr) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    bool in_run = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        if (err[i] < thr && !in_run) {
            in_run = true;
            start = i;
        } else if (err[i] >= thr && in_run) {
            runs.push_back({start, i - 1});
            in_run = false;
        }
    }
    if (in_run) runs.push_back({start, err.size() - 1});
    return runs;
}

}  // namespace

TEST_CASE("reference dataset has 18 synthetic samples on the dense storage grid") {
    Fixture fx;
    CHECK(fx.db.samples().size() == 18);
    for (const auto& s : fx.db.samples()) {
        CHECK(s.provenance == Provenance::synthetic);
        CHECK(s.spectrum.grid.size() == 601);
        CHECK_NOTHROW(s.validate());
    }
    CHECK(fx.db.concentrations(Method::oil_only).size() == 9);
    CHECK(fx.db.concentrations(Method::oil_kerosene).size() == 9);
}

TEST_CASE("every scheduled band is recovered at its designed edges") {
    Fixture fx;
    FrequencyGrid grid = FrequencyGrid::default_grid();
    std::map<TissueId, DielectricSpectrum> tissue_specs;
    for (const auto& t : fx.library) tissue_specs[t.tissue_id] = tissue_spectrum(t, grid);

    for (const ReferenceBand& rb : reference_schedule()) {
        const MaterialSample* s = fx.db.find(rb.method, rb.percent / 100.0);
        REQUIRE(s);
        DielectricSpectrum rs = resample(s->spectrum, grid);
        auto err = relative_error_curve(rs, tissue_specs.at(rb.tissue), rb.property);
        auto bands = find_bands(grid, err, 0.10);
        bool found = false;
        for (const Band& b : bands) {
            if (std::abs(b.fmin_hz - rb.fmin_mhz * 1e6) / (rb.fmin_mhz * 1e6) < 0.0075 &&
                std::abs(b.fmax_hz - rb.fmax_mhz * 1e6) / (rb.fmax_mhz * 1e6) < 0.0075) {
                found = true;
                CHECK(b.worst_error < 0.10);
            }
        }
        INFO("band " << to_string(rb.tissue) << " " << rb.percent << "% "
                     << to_string(rb.method) << " " << to_string(rb.property) << " ("
                     << rb.fmin_mhz << ", " << rb.fmax_mhz << ") MHz");
        CHECK(found);
    }
}

TEST_CASE("full band inventory: schedule plus exactly the two documented extras") {
    Fixture fx;
    FrequencyGrid dense = FrequencyGrid::log_spaced(1e5, 1e8, 2001);
    std::map<TissueId, DielectricSpectrum> tissue_specs;
    for (const auto& t : fx.library) tissue_specs[t.tissue_id] = tissue_spectrum(t, dense);

    std::size_t total_bands = 0;
    for (const auto& s : fx.db.samples()) {
        DielectricSpectrum rs = resample(s.spectrum, dense);
        const int pct = static_cast<int>(std::lround(s.concentration * 100));
        for (const auto& t : fx.library) {
            for (Property prop : {Property::conductivity, Property::permittivity}) {
                auto err = relative_error_curve(rs, tissue_specs.at(t.tissue_id), prop);
                for (auto [i0, i1] : dense_runs(err, 0.10)) {
                    ++total_bands;
                    const double lo = dense[i0], hi = dense[i1];
                    bool sanctioned = false;
                    for (const ReferenceBand& rb : reference_schedule()) {
                        if (rb.tissue == t.tissue_id && rb.method == s.method &&
                            rb.percent == pct && rb.property == prop &&
                            lo > rb.fmin_mhz * 1e6 * 0.985 && hi < rb.fmax_mhz * 1e6 * 1.015)
                            sanctioned = true;
                    }
                    for (const ReferenceBand& rb : reference_extras()) {
                        if (rb.tissue == t.tissue_id && rb.method == s.method &&
                            rb.percent == pct && rb.property == prop &&
                            lo > rb.fmin_mhz * 1e6 * 0.98 && hi < rb.fmax_mhz * 1e6 * 1.02)
                            sanctioned = true;
                    }
                    INFO("band for " << pct << "% " << to_string(s.method) << " vs "
                                     << to_string(t.tissue_id) << " " << to_string(prop) << ": ("
                                     << lo / 1e6 << ", " << hi / 1e6 << ") MHz");
                    CHECK(sanctioned);
                }
            }
        }
    }
    // 21 scheduled + 2 extras
    CHECK(total_bands == reference_schedule().size() + reference_extras().size());
}

TEST_CASE("conductivity and permittivity decrease with concentration everywhere") {
    Fixture fx;
    for (Method m : {Method::oil_only, Method::oil_kerosene}) {
        auto report = validate_monotone_in_concentration(fx.db, m, FrequencyGrid::default_grid());
        CHECK(report.empty());
    }
}

TEST_CASE("bundled reference_db directory matches the generator") {
    const std::filesystem::path dir = std::filesystem::path(PHANTOM_DATA_DIR) / "reference_db";
    REQUIRE(std::filesystem::exists(dir / "manifest.json"));
    Fixture fx;
    MaterialDatabase loaded = MaterialDatabase::load_dir(dir);
    REQUIRE(loaded.samples().size() == fx.db.samples().size());
    for (const auto& s : fx.db.samples()) {
        const MaterialSample* l = loaded.find(s.method, s.concentration);
        REQUIRE(l);
        REQUIRE(l->spectrum.grid.size() == s.spectrum.grid.size());
        for (std::size_t i = 0; i < s.spectrum.grid.size(); ++i) {
            CHECK(l->spectrum.grid[i] == s.spectrum.grid[i]);
            CHECK(l->spectrum.conductivity[i] == s.spectrum.conductivity[i]);
            CHECK(l->spectrum.rel_permittivity[i] == s.spectrum.rel_permittivity[i]);
        }
    }
}
