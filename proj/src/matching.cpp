#include "phantom/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace phantom {

namespace {
using ordered_json = nlohmann::ordered_json;

// Table-style MHz formatting: 3 significant digits.
std::string mhz_3sig(double f_hz) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", f_hz / 1e6);
    return buf;
}

std::string err_str(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", e);
    return buf;
}

double log_coverage(double fmin, double fmax, double lo, double hi) {
    const double a = std::max(fmin, lo);
    const double b = std::min(fmax, hi);
    if (!(b > a)) return 0.0;
    return std::log10(b / a);
}

}  // namespace

std::vector<double> relative_error_curve(const DielectricSpectrum& sample,
                                         const DielectricSpectrum& tissue, Property property) {
    if (!(sample.grid == tissue.grid))
        throw std::invalid_argument("relative_error_curve requires identical grids; resample first");
    const auto& xs = sample.values(property);
    const auto& xt = tissue.values(property);
    std::vector<double> err(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xt[i] == 0.0)
            throw std::domain_error("tissue value is zero at grid index " + std::to_string(i));
        err[i] = std::abs(xs[i] - xt[i]) / xt[i];
    }
    return err;
}

std::vector<Band> find_bands(const FrequencyGrid& grid, const std::vector<double>& error_curve,
                             double threshold) {
    if (grid.size() != error_curve.size())
        throw std::invalid_argument("error curve length does not match grid");
    if (grid.size() < 2)
        throw std::invalid_argument("find_bands needs a curve on at least 2 grid points");
    std::vector<Band> bands;
    const std::size_t n = grid.size();
    std::size_t i = 0;
    while (i < n) {
        if (!(error_curve[i] < threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && error_curve[j + 1] < threshold) ++j;

        Band band;
        if (i == 0) {
            band.fmin_hz = grid[0];
        } else {
            // refine edge by linear interpolation of error in log f
            const double t = (threshold - error_curve[i - 1]) / (error_curve[i] - error_curve[i - 1]);
            band.fmin_hz =
                std::exp(std::log(grid[i - 1]) + t * (std::log(grid[i]) - std::log(grid[i - 1])));
        }
        if (j == n - 1) {
            band.fmax_hz = grid[n - 1];
        } else {
            const double t = (threshold - error_curve[j]) / (error_curve[j + 1] - error_curve[j]);
            band.fmax_hz =
                std::exp(std::log(grid[j]) + t * (std::log(grid[j + 1]) - std::log(grid[j])));
        }
        band.worst_error = 0.0;
        for (std::size_t k = i; k <= j; ++k)
            band.worst_error = std::max(band.worst_error, error_curve[k]);
        bands.push_back(band);
        i = j + 1;
    }
    return bands;
}

namespace {

// All qualifying bands of one sample against one tissue spectrum.
std::vector<MatchBand> sample_bands(const MaterialSample& sample,
                                    const DielectricSpectrum& tissue_spec, TissueId tissue,
                                    Property property, double threshold,
                                    const FrequencyGrid& grid) {
    DielectricSpectrum resampled = resample(sample.spectrum, grid);
    auto err = relative_error_curve(resampled, tissue_spec, property);
    std::vector<MatchBand> out;
    for (const Band& b : find_bands(grid, err, threshold)) {
        MatchBand mb;
        mb.tissue = tissue;
        mb.property = property;
        mb.method = sample.method;
        mb.concentration = sample.concentration;
        mb.fmin_hz = b.fmin_hz;
        mb.fmax_hz = b.fmax_hz;
        mb.worst_error = b.worst_error;
        out.push_back(mb);
    }
    return out;
}

}  // namespace

std::vector<MatchBand> best_matches(const MaterialDatabase& db, const TissueModel& tissue,
                                    Property property, double fmin_hz, double fmax_hz,
                                    std::size_t top_k, const MatchOptions& opts) {
    if (db.empty()) throw std::invalid_argument("best_matches requires a non-empty database");
    if (!(fmin_hz < fmax_hz)) throw std::invalid_argument("band requires fmin < fmax");
    if (fmin_hz < opts.grid.front() || fmax_hz > opts.grid.back())
        throw std::invalid_argument("requested band outside the evaluation grid bounds");

    DielectricSpectrum tissue_spec = tissue_spectrum(tissue, opts.grid);
    std::vector<MatchBand> candidates;
    for (Method m : {Method::oil_only, Method::oil_kerosene}) {
        for (const MaterialSample* s : db.samples_for(m)) {
            for (MatchBand& band : sample_bands(*s, tissue_spec, tissue.tissue_id, property,
                                                opts.threshold, opts.grid)) {
                if (band.fmax_hz > fmin_hz && band.fmin_hz < fmax_hz)
                    candidates.push_back(band);
            }
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const MatchBand& a, const MatchBand& b) {
                         const double ca = log_coverage(a.fmin_hz, a.fmax_hz, fmin_hz, fmax_hz);
                         const double cb = log_coverage(b.fmin_hz, b.fmax_hz, fmin_hz, fmax_hz);
                         if (ca != cb) return ca > cb;
                         if (a.worst_error != b.worst_error) return a.worst_error < b.worst_error;
                         if (a.concentration != b.concentration)
                             return a.concentration < b.concentration;
                         if (a.method != b.method) return a.method == Method::oil_only;
                         return a.fmin_hz < b.fmin_hz;
                     });
    if (top_k > 0 && candidates.size() > top_k) candidates.resize(top_k);
    return candidates;
}

const MatchReport::Group* MatchReport::find(TissueId tissue, Property property) const {
    for (const auto& g : groups)
        if (g.tissue == tissue && g.property == property) return &g;
    return nullptr;
}

MatchReport match_table(const MaterialDatabase& db, const std::vector<TissueModel>& library,
                        double threshold, const FrequencyGrid& grid) {
    if (db.empty() || library.empty())
        throw std::invalid_argument("match_table requires a non-empty database and library");
    MatchReport report;
    report.threshold = threshold;
    for (const TissueModel& tissue : library) {
        DielectricSpectrum tissue_spec = tissue_spectrum(tissue, grid);
        for (Property prop : {Property::conductivity, Property::permittivity}) {
            MatchReport::Group group;
            group.tissue = tissue.tissue_id;
            group.property = prop;
            for (Method m : {Method::oil_only, Method::oil_kerosene}) {
                for (const MaterialSample* s : db.samples_for(m)) {
                    auto bands =
                        sample_bands(*s, tissue_spec, tissue.tissue_id, prop, threshold, grid);
                    group.bands.insert(group.bands.end(), bands.begin(), bands.end());
                }
            }
            std::stable_sort(group.bands.begin(), group.bands.end(),
                             [](const MatchBand& a, const MatchBand& b) {
                                 if (a.fmin_hz != b.fmin_hz) return a.fmin_hz < b.fmin_hz;
                                 return a.concentration < b.concentration;
                             });
            report.groups.push_back(std::move(group));
        }
    }
    return report;
}

namespace {

std::string sample_label(const MatchBand& b) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d%% (%s)", static_cast<int>(std::lround(b.concentration * 100)),
                  b.method == Method::oil_only ? "Oil Only" : "Oil-Kerosene");
    return buf;
}

}  // namespace

std::string report_to_json(const MatchReport& report) {
    ordered_json doc;
    doc["threshold"] = report.threshold;
    ordered_json tissues = ordered_json::object();
    for (const auto& g : report.groups) {
        ordered_json bands = ordered_json::array();
        for (const auto& b : g.bands) {
            ordered_json jb;
            jb["method"] = to_string(b.method);
            jb["concentration"] = b.concentration;
            jb["fmin_mhz"] = mhz_3sig(b.fmin_hz);
            jb["fmax_mhz"] = mhz_3sig(b.fmax_hz);
            jb["worst_error"] = err_str(b.worst_error);
            bands.push_back(jb);
        }
        tissues[to_string(g.tissue)][to_string(g.property)] = bands;
    }
    doc["tissues"] = tissues;
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const MatchReport& report) {
    std::ostringstream out;
    out << "tissue,property,method,concentration,fmin_mhz,fmax_mhz,worst_error\n";
    for (const auto& g : report.groups)
        for (const auto& b : g.bands)
            out << to_string(g.tissue) << ',' << to_string(g.property) << ','
                << to_string(b.method) << ',' << b.concentration << ',' << mhz_3sig(b.fmin_hz)
                << ',' << mhz_3sig(b.fmax_hz) << ',' << err_str(b.worst_error) << '\n';
    return out.str();
}

std::string report_to_markdown(const MatchReport& report) {
    std::ostringstream out;
    out << "| Tissue | Property | Sample | Fmin (MHz) | Fmax (MHz) | Worst error |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& g : report.groups) {
        if (g.bands.empty()) {
            out << "| " << to_string(g.tissue) << " | " << to_string(g.property)
                << " | - | - | - | - |\n";
            continue;
        }
        for (const auto& b : g.bands)
            out << "| " << to_string(g.tissue) << " | " << to_string(g.property) << " | "
                << sample_label(b) << " | " << mhz_3sig(b.fmin_hz) << " | " << mhz_3sig(b.fmax_hz)
                << " | " << err_str(b.worst_error) << " |\n";
    }
    return out.str();
}

ConcentrationFit solve_concentration(const MaterialDatabase& db, Method method,
                                     const TissueModel& tissue, Property property,
                                     double fmin_hz, double fmax_hz, double threshold,
                                     const FrequencyGrid& grid) {
    auto concentrations = db.concentrations(method);
    if (concentrations.size() < 2)
        throw std::invalid_argument("solve_concentration needs at least 2 tabulated concentrations");
    if (!(fmin_hz < fmax_hz) || fmin_hz < grid.front() || fmax_hz > grid.back())
        throw std::invalid_argument("band outside the evaluation grid bounds");

    DielectricSpectrum tissue_spec = tissue_spectrum(tissue, grid);
    const auto& tissue_vals = tissue_spec.values(property);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= fmin_hz && grid[i] <= fmax_hz) idx.push_back(i);
    if (idx.empty()) throw std::invalid_argument("band contains no grid points");

    auto band_error = [&](double c) {
        MaterialSample s = interpolate_spectrum(db, method, c, grid);
        const auto& vals = s.spectrum.values(property);
        double worst = 0.0;
        for (std::size_t i : idx)
            worst = std::max(worst, std::abs(vals[i] - tissue_vals[i]) / tissue_vals[i]);
        return worst;
    };

    const double clo = concentrations.front();
    const double chi = concentrations.back();
    // golden-section search on [clo, chi]
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = clo, b = chi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = band_error(x1), f2 = band_error(x2);
    while (b - a > 1e-5) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = band_error(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = band_error(x2);
        }
    }
    ConcentrationFit fit;
    fit.concentration = 0.5 * (a + b);
    fit.worst_error = band_error(fit.concentration);
    // never worse than the best tabulated concentration
    for (double c : concentrations) {
        double e = band_error(c);
        if (e < fit.worst_error) {
            fit.worst_error = e;
            fit.concentration = c;
        }
    }
    fit.feasible = fit.worst_error < threshold;
    return fit;
}

}  // namespace phantom
