#include "phantom/materials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace phantom {

namespace {
using ordered_json = nlohmann::ordered_json;

constexpr double kConcentrationTol = 1e-9;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

const char* to_string(Method m) {
    return m == Method::oil_only ? "oil_only" : "oil_kerosene";
}

Method method_from_string(const std::string& s) {
    if (s == "oil_only") return Method::oil_only;
    if (s == "oil_kerosene") return Method::oil_kerosene;
    throw std::invalid_argument("unknown method '" + s + "'");
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::measured: return "measured";
        case Provenance::interpolated: return "interpolated";
        case Provenance::synthetic: return "synthetic";
    }
    return "?";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "measured") return Provenance::measured;
    if (s == "interpolated") return Provenance::interpolated;
    if (s == "synthetic") return Provenance::synthetic;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

void MaterialSample::validate() const {
    if (!(concentration >= 0.10 - kConcentrationTol && concentration <= 0.90 + kConcentrationTol))
        throw std::invalid_argument("concentration must be within [0.10, 0.90]");
    spectrum.validate();
    if (provenance == Provenance::measured) {
        if (!sample_thickness_mm)
            throw std::invalid_argument("measured sample requires sample_thickness_mm");
        if (*sample_thickness_mm > 3.0)
            throw std::invalid_argument("sample thickness exceeds the 3 mm fixture limit");
    }
}

void MaterialDatabase::add(MaterialSample sample) {
    sample.validate();
    for (const auto& s : samples_) {
        if (s.method == sample.method &&
            std::abs(s.concentration - sample.concentration) < kConcentrationTol &&
            s.provenance == Provenance::measured && sample.provenance == Provenance::measured &&
            s.measured_at == sample.measured_at) {
            throw std::invalid_argument(
                "duplicate measured sample for this method, concentration and date");
        }
    }
    samples_.push_back(std::move(sample));
}

std::vector<const MaterialSample*> MaterialDatabase::samples_for(Method m) const {
    std::map<long long, const MaterialSample*> by_conc;  // key: round(c * 1e6)
    for (const auto& s : samples_) {
        if (s.method != m) continue;
        long long key = std::llround(s.concentration * 1e6);
        auto it = by_conc.find(key);
        if (it == by_conc.end()) {
            by_conc[key] = &s;
        } else {
            const std::string cur = it->second->measured_at.value_or("");
            const std::string neu = s.measured_at.value_or("");
            if (neu >= cur) it->second = &s;
        }
    }
    std::vector<const MaterialSample*> out;
    out.reserve(by_conc.size());
    for (auto& [k, v] : by_conc) out.push_back(v);
    return out;
}

const MaterialSample* MaterialDatabase::find(Method m, double concentration) const {
    for (const auto* s : samples_for(m))
        if (std::abs(s->concentration - concentration) < kConcentrationTol) return s;
    return nullptr;
}

std::vector<double> MaterialDatabase::concentrations(Method m) const {
    std::vector<double> out;
    for (const auto* s : samples_for(m)) out.push_back(s->concentration);
    return out;
}

// ------------------------------------------------------------------ CSV I/O

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& s, std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("measurement CSV line " + std::to_string(line_no) +
                                 ": cannot parse " + what + " '" + s + "'");
    }
}

}  // namespace

MaterialSample ingest_measurement(std::istream& in, Method method, double concentration,
                                  const IngestMetadata& meta, const IngestOptions& opts,
                                  std::vector<std::string>* warnings) {
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("measurement CSV is empty (missing header)");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    auto cols = split_csv_line(header);
    if (cols.empty() || cols[0] != "frequency_hz")
        throw std::runtime_error("measurement CSV header must start with 'frequency_hz'");
    std::size_t n_eps = 0, n_sig = 0;
    for (std::size_t i = 1; i < cols.size(); ++i) {
        if (cols[i].rfind("rel_permittivity_", 0) == 0) {
            if (n_sig > 0)
                throw std::runtime_error(
                    "measurement CSV header: permittivity columns must precede conductivity");
            ++n_eps;
        } else if (cols[i].rfind("conductivity_s_per_m_", 0) == 0) {
            ++n_sig;
        } else {
            throw std::runtime_error("measurement CSV header: unknown column '" + cols[i] + "'");
        }
    }
    if (n_eps == 0 || n_eps != n_sig)
        throw std::runtime_error(
            "measurement CSV header needs matching rel_permittivity_i/conductivity_s_per_m_i "
            "replicate columns");

    std::vector<double> freqs, eps, sig;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 1 + n_eps + n_sig)
            throw std::runtime_error("measurement CSV line " + std::to_string(line_no) + ": got " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(1 + n_eps + n_sig));
        double f = parse_number(fields[0], line_no, "frequency");
        if (!freqs.empty() && f <= freqs.back())
            throw std::runtime_error("measurement CSV line " + std::to_string(line_no) +
                                     ": frequencies not strictly increasing");
        const bool in_band = f >= opts.fmin_hz && f <= opts.fmax_hz;
        if (!in_band && warnings)
            warnings->push_back("row at " + fmt_double(f) + " Hz outside [" +
                                fmt_double(opts.fmin_hz) + ", " + fmt_double(opts.fmax_hz) +
                                "] Hz" + (opts.widen_bounds ? " (kept)" : " (dropped)"));
        if (!in_band && !opts.widen_bounds) continue;

        std::vector<double> row_eps(n_eps), row_sig(n_sig);
        for (std::size_t i = 0; i < n_eps; ++i)
            row_eps[i] = parse_number(fields[1 + i], line_no, "rel_permittivity");
        for (std::size_t i = 0; i < n_sig; ++i)
            row_sig[i] = parse_number(fields[1 + n_eps + i], line_no, "conductivity");
        for (double v : row_sig)
            if (!(v > 0.0))
                throw std::runtime_error("measurement CSV line " + std::to_string(line_no) +
                                         ": conductivity must be positive");
        auto combine = [&](std::vector<double> vals) {
            if (!opts.use_median) {
                double sum = 0.0;
                for (double v : vals) sum += v;
                return sum / static_cast<double>(vals.size());
            }
            std::sort(vals.begin(), vals.end());
            std::size_t n = vals.size();
            return n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
        };
        freqs.push_back(f);
        eps.push_back(combine(row_eps));
        sig.push_back(combine(row_sig));
    }
    if (freqs.size() < 3)
        throw std::runtime_error("measurement CSV needs at least 3 frequency rows, got " +
                                 std::to_string(freqs.size()));

    MaterialSample sample;
    sample.method = method;
    sample.concentration = concentration;
    sample.provenance = meta.provenance;
    sample.measured_at = meta.measured_at;
    sample.sample_thickness_mm = meta.sample_thickness_mm;
    const double lo = opts.widen_bounds ? freqs.front() : opts.fmin_hz;
    const double hi = opts.widen_bounds ? freqs.back() : opts.fmax_hz;
    sample.spectrum.grid = FrequencyGrid(std::move(freqs), lo, hi);
    sample.spectrum.rel_permittivity = std::move(eps);
    sample.spectrum.conductivity = std::move(sig);
    sample.validate();
    return sample;
}

MaterialSample ingest_measurement_file(const std::filesystem::path& file, Method method,
                                       double concentration, const IngestMetadata& meta,
                                       const IngestOptions& opts,
                                       std::vector<std::string>* warnings) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open measurement file " + file.string());
    return ingest_measurement(in, method, concentration, meta, opts, warnings);
}

// ------------------------------------------------------------- db directory

namespace {

std::string sample_filename(const MaterialSample& s) {
    char buf[96];
    int pct = static_cast<int>(std::lround(s.concentration * 100));
    if (s.measured_at)
        std::snprintf(buf, sizeof buf, "%s_%02d_%s.csv", to_string(s.method), pct,
                      s.measured_at->c_str());
    else
        std::snprintf(buf, sizeof buf, "%s_%02d.csv", to_string(s.method), pct);
    return buf;
}

void write_sample_csv(const std::filesystem::path& path, const DielectricSpectrum& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "frequency_hz,rel_permittivity_1,conductivity_s_per_m_1\n";
    for (std::size_t i = 0; i < spec.grid.size(); ++i)
        out << fmt_double(spec.grid[i]) << ',' << fmt_double(spec.rel_permittivity[i]) << ','
            << fmt_double(spec.conductivity[i]) << '\n';
}

}  // namespace

void MaterialDatabase::save_dir(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    ordered_json manifest;
    manifest["schema_version"] = schema_version_;
    manifest["samples"] = ordered_json::array();
    for (const auto& s : samples_) {
        ordered_json rec;
        rec["method"] = to_string(s.method);
        rec["concentration"] = s.concentration;
        rec["provenance"] = to_string(s.provenance);
        if (s.measured_at) rec["measured_at"] = *s.measured_at;
        if (s.sample_thickness_mm) rec["sample_thickness_mm"] = *s.sample_thickness_mm;
        rec["file"] = sample_filename(s);
        manifest["samples"].push_back(rec);
        write_sample_csv(dir / sample_filename(s), s.spectrum);
    }
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << '\n';
}

MaterialDatabase MaterialDatabase::load_dir(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in)
        throw std::runtime_error("no manifest.json in database directory " + dir.string());
    ordered_json manifest;
    try {
        in >> manifest;
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error(std::string("manifest.json parse error: ") + e.what());
    }
    MaterialDatabase db;
    db.schema_version_ = manifest.value("schema_version", 1);
    if (db.schema_version_ != kSchemaVersion)
        throw std::runtime_error("unsupported database schema_version " +
                                 std::to_string(db.schema_version_));
    for (const auto& rec : manifest.at("samples")) {
        Method method = method_from_string(rec.at("method").get<std::string>());
        double conc = rec.at("concentration").get<double>();
        IngestMetadata meta;
        meta.provenance = provenance_from_string(rec.at("provenance").get<std::string>());
        if (rec.contains("measured_at")) meta.measured_at = rec.at("measured_at").get<std::string>();
        if (rec.contains("sample_thickness_mm"))
            meta.sample_thickness_mm = rec.at("sample_thickness_mm").get<double>();
        IngestOptions opts;
        opts.widen_bounds = true;  // stored data is trusted; bounds were applied on ingest
        db.add(ingest_measurement_file(dir / rec.at("file").get<std::string>(), method, conc,
                                       meta, opts));
    }
    return db;
}

// ------------------------------------------------------------- operations

std::vector<MonotoneViolation> validate_monotone_in_concentration(const MaterialDatabase& db,
                                                                  Method method,
                                                                  const FrequencyGrid& grid) {
    auto samples = db.samples_for(method);
    if (samples.size() < 2)
        throw std::invalid_argument("monotonicity check needs at least 2 concentrations");
    std::vector<DielectricSpectrum> specs;
    specs.reserve(samples.size());
    for (const auto* s : samples) specs.push_back(resample(s->spectrum, grid));

    std::vector<MonotoneViolation> out;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (specs[k + 1].conductivity[i] > specs[k].conductivity[i])
                out.push_back({grid[i], samples[k]->concentration, samples[k + 1]->concentration,
                               Property::conductivity, specs[k].conductivity[i],
                               specs[k + 1].conductivity[i]});
            if (specs[k + 1].rel_permittivity[i] > specs[k].rel_permittivity[i])
                out.push_back({grid[i], samples[k]->concentration, samples[k + 1]->concentration,
                               Property::permittivity, specs[k].rel_permittivity[i],
                               specs[k + 1].rel_permittivity[i]});
        }
    }
    return out;
}

MaterialSample interpolate_spectrum(const MaterialDatabase& db, Method method,
                                    double concentration, const FrequencyGrid& grid) {
    auto samples = db.samples_for(method);
    if (samples.size() < 2)
        throw std::invalid_argument("interpolation needs at least 2 tabulated concentrations");
    const double cmin = samples.front()->concentration;
    const double cmax = samples.back()->concentration;
    if (concentration < cmin - kConcentrationTol || concentration > cmax + kConcentrationTol)
        throw std::out_of_range("concentration " + std::to_string(concentration) +
                                " outside tabulated range [" + std::to_string(cmin) + ", " +
                                std::to_string(cmax) + "]");

    MaterialSample out;
    out.method = method;
    out.concentration = concentration;
    out.provenance = Provenance::interpolated;

    // knot reproduction: exact stored spectrum (resampled) at tabulated points
    for (const auto* s : samples) {
        if (std::abs(s->concentration - concentration) < kConcentrationTol) {
            out.spectrum = resample(s->spectrum, grid);
            return out;
        }
    }

    std::size_t hi = 1;
    while (hi < samples.size() && samples[hi]->concentration < concentration) ++hi;
    const MaterialSample* a = samples[hi - 1];
    const MaterialSample* b = samples[hi];
    DielectricSpectrum sa = resample(a->spectrum, grid);
    DielectricSpectrum sb = resample(b->spectrum, grid);
    const double t = (concentration - a->concentration) / (b->concentration - a->concentration);

    out.spectrum.grid = grid;
    out.spectrum.rel_permittivity.reserve(grid.size());
    out.spectrum.conductivity.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.spectrum.rel_permittivity.push_back(
            std::exp(std::log(sa.rel_permittivity[i]) +
                     t * (std::log(sb.rel_permittivity[i]) - std::log(sa.rel_permittivity[i]))));
        out.spectrum.conductivity.push_back(
            std::exp(std::log(sa.conductivity[i]) +
                     t * (std::log(sb.conductivity[i]) - std::log(sa.conductivity[i]))));
    }
    out.validate();
    return out;
}

AgingReport aging_drift(const MaterialSample& a, const MaterialSample& b) {
    if (a.method != b.method ||
        std::abs(a.concentration - b.concentration) > kConcentrationTol)
        throw std::invalid_argument("aging_drift requires the same method and concentration");
    AgingReport report;
    report.grid = a.spectrum.grid;
    DielectricSpectrum sb = resample(b.spectrum, report.grid);
    report.delta_conductivity.reserve(report.grid.size());
    report.delta_rel_permittivity.reserve(report.grid.size());
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        double ds = (sb.conductivity[i] - a.spectrum.conductivity[i]) / a.spectrum.conductivity[i];
        double de = (sb.rel_permittivity[i] - a.spectrum.rel_permittivity[i]) /
                    a.spectrum.rel_permittivity[i];
        report.delta_conductivity.push_back(ds);
        report.delta_rel_permittivity.push_back(de);
        report.max_abs_delta =
            std::max({report.max_abs_delta, std::abs(ds), std::abs(de)});
    }
    return report;
}

}  // namespace phantom
