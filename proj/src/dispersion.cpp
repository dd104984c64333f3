#include "phantom/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace phantom {

namespace {
using ordered_json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;
}  // namespace

const char* to_string(TissueId id) {
    switch (id) {
        case TissueId::skin_dry: return "skin_dry";
        case TissueId::skin_wet: return "skin_wet";
        case TissueId::muscle: return "muscle";
        case TissueId::fat: return "fat";
        case TissueId::cortical_bone: return "cortical_bone";
        case TissueId::bone_marrow: return "bone_marrow";
    }
    return "?";
}

TissueId tissue_from_string(const std::string& s) {
    for (TissueId id : kAllTissues)
        if (s == to_string(id)) return id;
    throw std::invalid_argument("unknown tissue_id '" + s + "'");
}

void ColeColeParams::validate() const {
    if (!(eps_inf >= 1.0) || !std::isfinite(eps_inf))
        throw std::invalid_argument("eps_inf must be >= 1");
    if (poles.empty() || poles.size() > 4)
        throw std::invalid_argument("pole list length must be between 1 and 4");
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const auto& p = poles[i];
        const std::string where = " at pole " + std::to_string(i + 1);
        if (!(p.delta_eps >= 0.0) || !std::isfinite(p.delta_eps))
            throw std::invalid_argument("delta_eps must be >= 0" + where);
        if (!(p.tau_s > 0.0) || !std::isfinite(p.tau_s))
            throw std::invalid_argument("tau must be > 0" + where);
        if (!(p.alpha >= 0.0 && p.alpha < 1.0))
            throw std::invalid_argument("alpha must be in [0, 1)" + where);
    }
    if (!(sigma_ionic >= 0.0) || !std::isfinite(sigma_ionic))
        throw std::invalid_argument("sigma_ionic must be >= 0");
}

DielectricPoint evaluate_point(const ColeColeParams& params, double f_hz) {
    params.validate();
    if (!(f_hz > 0.0) || !std::isfinite(f_hz))
        throw std::invalid_argument("frequency must be positive and finite");

    const double omega = 2.0 * kPi * f_hz;
    double eps_re = params.eps_inf;
    double eps_im = 0.0;  // dielectric-loss part only; ionic term handled below
    for (std::size_t i = 0; i < params.poles.size(); ++i) {
        const auto& p = params.poles[i];
        // (j*w*tau)^(1-alpha) on the principal branch.
        const double expo = 1.0 - p.alpha;
        const double mag = std::pow(omega * p.tau_s, expo);
        const double arg = expo * kPi / 2.0;
        const double re = 1.0 + mag * std::cos(arg);
        const double im = mag * std::sin(arg);
        const double denom = re * re + im * im;
        const double pole_re = p.delta_eps * re / denom;
        const double pole_im = -p.delta_eps * im / denom;
        if (!std::isfinite(pole_re) || !std::isfinite(pole_im))
            throw std::runtime_error("model evaluation produced a non-finite value at pole " +
                                     std::to_string(i + 1));
        eps_re += pole_re;
        eps_im += pole_im;
    }
    DielectricPoint out;
    out.rel_permittivity = eps_re;
    out.conductivity = params.sigma_ionic - omega * kVacuumPermittivity * eps_im;
    if (!std::isfinite(out.rel_permittivity) || !std::isfinite(out.conductivity))
        throw std::runtime_error("model evaluation produced a non-finite value");
    return out;
}

DielectricSpectrum tissue_spectrum(const TissueModel& model, const FrequencyGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("tissue_spectrum requires a non-empty grid");
    DielectricSpectrum spec;
    spec.grid = grid;
    spec.rel_permittivity.reserve(grid.size());
    spec.conductivity.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            DielectricPoint pt = evaluate_point(model.params, grid[i]);
            spec.rel_permittivity.push_back(pt.rel_permittivity);
            spec.conductivity.push_back(pt.conductivity);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(to_string(model.tissue_id)) + " at grid index " +
                                     std::to_string(i) + ": " + e.what());
        }
    }
    return spec;
}

namespace {

TissueModel parse_tissue_record(const ordered_json& rec) {
    static const std::set<std::string> allowed = {"tissue_id", "eps_inf", "poles",
                                                  "sigma_ionic", "source_label"};
    static const std::set<std::string> allowed_pole = {"delta_eps", "tau_s", "alpha"};
    for (auto it = rec.begin(); it != rec.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("unknown field '" + it.key() + "' in tissue record");
    for (const auto& key : allowed)
        if (key != "source_label" && !rec.contains(key))
            throw std::invalid_argument("missing field '" + key + "' in tissue record");

    TissueModel model;
    model.tissue_id = tissue_from_string(rec.at("tissue_id").get<std::string>());
    model.params.eps_inf = rec.at("eps_inf").get<double>();
    model.params.sigma_ionic = rec.at("sigma_ionic").get<double>();
    model.source_label = rec.value("source_label", std::string{});
    for (const auto& jp : rec.at("poles")) {
        for (auto it = jp.begin(); it != jp.end(); ++it)
            if (!allowed_pole.count(it.key()))
                throw std::invalid_argument("unknown field '" + it.key() + "' in pole of tissue " +
                                            std::string(to_string(model.tissue_id)));
        ColeColePole pole;
        pole.delta_eps = jp.at("delta_eps").get<double>();
        pole.tau_s = jp.at("tau_s").get<double>();
        pole.alpha = jp.at("alpha").get<double>();
        model.params.poles.push_back(pole);
    }
    try {
        model.params.validate();
    } catch (const std::exception& e) {
        throw std::invalid_argument("tissue " + std::string(to_string(model.tissue_id)) + ": " +
                                    e.what());
    }
    return model;
}

}  // namespace

std::vector<TissueModel> parse_tissue_library(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument(std::string("tissue library parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("tissues") || !doc.at("tissues").is_array())
        throw std::invalid_argument("tissue library must be an object with a 'tissues' array");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "tissues" && it.key() != "schema_version")
            throw std::invalid_argument("unknown field '" + it.key() + "' in tissue library");

    std::vector<TissueModel> out;
    std::set<TissueId> seen;
    for (const auto& rec : doc.at("tissues")) {
        TissueModel model = parse_tissue_record(rec);
        if (!seen.insert(model.tissue_id).second)
            throw std::invalid_argument("duplicate tissue_id '" +
                                        std::string(to_string(model.tissue_id)) + "'");
        out.push_back(std::move(model));
    }
    return out;
}

std::vector<TissueModel> load_tissue_library(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open tissue library file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tissue_library(ss.str());
}

const TissueModel& find_tissue(const std::vector<TissueModel>& library, TissueId id) {
    for (const auto& t : library)
        if (t.tissue_id == id) return t;
    throw std::invalid_argument("tissue '" + std::string(to_string(id)) + "' not in library");
}

}  // namespace phantom
