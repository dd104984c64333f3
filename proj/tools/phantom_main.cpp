// phantom: inspect tissue spectra, match materials against tissues, generate
// fabrication recipes and multi-layer build plans.
//
// Exit codes: 0 success, 1 infeasible layers under --strict, 2 usage or data
// errors.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "phantom/dispersion.hpp"
#include "phantom/matching.hpp"
#include "phantom/recipes.hpp"
#include "phantom/refdata.hpp"
#include "phantom/stack.hpp"

namespace {

using phantom::FrequencyGrid;
using phantom::MaterialDatabase;
using phantom::Method;
using phantom::Property;
using phantom::TissueModel;
using ordered_json = nlohmann::ordered_json;

struct Config {
    std::string db_dir;
    std::string tissue_file;
    double fmin_mhz = 0.1;
    double fmax_mhz = 100.0;
    int grid_points = FrequencyGrid::kDefaultPoints;
    double threshold = 0.10;
    std::string format = "markdown";  // json | csv | markdown
};

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[44];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// precedence: flags > environment > config file (in the db directory) > defaults
void apply_config_file(Config& cfg) {
    if (cfg.db_dir.empty()) return;
    std::filesystem::path path = std::filesystem::path(cfg.db_dir) / "config.json";
    std::ifstream in(path);
    if (!in) return;
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error("config file " + path.string() + ": " + e.what());
    }
    if (doc.contains("tissue_library") && cfg.tissue_file.empty())
        cfg.tissue_file = doc["tissue_library"].get<std::string>();
    if (doc.contains("threshold")) cfg.threshold = doc["threshold"].get<double>();
    if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (g.contains("fmin_mhz")) cfg.fmin_mhz = g["fmin_mhz"].get<double>();
        if (g.contains("fmax_mhz")) cfg.fmax_mhz = g["fmax_mhz"].get<double>();
        if (g.contains("points")) cfg.grid_points = g["points"].get<int>();
    }
}

void apply_env(Config& cfg) {
    if (const char* v = std::getenv("PHANTOM_DB"); v && cfg.db_dir.empty()) cfg.db_dir = v;
    if (const char* v = std::getenv("PHANTOM_TISSUES"); v && cfg.tissue_file.empty())
        cfg.tissue_file = v;
    if (const char* v = std::getenv("PHANTOM_FORMAT"); v) cfg.format = v;
}

FrequencyGrid make_grid(const Config& cfg) {
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
        throw std::runtime_error("threshold must be in (0, 1)");
    return FrequencyGrid::log_spaced(cfg.fmin_mhz * 1e6, cfg.fmax_mhz * 1e6, cfg.grid_points);
}

std::vector<TissueModel> load_tissues(const Config& cfg) {
    if (cfg.tissue_file.empty()) return phantom::reference_tissue_library();
    return phantom::load_tissue_library(cfg.tissue_file);
}

MaterialDatabase load_db(const Config& cfg) {
    if (cfg.db_dir.empty())
        return phantom::build_reference_database(load_tissues(cfg));
    return MaterialDatabase::load_dir(cfg.db_dir);
}

bool parse_band(const std::string& s, double& fmin_mhz, double& fmax_mhz) {
    auto colon = s.find(':');
    if (colon == std::string::npos) return false;
    try {
        fmin_mhz = std::stod(s.substr(0, colon));
        fmax_mhz = std::stod(s.substr(colon + 1));
    } catch (const std::exception&) {
        return false;
    }
    return fmin_mhz > 0 && fmax_mhz > fmin_mhz;
}

int cmd_tissues(const Config& cfg, const std::string& only_tissue) {
    auto library = load_tissues(cfg);
    FrequencyGrid grid = make_grid(cfg);
    if (!only_tissue.empty()) {
        const TissueModel& t =
            phantom::find_tissue(library, phantom::tissue_from_string(only_tissue));
        auto spec = phantom::tissue_spectrum(t, grid);
        // single-tissue export uses the measurement CSV schema (re-ingestible)
        std::cout << "frequency_hz,rel_permittivity_1,conductivity_s_per_m_1\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            std::cout << fmt17(grid[i]) << ',' << fmt17(spec.rel_permittivity[i]) << ','
                      << fmt17(spec.conductivity[i]) << '\n';
        return 0;
    }
    std::vector<phantom::DielectricSpectrum> specs;
    std::cout << "frequency_hz";
    for (const auto& t : library) {
        specs.push_back(phantom::tissue_spectrum(t, grid));
        std::cout << ',' << to_string(t.tissue_id) << "_rel_permittivity" << ','
                  << to_string(t.tissue_id) << "_conductivity_s_per_m";
    }
    std::cout << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::cout << fmt17(grid[i]);
        for (const auto& s : specs)
            std::cout << ',' << fmt17(s.rel_permittivity[i]) << ',' << fmt17(s.conductivity[i]);
        std::cout << '\n';
    }
    return 0;
}

int cmd_match(const Config& cfg, const std::string& tissue, const std::string& property,
              const std::string& band, bool full_table, int top_k) {
    auto library = load_tissues(cfg);
    MaterialDatabase db = load_db(cfg);
    FrequencyGrid grid = make_grid(cfg);
    if (full_table) {
        auto report = phantom::match_table(db, library, cfg.threshold, grid);
        if (cfg.format == "json")
            std::cout << phantom::report_to_json(report);
        else if (cfg.format == "csv")
            std::cout << phantom::report_to_csv(report);
        else
            std::cout << phantom::report_to_markdown(report);
        return 0;
    }
    if (tissue.empty() || property.empty() || band.empty())
        throw std::runtime_error("match needs --tissue, --property and --band (or --table)");
    double fmin_mhz, fmax_mhz;
    if (!parse_band(band, fmin_mhz, fmax_mhz))
        throw std::runtime_error("--band must be fmin:fmax in MHz with fmin < fmax");
    const TissueModel& t = phantom::find_tissue(library, phantom::tissue_from_string(tissue));
    phantom::MatchOptions opts;
    opts.threshold = cfg.threshold;
    opts.grid = grid;
    auto matches = phantom::best_matches(db, t, phantom::property_from_string(property),
                                         fmin_mhz * 1e6, fmax_mhz * 1e6,
                                         static_cast<std::size_t>(top_k), opts);
    if (cfg.format == "json") {
        ordered_json doc = ordered_json::array();
        for (const auto& m : matches) {
            ordered_json jm;
            jm["method"] = to_string(m.method);
            jm["concentration"] = m.concentration;
            jm["fmin_mhz"] = m.fmin_hz / 1e6;
            jm["fmax_mhz"] = m.fmax_hz / 1e6;
            jm["worst_error"] = m.worst_error;
            doc.push_back(jm);
        }
        std::cout << doc.dump(2) << '\n';
    } else if (cfg.format == "csv") {
        std::cout << "method,concentration,fmin_mhz,fmax_mhz,worst_error\n";
        for (const auto& m : matches)
            std::cout << to_string(m.method) << ',' << fmt6(m.concentration) << ','
                      << fmt6(m.fmin_hz / 1e6) << ',' << fmt6(m.fmax_hz / 1e6) << ','
                      << fmt6(m.worst_error) << '\n';
    } else {
        if (matches.empty()) {
            std::cout << "No sample matches " << tissue << " " << property << " within "
                      << fmt6(cfg.threshold * 100) << "% on " << band << " MHz.\n";
        } else {
            std::cout << "| Rank | Sample | Band (MHz) | Worst error |\n|---|---|---|---|\n";
            int rank = 1;
            for (const auto& m : matches)
                std::cout << "| " << rank++ << " | " << fmt6(m.concentration * 100) << "% "
                          << to_string(m.method) << " | " << fmt6(m.fmin_hz / 1e6) << " - "
                          << fmt6(m.fmax_hz / 1e6) << " | " << fmt6(m.worst_error) << " |\n";
        }
    }
    return 0;
}

int cmd_recipe(const Config& cfg, const std::string& method_s, double concentration_pct,
               double factor, std::optional<double> total) {
    Method method = phantom::method_from_string(method_s);
    const double c = concentration_pct / 100.0;
    phantom::Recipe recipe = phantom::is_tabulated_concentration(c)
                                 ? phantom::grid_recipe(method, c)
                                 : phantom::interpolate_recipe(method, c);
    if (total) recipe = phantom::scale_recipe_to_total(recipe, *total);
    if (factor != 1.0) recipe = phantom::scale_recipe(recipe, factor);
    const auto fmt = cfg.format == "json" ? phantom::RecipeFormat::json
                                          : phantom::RecipeFormat::markdown;
    std::cout << phantom::emit_protocol(recipe, fmt);
    return 0;
}

int cmd_stack(const Config& cfg, const std::string& preset, const std::string& geometry_file,
              const std::string& property, const std::string& band, bool wet_skin, bool strict,
              double cure_hours) {
    phantom::LayerStack stack;
    if (preset == "composite") {
        stack = phantom::preset_composite();
    } else if (preset == "arm") {
        phantom::ArmGeometry geom;
        if (!geometry_file.empty()) geom = phantom::load_arm_geometry(geometry_file);
        stack = phantom::preset_arm(geom, wet_skin);
    } else {
        throw std::runtime_error("unknown preset '" + preset + "' (composite|arm)");
    }

    bool needs_assignment = false;
    for (const auto& l : stack.layers) needs_assignment |= !l.material.has_value();
    if (needs_assignment) {
        double fmin_mhz = cfg.fmin_mhz, fmax_mhz = cfg.fmax_mhz;
        if (!band.empty() && !parse_band(band, fmin_mhz, fmax_mhz))
            throw std::runtime_error("--band must be fmin:fmax in MHz with fmin < fmax");
        phantom::MatchOptions opts;
        opts.threshold = cfg.threshold;
        opts.grid = make_grid(cfg);
        stack = phantom::assign_materials(stack, load_db(cfg), load_tissues(cfg),
                                          phantom::property_from_string(property),
                                          fmin_mhz * 1e6, fmax_mhz * 1e6, opts);
    }
    auto plan = phantom::fabrication_plan(stack, cure_hours);
    if (cfg.format == "json")
        std::cout << phantom::plan_to_json(stack, plan);
    else
        std::cout << phantom::plan_to_markdown(stack, plan);
    bool any_infeasible = false;
    for (const auto& l : stack.layers) any_infeasible |= l.infeasible;
    if (any_infeasible) {
        std::cerr << "warning: some layers have no qualifying material below the threshold\n";
        if (strict) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tissue-mimicking phantom design toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    std::string flag_db, flag_tissues, flag_format;
    double flag_threshold = -1.0;
    app.add_option("--db", flag_db, "Material database directory");
    app.add_option("--tissues", flag_tissues, "Tissue parameter library (JSON)");
    app.add_option("--format", flag_format, "Output format: json|csv|markdown");
    app.add_option("--threshold", flag_threshold, "Matching error threshold, fraction in (0,1)");
    double flag_fmin = -1, flag_fmax = -1;
    int flag_points = -1;
    app.add_option("--fmin", flag_fmin, "Grid lower bound, MHz");
    app.add_option("--fmax", flag_fmax, "Grid upper bound, MHz");
    app.add_option("--points", flag_points, "Grid point count");

    auto* tissues_cmd = app.add_subcommand("tissues", "Export tissue spectra (plot-ready CSV)");
    std::string only_tissue;
    tissues_cmd->add_option("--tissue", only_tissue, "Limit to one tissue");

    auto* match_cmd = app.add_subcommand("match", "Rank materials against a tissue");
    std::string m_tissue, m_property, m_band;
    bool m_table = false;
    int m_topk = 0;
    match_cmd->add_option("--tissue", m_tissue, "Tissue id");
    match_cmd->add_option("--property", m_property, "conductivity|permittivity");
    match_cmd->add_option("--band", m_band, "Frequency band fmin:fmax in MHz");
    match_cmd->add_flag("--table", m_table, "Emit the full tissue x property band table");
    match_cmd->add_option("--top", m_topk, "Keep only the top K candidates");

    auto* recipe_cmd = app.add_subcommand("recipe", "Emit a fabrication recipe");
    std::string r_method;
    double r_concentration = 0.0, r_factor = 1.0;
    std::optional<double> r_total;
    recipe_cmd->add_option("--method", r_method, "oil_only|oil_kerosene")->required();
    recipe_cmd->add_option("--concentration", r_concentration, "Nominal concentration, percent")
        ->required();
    recipe_cmd->add_option("--factor", r_factor, "Scale every amount by this factor");
    recipe_cmd->add_option("--total", r_total,
                           "Scale to this total amount (single-unit recipes only)");

    auto* stack_cmd = app.add_subcommand("stack", "Plan a multi-layer phantom");
    std::string s_preset = "composite", s_geometry, s_property = "permittivity", s_band;
    bool s_wet = false, s_strict = false;
    double s_cure = 48.0;
    stack_cmd->add_option("--preset", s_preset, "composite|arm");
    stack_cmd->add_option("--geometry", s_geometry, "Arm geometry JSON file");
    stack_cmd->add_option("--property", s_property, "Property priority for assignment");
    stack_cmd->add_option("--band", s_band, "Band of interest fmin:fmax in MHz");
    stack_cmd->add_flag("--wet-skin", s_wet, "Use wet skin for the arm preset");
    stack_cmd->add_flag("--strict", s_strict, "Exit 1 when a layer is infeasible");
    stack_cmd->add_option("--cure-hours", s_cure, "Cure time per stage (>= 48)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        cfg.db_dir = flag_db;
        cfg.tissue_file = flag_tissues;
        apply_env(cfg);
        apply_config_file(cfg);
        if (!flag_format.empty()) cfg.format = flag_format;
        if (flag_threshold > 0) cfg.threshold = flag_threshold;
        if (flag_fmin > 0) cfg.fmin_mhz = flag_fmin;
        if (flag_fmax > 0) cfg.fmax_mhz = flag_fmax;
        if (flag_points > 0) cfg.grid_points = flag_points;
        if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "markdown")
            throw std::runtime_error("unknown format '" + cfg.format + "'");

        if (tissues_cmd->parsed()) return cmd_tissues(cfg, only_tissue);
        if (match_cmd->parsed())
            return cmd_match(cfg, m_tissue, m_property, m_band, m_table, m_topk);
        if (recipe_cmd->parsed())
            return cmd_recipe(cfg, r_method, r_concentration, r_factor, r_total);
        if (stack_cmd->parsed())
            return cmd_stack(cfg, s_preset, s_geometry, s_property, s_band, s_wet, s_strict,
                             s_cure);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
