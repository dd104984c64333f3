#include "phantom/stack.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace phantom {

namespace {
using ordered_json = nlohmann::ordered_json;

const char* kInterfaceCaveat =
    "Layer interfaces are poured sequentially; measured properties can shift slightly at the "
    "boundary between two concentrations while each layer core keeps its own values. Treat "
    "readings within a few millimetres of an interface with care.";

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void LayerStack::validate() const {
    if (layers.empty()) throw std::invalid_argument("stack needs at least one layer");
    if (!(length_mm > 0.0)) throw std::invalid_argument("stack length must be positive");
    double prev = 0.0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (!(layers[i].outer_radius_mm > 0.0))
            throw std::invalid_argument("layer outer radius must be positive");
        if (!(layers[i].outer_radius_mm > prev))
            throw std::invalid_argument("layer radii must be strictly increasing at layer " +
                                        std::to_string(i + 1));
        prev = layers[i].outer_radius_mm;
    }
    if (!(band_hz.first < band_hz.second))
        throw std::invalid_argument("stack band requires fmin < fmax");
}

LayerStack preset_composite(const CompositeGeometry& geom) {
    LayerStack stack;
    stack.length_mm = geom.length_mm;
    stack.geometry_source = "composite preset defaults (radii are not from measured geometry)";
    Layer inner;
    inner.role = "core";
    inner.outer_radius_mm = geom.inner_radius_mm;
    inner.material = {Method::oil_kerosene, 0.20};
    Layer outer;
    outer.role = "shell";
    outer.outer_radius_mm = geom.outer_radius_mm;
    outer.material = {Method::oil_kerosene, 0.60};
    stack.layers = {inner, outer};
    stack.validate();
    return stack;
}

ArmGeometry load_arm_geometry(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open arm geometry file " + file.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const ordered_json::parse_error& e) {
        throw std::runtime_error(std::string("arm geometry parse error: ") + e.what());
    }
    ArmGeometry geom;
    geom.radii_mm.clear();
    for (const auto& r : doc.at("radii_mm")) geom.radii_mm.push_back(r.get<double>());
    if (geom.radii_mm.size() != 5)
        throw std::runtime_error("arm geometry needs exactly 5 radii (innermost to outermost)");
    geom.length_mm = doc.at("length_mm").get<double>();
    geom.source = doc.value("source", file.string());
    return geom;
}

LayerStack preset_arm(const ArmGeometry& geom, bool wet_skin) {
    if (geom.radii_mm.size() != 5)
        throw std::invalid_argument("arm preset needs exactly 5 radii");
    LayerStack stack;
    stack.length_mm = geom.length_mm;
    stack.geometry_source = geom.source;
    const TissueId order[5] = {TissueId::bone_marrow, TissueId::cortical_bone, TissueId::muscle,
                               TissueId::fat, wet_skin ? TissueId::skin_wet : TissueId::skin_dry};
    for (int i = 0; i < 5; ++i) {
        Layer layer;
        layer.tissue = order[i];
        layer.role = to_string(order[i]);
        layer.outer_radius_mm = geom.radii_mm[static_cast<std::size_t>(i)];
        stack.layers.push_back(layer);
    }
    stack.validate();
    return stack;
}

LayerStack assign_materials(LayerStack stack, const MaterialDatabase& db,
                            const std::vector<TissueModel>& library, Property property_priority,
                            double fmin_hz, double fmax_hz, const MatchOptions& opts) {
    stack.validate();
    stack.band_hz = {fmin_hz, fmax_hz};
    for (Layer& layer : stack.layers) {
        if (!layer.tissue) {
            if (layer.material) continue;  // free-label layer with explicit material
            throw std::invalid_argument("layer '" + layer.role +
                                        "' has neither a tissue role nor a material");
        }
        const TissueModel& tissue = find_tissue(library, *layer.tissue);
        auto candidates = best_matches(db, tissue, property_priority, fmin_hz, fmax_hz, 1, opts);
        if (!candidates.empty()) {
            const MatchBand& top = candidates.front();
            layer.material = {top.method, top.concentration};
            layer.match = top;
            layer.infeasible = false;
        } else {
            // best effort: lowest worst error over the requested band among
            // all tabulated samples
            double best_err = 0.0;
            const MaterialSample* best = nullptr;
            DielectricSpectrum tissue_spec = tissue_spectrum(tissue, opts.grid);
            const auto& tissue_vals = tissue_spec.values(property_priority);
            for (Method m : {Method::oil_only, Method::oil_kerosene}) {
                for (const MaterialSample* s : db.samples_for(m)) {
                    DielectricSpectrum rs = resample(s->spectrum, opts.grid);
                    const auto& vals = rs.values(property_priority);
                    double worst = 0.0;
                    for (std::size_t i = 0; i < opts.grid.size(); ++i) {
                        if (opts.grid[i] < fmin_hz || opts.grid[i] > fmax_hz) continue;
                        worst = std::max(worst,
                                         std::abs(vals[i] - tissue_vals[i]) / tissue_vals[i]);
                    }
                    if (!best || worst < best_err) {
                        best = s;
                        best_err = worst;
                    }
                }
            }
            if (!best) throw std::invalid_argument("assign_materials requires a non-empty database");
            layer.material = {best->method, best->concentration};
            layer.match.reset();
            layer.infeasible = true;
        }
    }
    return stack;
}

FabricationPlan fabrication_plan(const LayerStack& stack, double cure_hours_per_stage) {
    stack.validate();
    if (cure_hours_per_stage < 48.0)
        throw std::invalid_argument(
            "cure below 48 h per stage is rejected; composite practice allows raising it only");
    FabricationPlan plan;
    plan.caveat = kInterfaceCaveat;
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const Layer& layer = stack.layers[i];
        if (!layer.material)
            throw std::invalid_argument("layer '" + layer.role +
                                        "' has no material; assign materials first");
        const auto [method, conc] = *layer.material;
        Recipe recipe = is_tabulated_concentration(conc) ? grid_recipe(method, conc)
                                                         : interpolate_recipe(method, conc);
        // the mold/cure floors of the recipe still apply per layer
        const double cure = std::max(cure_hours_per_stage, recipe.cure_mold_hours);
        FabricationStage stage;
        stage.layer_index = static_cast<int>(i);
        std::ostringstream desc;
        desc << "Pour layer " << (i + 1) << " (" << layer.role << ", "
             << num(conc * 100) << "% " << to_string(method) << ") to radius "
             << num(layer.outer_radius_mm) << " mm";
        if (i == 0)
            desc << " in the innermost mold";
        else
            desc << " around the cured previous layer";
        desc << "; cure " << num(cure) << " h before the next step.";
        stage.description = desc.str();
        stage.cure_hours = cure;
        plan.total_hours += cure;
        plan.stages.push_back(stage);
        plan.recipes.push_back(std::move(recipe));
    }
    return plan;
}

namespace {

ordered_json layer_json(const Layer& layer) {
    ordered_json jl;
    jl["role"] = layer.role;
    jl["outer_radius_mm"] = layer.outer_radius_mm;
    if (layer.material) {
        jl["method"] = to_string(layer.material->first);
        jl["concentration"] = layer.material->second;
    }
    if (layer.match) {
        jl["match_fmin_mhz"] = layer.match->fmin_hz / 1e6;
        jl["match_fmax_mhz"] = layer.match->fmax_hz / 1e6;
        jl["match_worst_error"] = layer.match->worst_error;
    }
    jl["infeasible"] = layer.infeasible;
    return jl;
}

}  // namespace

std::string stack_to_json(const LayerStack& stack) {
    ordered_json doc;
    doc["length_mm"] = stack.length_mm;
    doc["band_mhz"] = {stack.band_hz.first / 1e6, stack.band_hz.second / 1e6};
    doc["geometry_source"] = stack.geometry_source;
    doc["layers"] = ordered_json::array();
    for (const Layer& l : stack.layers) doc["layers"].push_back(layer_json(l));
    return doc.dump(2) + "\n";
}

std::string plan_to_json(const LayerStack& stack, const FabricationPlan& plan) {
    ordered_json doc = ordered_json::parse(stack_to_json(stack));
    doc["stages"] = ordered_json::array();
    for (const auto& st : plan.stages) {
        ordered_json js;
        js["layer_index"] = st.layer_index;
        js["description"] = st.description;
        js["cure_hours"] = st.cure_hours;
        doc["stages"].push_back(js);
    }
    doc["total_hours"] = plan.total_hours;
    doc["caveat"] = plan.caveat;
    return doc.dump(2) + "\n";
}

std::string plan_to_markdown(const LayerStack& stack, const FabricationPlan& plan) {
    std::ostringstream out;
    out << "# Multi-layer phantom build sheet\n\n";
    out << "Cylinder length: " << num(stack.length_mm) << " mm. Geometry: "
        << stack.geometry_source << ".\n\n";
    out << "| # | Layer | Outer radius (mm) | Material | Matched band (MHz) |\n";
    out << "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < stack.layers.size(); ++i) {
        const Layer& l = stack.layers[i];
        out << "| " << (i + 1) << " | " << l.role << " | " << num(l.outer_radius_mm) << " | ";
        if (l.material)
            out << num(l.material->second * 100) << "% " << to_string(l.material->first);
        else
            out << "-";
        out << " | ";
        if (l.match)
            out << num(l.match->fmin_hz / 1e6) << " - " << num(l.match->fmax_hz / 1e6);
        else if (l.infeasible)
            out << "none below threshold (best effort)";
        else
            out << "-";
        out << " |\n";
    }
    out << "\n## Pour and cure schedule\n\n";
    for (std::size_t i = 0; i < plan.stages.size(); ++i)
        out << (i + 1) << ". " << plan.stages[i].description << "\n";
    out << "\nTotal elapsed cure time: " << num(plan.total_hours) << " h.\n";
    out << "\n> " << plan.caveat << "\n";
    for (std::size_t i = 0; i < plan.recipes.size(); ++i) {
        out << "\n---\n\n## Layer " << (i + 1) << " recipe\n\n";
        out << emit_protocol(plan.recipes[i], RecipeFormat::markdown);
    }
    return out.str();
}

}  // namespace phantom
