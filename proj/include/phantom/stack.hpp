#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phantom/matching.hpp"
#include "phantom/recipes.hpp"

namespace phantom {

// One concentric layer, innermost order by increasing outer radius.
struct Layer {
    std::string role;                  // tissue name or free label
    std::optional<TissueId> tissue;
    double outer_radius_mm = 0.0;
    std::optional<std::pair<Method, double>> material;
    std::optional<MatchBand> match;
    bool infeasible = false;           // no qualifying candidate; best effort
};

struct LayerStack {
    std::vector<Layer> layers;         // innermost -> outermost
    double length_mm = 0.0;
    std::pair<double, double> band_hz = {FrequencyGrid::kDefaultMinHz,
                                         FrequencyGrid::kDefaultMaxHz};
    std::string geometry_source;       // where the radii came from

    void validate() const;             // strictly increasing radii, length > 0
};

struct CompositeGeometry {
    double inner_radius_mm = 20.0;     // non-paper defaults, configurable
    double outer_radius_mm = 40.0;
    double length_mm = 120.0;
};

// Two-layer concentric cylinder: 20% oil-kerosene core enclosed by 60%.
LayerStack preset_composite(const CompositeGeometry& geom = {});

struct ArmGeometry {
    // innermost -> outermost: bone_marrow, cortical_bone, muscle, fat, skin
    std::vector<double> radii_mm = {7.0, 13.0, 34.0, 38.0, 41.0};
    double length_mm = 300.0;
    std::string source = "built-in defaults (not anatomical data)";
};

ArmGeometry load_arm_geometry(const std::filesystem::path& file);

// Five-layer arm: bone marrow, cortical bone, muscle, fat, skin (dry by
// default), materials unassigned.
LayerStack preset_arm(const ArmGeometry& geom = {}, bool wet_skin = false);

// Assign each tissue layer the top best_matches candidate for the stack's
// band; layers with no qualifying candidate get the lowest-error tabulated
// sample, flagged infeasible.
LayerStack assign_materials(LayerStack stack, const MaterialDatabase& db,
                            const std::vector<TissueModel>& library, Property property_priority,
                            double fmin_hz, double fmax_hz, const MatchOptions& opts = {});

struct FabricationStage {
    int layer_index;                   // 0-based into stack.layers
    std::string description;
    double cure_hours;
};

struct FabricationPlan {
    std::vector<FabricationStage> stages;   // innermost poured first
    double total_hours = 0.0;
    std::vector<Recipe> recipes;            // one per layer, same order
    std::string caveat;                     // layer-interface drift note
};

// One pour per layer with a cure wait after each; cure floor is 48 h per
// stage, overridable upward only.
FabricationPlan fabrication_plan(const LayerStack& stack, double cure_hours_per_stage = 48.0);

std::string stack_to_json(const LayerStack& stack);
std::string plan_to_json(const LayerStack& stack, const FabricationPlan& plan);
std::string plan_to_markdown(const LayerStack& stack, const FabricationPlan& plan);

}  // namespace phantom
