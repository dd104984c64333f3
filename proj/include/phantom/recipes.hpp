#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phantom/materials.hpp"

namespace phantom {

enum class IngredientId {
    propylene_glycol,
    deionized_water,
    gelatin,
    safflower_oil,
    ultra_ivory,
    formalin,
    p_toluic_acid,
    n_propanol,
    oil_kerosene_mix,
};

const char* to_string(IngredientId id);

struct Ingredient {
    IngredientId id;
    double amount;
    std::string unit;   // "parts" (oil_only), or "g"/"ml" (oil_kerosene)
};

struct ProtocolStep {
    int index;                                   // contiguous from 1
    std::string instruction;
    std::optional<double> target_temperature_c;  // within [0, 100]
    std::optional<std::string> duration;
};

struct Recipe {
    Method method;
    double concentration = 0.0;
    std::vector<Ingredient> ingredients;
    std::vector<ProtocolStep> steps;
    double cure_mold_hours = 8.0;    // minimum time in the mold
    int cure_total_days = 5;         // cross-linking completion
    bool interpolated = false;       // amounts between tabulated columns

    void validate() const;
    const Ingredient& ingredient(IngredientId id) const;
    // Sum of amounts; only defined when every ingredient shares one unit.
    std::optional<double> total_amount() const;
};

// Tabulated concentrations are 0.10..0.90 in 0.10 steps.
bool is_tabulated_concentration(double concentration);

// Exact tabulated column lookup. Throws for non-tabulated concentrations,
// pointing the caller at interpolate_recipe.
Recipe grid_recipe(Method method, double concentration);

// Piecewise-linear ingredient amounts between bracketing columns; the result
// is flagged interpolated ("not validated" banner in rendered output).
Recipe interpolate_recipe(Method method, double concentration);

Recipe scale_recipe(const Recipe& recipe, double factor);
// Scale so the amounts sum to target_total. Only for single-unit recipes;
// mixed-unit recipes (g and ml) reject mass targets.
Recipe scale_recipe_to_total(const Recipe& recipe, double target_total);

enum class RecipeFormat { markdown, json };
RecipeFormat recipe_format_from_string(const std::string& s);

// Rendered, ordered step list with amounts inlined.
std::string emit_protocol(const Recipe& recipe, RecipeFormat format);

}  // namespace phantom
