#include "phantom/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace phantom {

namespace {
using ordered_json = nlohmann::ordered_json;

constexpr int kColumns = 9;  // 10%..90%

struct IngredientRow {
    IngredientId id;
    const char* unit;
    double amounts[kColumns];
};

// Ingredient amounts per nominal concentration column, 10%..90%.
// The oil-only table prints a single unnamed unit; amounts are kept as
// dimensionless "parts", scalable but not convertible.
const IngredientRow kOilOnlyRows[] = {
    {IngredientId::propylene_glycol, "parts",
     {10.5, 10.5, 10.5, 10.5, 10.5, 10.5, 10.5, 10.5, 10.5}},
    {IngredientId::deionized_water, "parts", {169, 169, 169, 169, 169, 169, 169, 169, 169}},
    {IngredientId::gelatin, "parts",
     {26.95, 26.95, 26.95, 26.95, 26.95, 26.95, 26.95, 26.95, 26.95}},
    {IngredientId::safflower_oil, "parts",
     {19.4, 43.75, 75, 116.7, 175, 262.5, 408.3, 700, 1575}},
    {IngredientId::ultra_ivory, "parts",
     {0.2314, 0.48125, 0.825, 1.2837, 1.925, 2.8875, 4.4913, 7.7, 17.325}},
    {IngredientId::formalin, "parts",
     {1.323, 1.323, 1.323, 1.323, 1.323, 1.323, 1.323, 1.323, 1.323}},
};

const IngredientRow kOilKeroseneRows[] = {
    {IngredientId::p_toluic_acid, "g", {0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2}},
    {IngredientId::deionized_water, "ml", {190, 190, 190, 190, 190, 190, 190, 190, 190}},
    {IngredientId::n_propanol, "ml", {10, 10, 10, 10, 10, 10, 10, 10, 10}},
    {IngredientId::gelatin, "g", {34, 34, 34, 34, 34, 34, 34, 34, 34}},
    {IngredientId::oil_kerosene_mix, "ml", {22.2, 50, 85, 133.3, 200, 300, 466, 800, 1800}},
    {IngredientId::ultra_ivory, "g", {1.26, 2.8, 4.76, 7.46, 11.2, 13, 15, 17, 20}},
    {IngredientId::formalin, "g", {2.16, 2.16, 2.16, 2.16, 2.16, 2.16, 2.16, 2.16, 2.16}},
};

std::string amount_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string pct_str(double concentration) {
    double pct = concentration * 100.0;
    char buf[32];
    if (std::abs(pct - std::lround(pct)) < 1e-9)
        std::snprintf(buf, sizeof buf, "%d%%", static_cast<int>(std::lround(pct)));
    else
        std::snprintf(buf, sizeof buf, "%.4g%%", pct);
    return buf;
}

// The twelve preparation steps. The oil stage names the method's oil phase;
// amounts are inlined by emit_protocol.
std::vector<ProtocolStep> protocol_steps(const Recipe& r) {
    const bool ok = r.method == Method::oil_kerosene;
    const std::string oil_phase =
        ok ? "equal mix of kerosene and safflower oil" : "safflower oil";
    auto amt = [&](IngredientId id) {
        const Ingredient& ing = r.ingredient(id);
        return amount_str(ing.amount) + " " + ing.unit;
    };
    std::vector<ProtocolStep> steps;
    int i = 0;
    auto add = [&](std::string text, std::optional<double> temp = std::nullopt,
                   std::optional<std::string> dur = std::nullopt) {
        steps.push_back({++i, std::move(text), temp, dur});
    };
    if (!ok) {
        add("In a beaker, prepare a room-temperature solution of propylene glycol (" +
            amt(IngredientId::propylene_glycol) + ") and de-ionized water (" +
            amt(IngredientId::deionized_water) + ").");
    } else {
        add("In a beaker, prepare a room-temperature solution of de-ionized water (" +
            amt(IngredientId::deionized_water) + "), n-propanol (" +
            amt(IngredientId::n_propanol) + ") and p-toluic acid (" +
            amt(IngredientId::p_toluic_acid) + ").");
    }
    add("Slowly add gelatin (" + amt(IngredientId::gelatin) +
        ") while stirring so that no clumping occurs and a uniform slurry results.");
    add("Cover the beaker with plastic wrap held by a rubber band; punch a small hole so the "
        "pressure above the slurry stays atmospheric.");
    add("Place the beaker in a larger container of hot water, level at or above the top of the "
        "slurry.");
    add("Heat the water until the gelatin reaches about 90 \xC2\xB0"
        "C and turns transparent (molten gelatin); remove bubbles at the meniscus.",
        90.0);
    add("Move the beaker to a cold-water bath and cool the molten gelatin, while stirring, to 50 "
        "\xC2\xB0"
        "C.",
        50.0);
    add("Meanwhile heat the " + oil_phase + " (" +
        amt(ok ? IngredientId::oil_kerosene_mix : IngredientId::safflower_oil) + ") to 50 \xC2\xB0"
        "C.",
        50.0);
    add("Add the molten gelatin to the 50 \xC2\xB0"
        "C oil phase and mix vigorously, keeping the spoon below the surface.",
        50.0);
    add("Add the liquid surfactant (" + amt(IngredientId::ultra_ivory) +
        ") and keep stirring until the emulsion is nearly white and oil no longer separates.");
    add("Cool in the cold-water bath to 40 \xC2\xB0"
        "C and slowly add, with stirring, the formalin (" +
        amt(IngredientId::formalin) + ").",
        40.0);
    add("Continue cooling the emulsion to about 34 \xC2\xB0"
        "C and pour into molds.",
        34.0);
    add("Allow at least " + amount_str(r.cure_mold_hours) +
            " hours in the mold for the formaldehyde cross-linking of the gelatin; full curing "
            "takes at least " +
            std::to_string(r.cure_total_days) + " days.",
        std::nullopt, std::to_string(r.cure_total_days) + " days");
    return steps;
}

Recipe column_recipe(Method method, int column, double concentration) {
    Recipe r;
    r.method = method;
    r.concentration = concentration;
    if (method == Method::oil_only) {
        for (const auto& row : kOilOnlyRows)
            r.ingredients.push_back({row.id, row.amounts[column], row.unit});
    } else {
        for (const auto& row : kOilKeroseneRows)
            r.ingredients.push_back({row.id, row.amounts[column], row.unit});
    }
    r.cure_mold_hours = 8.0;
    r.cure_total_days = 5;
    r.steps = protocol_steps(r);
    return r;
}

}  // namespace

const char* to_string(IngredientId id) {
    switch (id) {
        case IngredientId::propylene_glycol: return "propylene_glycol";
        case IngredientId::deionized_water: return "deionized_water";
        case IngredientId::gelatin: return "gelatin";
        case IngredientId::safflower_oil: return "safflower_oil";
        case IngredientId::ultra_ivory: return "ultra_ivory";
        case IngredientId::formalin: return "formalin";
        case IngredientId::p_toluic_acid: return "p_toluic_acid";
        case IngredientId::n_propanol: return "n_propanol";
        case IngredientId::oil_kerosene_mix: return "oil_kerosene_mix";
    }
    return "?";
}

void Recipe::validate() const {
    const std::size_t expected = method == Method::oil_only ? 6 : 7;
    if (ingredients.size() != expected)
        throw std::invalid_argument("recipe ingredient set does not match the method");
    for (const auto& ing : ingredients)
        if (!(ing.amount > 0.0))
            throw std::invalid_argument(std::string("ingredient amount must be positive: ") +
                                        to_string(ing.id));
    if (cure_mold_hours < 8.0)
        throw std::invalid_argument("cure_mold_hours must be at least 8");
    if (cure_total_days < 5)
        throw std::invalid_argument("cure_total_days must be at least 5");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].index != static_cast<int>(i) + 1)
            throw std::invalid_argument("protocol step indices must be contiguous from 1");
        if (steps[i].target_temperature_c &&
            (*steps[i].target_temperature_c < 0.0 || *steps[i].target_temperature_c > 100.0))
            throw std::invalid_argument("protocol step temperature outside [0, 100] C");
    }
}

const Ingredient& Recipe::ingredient(IngredientId id) const {
    for (const auto& ing : ingredients)
        if (ing.id == id) return ing;
    throw std::invalid_argument(std::string("recipe has no ingredient ") + to_string(id));
}

std::optional<double> Recipe::total_amount() const {
    double sum = 0.0;
    for (const auto& ing : ingredients) {
        if (ing.unit != ingredients.front().unit) return std::nullopt;
        sum += ing.amount;
    }
    return sum;
}

bool is_tabulated_concentration(double concentration) {
    const double pct = concentration * 100.0;
    const double nearest = std::round(pct / 10.0) * 10.0;
    return std::abs(pct - nearest) < 1e-6 && nearest >= 10.0 && nearest <= 90.0;
}

Recipe grid_recipe(Method method, double concentration) {
    if (!is_tabulated_concentration(concentration))
        throw std::invalid_argument(
            "concentration is not a tabulated 10%-step column; use interpolate_recipe");
    const int column = static_cast<int>(std::lround(concentration * 10.0)) - 1;
    return column_recipe(method, column, concentration);
}

Recipe interpolate_recipe(Method method, double concentration) {
    if (concentration < 0.10 - 1e-9 || concentration > 0.90 + 1e-9)
        throw std::out_of_range("concentration outside [0.10, 0.90]");
    if (is_tabulated_concentration(concentration)) return grid_recipe(method, concentration);

    const int lo = static_cast<int>(std::floor(concentration * 10.0 + 1e-9)) - 1;
    Recipe a = column_recipe(method, lo, (lo + 1) * 0.10);
    Recipe b = column_recipe(method, lo + 1, (lo + 2) * 0.10);
    const double t = (concentration - a.concentration) / 0.10;

    Recipe out = a;
    out.concentration = concentration;
    out.interpolated = true;
    for (std::size_t i = 0; i < out.ingredients.size(); ++i)
        out.ingredients[i].amount =
            a.ingredients[i].amount + t * (b.ingredients[i].amount - a.ingredients[i].amount);
    out.steps = protocol_steps(out);
    out.validate();
    return out;
}

Recipe scale_recipe(const Recipe& recipe, double factor) {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    Recipe out = recipe;
    for (auto& ing : out.ingredients) ing.amount *= factor;
    out.steps = protocol_steps(out);
    return out;
}

Recipe scale_recipe_to_total(const Recipe& recipe, double target_total) {
    if (!(target_total > 0.0)) throw std::invalid_argument("target total must be positive");
    auto total = recipe.total_amount();
    if (!total)
        throw std::invalid_argument(
            "recipe mixes units (g and ml); total-based scaling is unavailable, use a factor");
    return scale_recipe(recipe, target_total / *total);
}

RecipeFormat recipe_format_from_string(const std::string& s) {
    if (s == "markdown") return RecipeFormat::markdown;
    if (s == "json") return RecipeFormat::json;
    throw std::invalid_argument("unknown recipe format '" + s + "'");
}

std::string emit_protocol(const Recipe& recipe, RecipeFormat format) {
    recipe.validate();
    if (format == RecipeFormat::json) {
        ordered_json doc;
        doc["method"] = to_string(recipe.method);
        doc["concentration"] = recipe.concentration;
        doc["interpolated"] = recipe.interpolated;
        doc["cure_mold_hours"] = recipe.cure_mold_hours;
        doc["cure_total_days"] = recipe.cure_total_days;
        doc["ingredients"] = ordered_json::array();
        for (const auto& ing : recipe.ingredients) {
            ordered_json ji;
            ji["name"] = to_string(ing.id);
            ji["amount"] = ing.amount;
            ji["unit"] = ing.unit;
            doc["ingredients"].push_back(ji);
        }
        doc["steps"] = ordered_json::array();
        for (const auto& st : recipe.steps) {
            ordered_json js;
            js["index"] = st.index;
            js["instruction"] = st.instruction;
            if (st.target_temperature_c) js["target_temperature_c"] = *st.target_temperature_c;
            if (st.duration) js["duration"] = *st.duration;
            doc["steps"].push_back(js);
        }
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "# " << pct_str(recipe.concentration) << " "
        << (recipe.method == Method::oil_only ? "oil-only" : "oil-kerosene") << " sample\n\n";
    if (recipe.interpolated)
        out << "> **Interpolated recipe — not validated.** Amounts are linear interpolations "
               "between the tabulated 10%-step columns; the chemistry between columns has not "
               "been tested.\n\n";
    out << "## Ingredients\n\n";
    for (const auto& ing : recipe.ingredients)
        out << "- " << to_string(ing.id) << ": " << amount_str(ing.amount) << " " << ing.unit
            << "\n";
    out << "\n## Preparation\n\n";
    for (const auto& st : recipe.steps)
        out << st.index << ". " << st.instruction << "\n";
    if (recipe.method == Method::oil_kerosene)
        out << "\nThe oil-kerosene preparation follows the same sequence as the oil-only one, "
               "with the oil stage using the 50/50 kerosene and safflower-oil mix; see the "
               "formulation source for full details.\n";
    out << "\nCure: at least " << amount_str(recipe.cure_mold_hours)
        << " h in the mold; allow " << recipe.cure_total_days
        << " days for cross-linking to complete before measurements.\n";
    return out.str();
}

}  // namespace phantom
