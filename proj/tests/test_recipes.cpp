#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "phantom/recipes.hpp"

using namespace phantom;

namespace {

double amount(const Recipe& r, IngredientId id) { return r.ingredient(id).amount; }

}  // namespace

TEST_CASE("tabulated oil-only columns") {
    Recipe r50 = grid_recipe(Method::oil_only, 0.50);
    CHECK(amount(r50, IngredientId::propylene_glycol) == 10.5);
    CHECK(amount(r50, IngredientId::deionized_water) == 169.0);
    CHECK(amount(r50, IngredientId::gelatin) == 26.95);
    CHECK(amount(r50, IngredientId::safflower_oil) == 175.0);
    CHECK(amount(r50, IngredientId::ultra_ivory) == 1.925);
    CHECK(amount(r50, IngredientId::formalin) == 1.323);

    Recipe r90 = grid_recipe(Method::oil_only, 0.90);
    CHECK(amount(r90, IngredientId::safflower_oil) == 1575.0);
    CHECK(amount(r90, IngredientId::ultra_ivory) == 17.325);
}

TEST_CASE("tabulated oil-kerosene columns") {
    Recipe r20 = grid_recipe(Method::oil_kerosene, 0.20);
    CHECK(amount(r20, IngredientId::p_toluic_acid) == 0.2);
    CHECK(r20.ingredient(IngredientId::p_toluic_acid).unit == "g");
    CHECK(amount(r20, IngredientId::deionized_water) == 190.0);
    CHECK(r20.ingredient(IngredientId::deionized_water).unit == "ml");
    CHECK(amount(r20, IngredientId::n_propanol) == 10.0);
    CHECK(amount(r20, IngredientId::gelatin) == 34.0);
    CHECK(amount(r20, IngredientId::oil_kerosene_mix) == 50.0);
    CHECK(amount(r20, IngredientId::ultra_ivory) == 2.8);
    CHECK(amount(r20, IngredientId::formalin) == 2.16);
}

TEST_CASE("non-tabulated concentrations are routed to interpolate_recipe") {
    CHECK_THROWS_WITH_AS(grid_recipe(Method::oil_only, 0.45),
                         doctest::Contains("interpolate_recipe"), std::invalid_argument);
}

TEST_CASE("interpolation knots reproduce the table") {
    for (int pct = 10; pct <= 90; pct += 10) {
        Recipe a = grid_recipe(Method::oil_only, pct / 100.0);
        Recipe b = interpolate_recipe(Method::oil_only, pct / 100.0);
        for (std::size_t i = 0; i < a.ingredients.size(); ++i)
            CHECK(a.ingredients[i].amount == b.ingredients[i].amount);
        CHECK_FALSE(b.interpolated);
    }
}

TEST_CASE("interpolated midpoint amounts") {
    Recipe r45 = interpolate_recipe(Method::oil_only, 0.45);
    CHECK(r45.interpolated);
    CHECK(amount(r45, IngredientId::safflower_oil) == doctest::Approx((116.7 + 175.0) / 2));
    CHECK(amount(r45, IngredientId::formalin) == doctest::Approx(1.323));  // constant row
    CHECK(amount(r45, IngredientId::deionized_water) == doctest::Approx(169.0));
    CHECK(amount(r45, IngredientId::gelatin) == doctest::Approx(26.95));
    CHECK(amount(r45, IngredientId::propylene_glycol) == doctest::Approx(10.5));
    CHECK_THROWS_AS(interpolate_recipe(Method::oil_only, 0.95), std::out_of_range);
    CHECK_THROWS_AS(interpolate_recipe(Method::oil_only, 0.05), std::out_of_range);
}

TEST_CASE("surfactant stays proportional to the oil across concentrations") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uc(0.10, 0.90);
    for (int pct = 10; pct <= 90; pct += 10) {
        Recipe r = grid_recipe(Method::oil_only, pct / 100.0);
        double ratio = amount(r, IngredientId::ultra_ivory) / amount(r, IngredientId::safflower_oil);
        CHECK(ratio >= 0.0110 - 1e-12);
        CHECK(ratio <= 0.0120 + 1e-12);
    }
    for (int k = 0; k < 200; ++k) {
        Recipe r = interpolate_recipe(Method::oil_only, uc(rng));
        double ratio = amount(r, IngredientId::ultra_ivory) / amount(r, IngredientId::safflower_oil);
        CHECK(ratio >= 0.0110 - 1e-12);
        CHECK(ratio <= 0.0120 + 1e-12);
    }
}

TEST_CASE("scaling") {
    Recipe r = grid_recipe(Method::oil_only, 0.50);
    SUBCASE("factor one is the identity") {
        Recipe s = scale_recipe(r, 1.0);
        for (std::size_t i = 0; i < r.ingredients.size(); ++i)
            CHECK(s.ingredients[i].amount == r.ingredients[i].amount);
    }
    SUBCASE("doubling") {
        Recipe s = scale_recipe(r, 2.0);
        CHECK(amount(s, IngredientId::safflower_oil) == doctest::Approx(350.0));
        CHECK(amount(s, IngredientId::gelatin) == doctest::Approx(53.9));
        CHECK(s.concentration == r.concentration);
    }
    SUBCASE("total-based scaling on a single-unit recipe") {
        CHECK(*r.total_amount() == doctest::Approx(384.698));
        Recipe s = scale_recipe_to_total(r, 769.396);
        CHECK(amount(s, IngredientId::safflower_oil) == doctest::Approx(350.0));
    }
    SUBCASE("mixed-unit recipes reject mass targets") {
        Recipe k = grid_recipe(Method::oil_kerosene, 0.30);
        CHECK_FALSE(k.total_amount().has_value());
        CHECK_THROWS_WITH_AS(scale_recipe_to_total(k, 500.0), doctest::Contains("units"),
                             std::invalid_argument);
    }
    SUBCASE("homogeneity: scale(a*b) == scale(scale(a), b)") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> uf(0.1, 5.0);
        for (int i = 0; i < 50; ++i) {
            double a = uf(rng), b = uf(rng);
            Recipe lhs = scale_recipe(r, a * b);
            Recipe rhs = scale_recipe(scale_recipe(r, a), b);
            for (std::size_t j = 0; j < lhs.ingredients.size(); ++j)
                CHECK(lhs.ingredients[j].amount ==
                      doctest::Approx(rhs.ingredients[j].amount).epsilon(1e-12));
        }
    }
    SUBCASE("invalid factors") {
        CHECK_THROWS_AS(scale_recipe(r, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(scale_recipe(r, -1.0), std::invalid_argument);
    }
}

TEST_CASE("protocol structure") {
    Recipe r = grid_recipe(Method::oil_only, 0.50);
    CHECK(r.steps.size() == 12);
    for (std::size_t i = 0; i < r.steps.size(); ++i)
        CHECK(r.steps[i].index == static_cast<int>(i) + 1);
    // temperatures appear in the order 90, 50, 40, 34
    std::vector<double> temps;
    for (const auto& st : r.steps)
        if (st.target_temperature_c) temps.push_back(*st.target_temperature_c);
    REQUIRE(temps.size() >= 4);
    CHECK(temps.front() == 90.0);
    std::vector<double> distinct;
    for (double t : temps)
        if (distinct.empty() || distinct.back() != t) distinct.push_back(t);
    CHECK(distinct == std::vector<double>{90.0, 50.0, 40.0, 34.0});
    CHECK(r.cure_mold_hours >= 8.0);
    CHECK(r.cure_total_days >= 5);
}

TEST_CASE("oil-kerosene protocol references the oil and kerosene mix") {
    Recipe r = grid_recipe(Method::oil_kerosene, 0.40);
    CHECK(r.steps.size() == 12);
    bool mentions_mix = false;
    for (const auto& st : r.steps)
        if (st.instruction.find("kerosene") != std::string::npos) mentions_mix = true;
    CHECK(mentions_mix);
}

TEST_CASE("rendered output") {
    SUBCASE("markdown carries amounts and the interpolation banner") {
        std::string md = emit_protocol(interpolate_recipe(Method::oil_only, 0.45),
                                       RecipeFormat::markdown);
        CHECK(md.find("not validated") != std::string::npos);
        CHECK(md.find("145.85") != std::string::npos);  // interpolated safflower oil
        std::string md50 =
            emit_protocol(grid_recipe(Method::oil_only, 0.50), RecipeFormat::markdown);
        CHECK(md50.find("not validated") == std::string::npos);
        CHECK(md50.find("175 parts") != std::string::npos);
    }
    SUBCASE("json round-trips the ingredient list") {
        std::string js = emit_protocol(grid_recipe(Method::oil_kerosene, 0.20), RecipeFormat::json);
        CHECK(js.find("\"oil_kerosene_mix\"") != std::string::npos);
        CHECK(js.find("\"unit\": \"ml\"") != std::string::npos);
    }
    SUBCASE("unknown format string is a usage error") {
        CHECK_THROWS_AS(recipe_format_from_string("yaml"), std::invalid_argument);
    }
}
