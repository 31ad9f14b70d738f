/**
 * @file test_scenario.cpp
 * @brief Config parsing, the material database and scenario validation.
 */

#include <gtest/gtest.h>

#include <string>

#include "groundsound/scenario.hpp"

using namespace groundsound;

namespace {

const char* kMinimal = R"(
[ground]
material = wood
[object]
material = steel
radius = 0.01
drop_height = 0.15
[contact]
restitution = 0.5
[listening]
point = 0 0 0.2
)";

std::string scenario_path(const char* name)
{
    return std::string(GROUNDSOUND_SOURCE_DIR) + "/scenarios/" + name;
}

} // namespace

TEST(MaterialDb, ShipsTheEightDefaults)
{
    const auto db = MaterialDb::builtin();
    EXPECT_EQ(db.all().size(), 8u);
    for (const char* n : {"steel", "ceramics", "granite", "concrete", "wood", "plastic", "soil", "wax"})
        EXPECT_NE(db.find(n), nullptr) << n;
    const auto& soil = db.at("soil");
    EXPECT_EQ(soil.youngs_modulus, 4.0e7);
    EXPECT_EQ(soil.poisson, 0.25);
    EXPECT_EQ(soil.density, 1350.0);
    EXPECT_NE(db.find("SOIL"), nullptr);
    EXPECT_THROW(db.at("unobtainium"), ConfigError);
}

TEST(MaterialDb, DataFileMatchesBuiltinCopy)
{
    const auto file = MaterialDb::load(std::string(GROUNDSOUND_SOURCE_DIR) + "/data/materials.cfg");
    const auto builtin = MaterialDb::builtin();
    ASSERT_EQ(file.all().size(), builtin.all().size());
    for (std::size_t k = 0; k < file.all().size(); ++k) {
        EXPECT_EQ(file.all()[k].name, builtin.all()[k].name);
        EXPECT_EQ(file.all()[k].youngs_modulus, builtin.all()[k].youngs_modulus);
        EXPECT_EQ(file.all()[k].poisson, builtin.all()[k].poisson);
        EXPECT_EQ(file.all()[k].density, builtin.all()[k].density);
    }
}

TEST(Scenario, SteelWoodFile)
{
    const auto sc = load_scenario_file(scenario_path("steel_wood.cfg"));
    EXPECT_EQ(sc.object.name, "steel");
    EXPECT_EQ(sc.ground.name, "wood");
    EXPECT_EQ(sc.ball_radius, 0.01);
    ASSERT_TRUE(sc.drop_height.has_value());
    EXPECT_EQ(*sc.drop_height, 0.15);
    EXPECT_EQ(sc.restitution, 0.5);
    ASSERT_EQ(sc.listening_points.size(), 1u);
    EXPECT_EQ(sc.listening_points[0], (Vec3{0, 0, 0.2}));
    EXPECT_NEAR(sc.impact_speed(), 1.7152244751052266, 1e-12);
}

TEST(Scenario, AllShippedScenariosLoad)
{
    for (const char* f : {"steel_wood.cfg", "concrete_13_balls.cfg", "soil_steel.cfg", "granite_wax.cfg"})
        EXPECT_NO_THROW(load_scenario_file(scenario_path(f))) << f;
}

TEST(Scenario, EmptyListeningListRejected)
{
    std::string text = kMinimal;
    text.replace(text.find("point = 0 0 0.2"), 15, "");
    EXPECT_THROW(load_scenario(text), ConfigError);
}

TEST(Scenario, ListenerOnGroundRejected)
{
    EXPECT_THROW(load_scenario(kMinimal, MaterialDb::builtin(), {"listening.point=0 0 0"}), ConfigError);
}

TEST(Scenario, UnknownKeyAndSectionRejected)
{
    EXPECT_THROW(load_scenario(std::string(kMinimal) + "colour = red\n"), ConfigError);
    EXPECT_THROW(load_scenario(std::string(kMinimal) + "[extras]\nx = 1\n"), ConfigError);
}

TEST(Scenario, ParseErrorCarriesLineNumber)
{
    try {
        load_scenario("[ground]\nmaterial = wood\nthis line is broken\n");
        FAIL() << "expected a parse error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
}

TEST(Scenario, DropHeightAndVelocityAreExclusive)
{
    EXPECT_THROW(load_scenario(kMinimal, MaterialDb::builtin(), {"object.normal_velocity=2"}), ConfigError);
    const auto sc = load_scenario(std::string(kMinimal).replace(std::string(kMinimal).find("drop_height = 0.15"), 18,
                                                                 "normal_velocity = 2"));
    EXPECT_EQ(sc.impact_speed(), 2.0);
}

TEST(Scenario, RestitutionRange)
{
    EXPECT_THROW(load_scenario(kMinimal, MaterialDb::builtin(), {"contact.restitution=1.5"}), ConfigError);
}

TEST(Scenario, OverridesReplaceMaterialFields)
{
    const auto sc = load_scenario(kMinimal, MaterialDb::builtin(), {"ground.poisson=0.2", "ground.density=800"});
    EXPECT_EQ(sc.ground.poisson, 0.2);
    EXPECT_EQ(sc.ground.density, 800.0);
    EXPECT_EQ(sc.ground.youngs_modulus, 1.1e10);
}

TEST(Scenario, PhysicalViolationNamed)
{
    try {
        load_scenario(kMinimal, MaterialDb::builtin(), {"ground.poisson=0.6"});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("Poisson"), std::string::npos) << e.what();
    }
}

TEST(Scenario, MultipleImpacts)
{
    std::string text = kMinimal;
    text.insert(text.find("restitution"), "impact = 0.1 0 0 0.01 0.2\nimpact = -0.1 0 0 0.03 0.1\n");
    const auto sc = load_scenario(text);
    ASSERT_EQ(sc.impacts().size(), 2u);
    EXPECT_EQ(sc.impacts()[1].time, 0.03);
}
