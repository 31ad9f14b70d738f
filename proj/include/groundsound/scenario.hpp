/**
 * @file scenario.hpp
 * @brief Material database and scenario configuration ingestion.
 *
 * A scenario file has the sections [ground], [object], [contact],
 * [listening], [air], [output], [radiation] and [fdtd]; see
 * docs/scenario-format.md for the full key list. Only SI units are accepted.
 */

#ifndef GROUNDSOUND_SCENARIO_HPP
#define GROUNDSOUND_SCENARIO_HPP

#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kvfile.hpp"
#include "material.hpp"
#include "vec3.hpp"

namespace groundsound {

/// Standard gravity used to turn a drop height into an impact speed.
inline constexpr double kStandardGravity = 9.80665;

inline constexpr std::string_view kBuiltinMaterialText = R"(
[steel]
label = Stainless Steel
youngs_modulus = 1.965e11
poisson = 0.27
density = 7955

[ceramics]
label = Ceramics
youngs_modulus = 7.2e10
poisson = 0.19
density = 2700

[granite]
label = Granite
youngs_modulus = 5.07e10
poisson = 0.28
density = 2670

[concrete]
label = Concrete
youngs_modulus = 1.85e10
poisson = 0.20
density = 2250

[wood]
label = Wood (medium density fiberboard)
youngs_modulus = 1.1e10
poisson = 0.25
density = 750

[plastic]
label = Plastic (ABS)
youngs_modulus = 1.4e9
poisson = 0.35
density = 1070

[soil]
label = Soil
youngs_modulus = 4.0e7
poisson = 0.25
density = 1350

[wax]
label = Paraffin Wax
youngs_modulus = 5.57e7
poisson = 0.37
density = 786
)";

/// Ordered material list keyed by lowercase name.
class MaterialDb {
public:
    MaterialDb() = default;
    explicit MaterialDb(std::vector<Material> materials) : materials_(std::move(materials)) {}

    const std::vector<Material>& all() const { return materials_; }

    const Material* find(std::string_view key) const
    {
        const auto k = detail::lower(key);
        for (const auto& m : materials_)
            if (m.name == k)
                return &m;
        return nullptr;
    }

    const Material& at(std::string_view key) const
    {
        if (const auto* m = find(key))
            return *m;
        throw ConfigError("unknown material '" + std::string(key) + "'");
    }

    std::string label(std::string_view key) const
    {
        const auto it = labels_.find(detail::lower(key));
        return it == labels_.end() ? std::string(key) : it->second;
    }

    static MaterialDb parse(std::string_view text)
    {
        const auto doc = parse_kv(text);
        MaterialDb db;
        for (const auto& s : doc.sections) {
            check_keys(s, {"label", "youngs_modulus", "poisson", "density"});
            Material m;
            m.name = s.name;
            for (const char* key : {"youngs_modulus", "poisson", "density"})
                if (!s.find(key))
                    throw ConfigError(detail::at_line(s.line) + "material [" + s.name + "] is missing '" + key + "'");
            m.youngs_modulus = parse_number(*s.find("youngs_modulus"));
            m.poisson = parse_number(*s.find("poisson"));
            m.density = parse_number(*s.find("density"));
            m.validate();
            if (const auto* l = s.find("label"))
                db.labels_[m.name] = l->value;
            db.materials_.push_back(m);
        }
        return db;
    }

    static MaterialDb load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open material database '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    static MaterialDb builtin() { return parse(kBuiltinMaterialText); }

    /// Database named by $GROUNDSOUND_MATERIALS, or the built-in table.
    static MaterialDb from_environment()
    {
        if (const char* path = std::getenv("GROUNDSOUND_MATERIALS"); path && *path)
            return load(path);
        return builtin();
    }

private:
    std::vector<Material> materials_;
    std::map<std::string, std::string> labels_;
};

inline std::vector<Material> builtin_materials() { return MaterialDb::builtin().all(); }

struct ImpactSpec {
    Vec3 point;
    double time = 0.0;
    double normal_velocity = 0.0; // m/s, resolved
};

struct AirParams {
    double density = 1.2;       // kg/m^3
    double sound_speed = 343.0; // m/s
};

enum class DepositRule { Linear, Nearest };

struct RadiationOptions {
    double max_radius = 0.0;      // 0: automatic
    double radial_spacing = 0.0;  // 0: automatic
    double min_radius = 1e-4;
    double geometric_ratio = 1.05;
    int angular_samples = 4096;   // per ring, off-axis listeners only
    DepositRule deposit = DepositRule::Linear;
    bool ball_reflective = true;
    double analysis_rate = 0.0;   // Hz; 0: derived from the contact timescale
    double ramp_radius = 0.0;     // m; > 0 replaces the 1/r origin singularity by a volume-preserving ramp
};

struct OutputOptions {
    double sample_rate = 44100.0;
    double duration = 0.0; // 0: automatic window
    bool wav = true;
};

struct FdtdOptions {
    double spacing = 0.005;
    std::array<int, 3> cells{64, 64, 64};
    std::optional<Vec3> origin; // domain min corner; default centres x,y on the first impact, z = 0
    double alpha = 2e-6;
    int sponge_cells = 8;
    double courant = 0.9;
    double duration = 0.0; // 0: automatic
    bool solo_traces = true;
    int snapshot_every = 0; // 0: no snapshots
};

struct ScenarioConfig {
    Material ground;
    Material object;
    double ball_radius = 0.0;
    std::optional<double> drop_height;
    std::optional<double> normal_velocity;
    double restitution = 0.0;
    std::optional<double> contact_time; // overrides the Hertz estimate when set
    Vec3 impact_point;
    double impact_time = 0.0;
    std::vector<ImpactSpec> extra_impacts; // [contact] impact lines; replace the single impact when present
    std::vector<Vec3> listening_points;
    AirParams air;
    OutputOptions output;
    RadiationOptions radiation;
    FdtdOptions fdtd;

    double impact_speed() const
    {
        if (normal_velocity)
            return *normal_velocity;
        return std::sqrt(2.0 * kStandardGravity * drop_height.value_or(0.0));
    }

    std::vector<ImpactSpec> impacts() const
    {
        if (!extra_impacts.empty())
            return extra_impacts;
        return {ImpactSpec{impact_point, impact_time, impact_speed()}};
    }

    void validate() const
    {
        ground.validate();
        object.validate();
        if (!(ball_radius > 0.0))
            throw ConfigError("object radius must be positive");
        if (drop_height.has_value() == normal_velocity.has_value())
            throw ConfigError("exactly one of object.drop_height or object.normal_velocity must be given");
        if (drop_height && !(*drop_height > 0.0))
            throw ConfigError("object.drop_height must be positive");
        if (normal_velocity && !(*normal_velocity > 0.0))
            throw ConfigError("object.normal_velocity must be positive");
        if (!(restitution >= 0.0 && restitution <= 1.0))
            throw ConfigError("contact.restitution must lie in [0, 1]");
        if (contact_time && !(*contact_time > 0.0))
            throw ConfigError("contact.contact_time must be positive");
        if (listening_points.empty())
            throw ConfigError("at least one listening point is required");
        for (const auto& p : listening_points)
            if (!(p.z > 0.0))
                throw ConfigError("listening points must lie strictly above the ground plane z = 0");
        for (const auto& imp : impacts())
            if (imp.point.z != 0.0)
                throw ConfigError("impact points must lie on the ground plane z = 0");
        if (!(air.density > 0.0) || !(air.sound_speed > 0.0))
            throw ConfigError("air density and sound speed must be positive");
        if (!(output.sample_rate > 0.0) || output.duration < 0.0)
            throw ConfigError("output.sample_rate must be positive and output.duration non-negative");
        if (!(fdtd.spacing > 0.0) || fdtd.cells[0] < 4 || fdtd.cells[1] < 4 || fdtd.cells[2] < 4)
            throw ConfigError("fdtd.spacing must be positive and every cell count at least 4");
        if (!(radiation.min_radius > 0.0) || !(radiation.geometric_ratio > 1.0) || radiation.angular_samples < 1
            || radiation.max_radius < 0.0 || radiation.radial_spacing < 0.0 || radiation.analysis_rate < 0.0
            || radiation.ramp_radius < 0.0)
            throw ConfigError("radiation options out of range (min_radius > 0, geometric_ratio > 1, angular_samples >= 1, "
                              "others non-negative)");
        if (!(fdtd.courant > 0.0 && fdtd.courant <= 1.0))
            throw ConfigError("fdtd.courant must lie in (0, 1]");
    }
};

namespace detail {

inline Material read_material(const KvSection* s, std::string_view what, const MaterialDb& db)
{
    if (!s)
        throw ConfigError("missing [" + std::string(what) + "] section");
    Material m;
    if (const auto* e = s->find("material")) {
        const auto* base = db.find(e->value);
        if (!base)
            throw ConfigError(at_line(e->line) + "unknown material '" + e->value + "'");
        m = *base;
    } else {
        m.name = std::string(what);
        for (const char* key : {"youngs_modulus", "poisson", "density"})
            if (!s->find(key))
                throw ConfigError("[" + std::string(what) + "] needs 'material' or an explicit '" + key + "'");
    }
    if (const auto* e = s->find("youngs_modulus"))
        m.youngs_modulus = parse_number(*e);
    if (const auto* e = s->find("poisson"))
        m.poisson = parse_number(*e);
    if (const auto* e = s->find("density"))
        m.density = parse_number(*e);
    return m;
}

inline void read_if(const KvSection* s, std::string_view key, double& out)
{
    if (s)
        if (const auto* e = s->find(key))
            out = parse_number(*e);
}

inline void read_if(const KvSection* s, std::string_view key, int& out)
{
    if (s)
        if (const auto* e = s->find(key))
            out = static_cast<int>(parse_number(*e));
}

inline void read_if(const KvSection* s, std::string_view key, bool& out)
{
    if (s)
        if (const auto* e = s->find(key))
            out = parse_bool(*e);
}

} // namespace detail

inline ScenarioConfig scenario_from_document(const KvDocument& doc, const MaterialDb& db)
{
    for (const auto& s : doc.sections) {
        static constexpr std::array<std::string_view, 8> known = {"ground", "object", "contact", "listening",
                                                                  "air",    "output", "radiation", "fdtd"};
        if (std::find(known.begin(), known.end(), s.name) == known.end())
            throw ConfigError(detail::at_line(s.line) + "unknown section [" + s.name + "]");
    }

    ScenarioConfig cfg;
    const auto* ground = doc.section("ground");
    const auto* object = doc.section("object");
    const auto* contact = doc.section("contact");
    const auto* listening = doc.section("listening");
    const auto* air = doc.section("air");
    const auto* output = doc.section("output");
    const auto* radiation = doc.section("radiation");
    const auto* fdtd = doc.section("fdtd");

    if (ground)
        check_keys(*ground, {"material", "youngs_modulus", "poisson", "density"});
    if (object)
        check_keys(*object,
                   {"material", "youngs_modulus", "poisson", "density", "radius", "drop_height", "normal_velocity"});
    if (contact)
        check_keys(*contact, {"restitution", "impact_point", "impact_time", "contact_time", "impact"}, {"impact"});
    if (listening)
        check_keys(*listening, {"point"}, {"point"});
    if (air)
        check_keys(*air, {"density", "sound_speed"});
    if (output)
        check_keys(*output, {"sample_rate", "duration", "wav"});
    if (radiation)
        check_keys(*radiation, {"max_radius", "radial_spacing", "min_radius", "geometric_ratio", "angular_samples",
                                "deposit", "ball_reflection", "analysis_rate", "ramp_radius"});
    if (fdtd)
        check_keys(*fdtd, {"spacing", "cells", "origin", "alpha", "sponge_cells", "courant", "duration",
                           "solo_traces", "snapshot_every"});

    cfg.ground = detail::read_material(ground, "ground", db);
    cfg.object = detail::read_material(object, "object", db);

    if (const auto* e = object->find("radius"))
        cfg.ball_radius = parse_number(*e);
    else
        throw ConfigError("[object] requires 'radius'");
    if (const auto* e = object->find("drop_height"))
        cfg.drop_height = parse_number(*e);
    if (const auto* e = object->find("normal_velocity"))
        cfg.normal_velocity = parse_number(*e);

    if (!contact)
        throw ConfigError("missing [contact] section");
    if (const auto* e = contact->find("restitution"))
        cfg.restitution = parse_number(*e);
    else
        throw ConfigError("[contact] requires 'restitution'");
    if (const auto* e = contact->find("impact_point"))
        cfg.impact_point = parse_vec3(*e);
    detail::read_if(contact, "impact_time", cfg.impact_time);
    if (const auto* e = contact->find("contact_time"))
        cfg.contact_time = parse_number(*e);
    for (const auto* e : contact->find_all("impact")) {
        const auto v = parse_numbers(*e);
        if (v.size() != 5)
            throw ConfigError(detail::at_line(e->line) + "'impact' expects: x y z time drop_height");
        if (!(v[4] > 0.0))
            throw ConfigError(detail::at_line(e->line) + "impact drop height must be positive");
        cfg.extra_impacts.push_back({{v[0], v[1], v[2]}, v[3], std::sqrt(2.0 * kStandardGravity * v[4])});
    }

    if (listening)
        for (const auto* e : listening->find_all("point"))
            cfg.listening_points.push_back(parse_vec3(*e));

    detail::read_if(air, "density", cfg.air.density);
    detail::read_if(air, "sound_speed", cfg.air.sound_speed);

    detail::read_if(output, "sample_rate", cfg.output.sample_rate);
    detail::read_if(output, "duration", cfg.output.duration);
    detail::read_if(output, "wav", cfg.output.wav);

    detail::read_if(radiation, "max_radius", cfg.radiation.max_radius);
    detail::read_if(radiation, "radial_spacing", cfg.radiation.radial_spacing);
    detail::read_if(radiation, "min_radius", cfg.radiation.min_radius);
    detail::read_if(radiation, "geometric_ratio", cfg.radiation.geometric_ratio);
    detail::read_if(radiation, "angular_samples", cfg.radiation.angular_samples);
    detail::read_if(radiation, "analysis_rate", cfg.radiation.analysis_rate);
    detail::read_if(radiation, "ramp_radius", cfg.radiation.ramp_radius);
    if (radiation) {
        if (const auto* e = radiation->find("deposit")) {
            const auto v = detail::lower(e->value);
            if (v == "linear")
                cfg.radiation.deposit = DepositRule::Linear;
            else if (v == "nearest")
                cfg.radiation.deposit = DepositRule::Nearest;
            else
                throw ConfigError(detail::at_line(e->line) + "deposit must be 'linear' or 'nearest'");
        }
        if (const auto* e = radiation->find("ball_reflection")) {
            const auto v = detail::lower(e->value);
            if (v == "reflective")
                cfg.radiation.ball_reflective = true;
            else if (v == "absorptive")
                cfg.radiation.ball_reflective = false;
            else
                throw ConfigError(detail::at_line(e->line) + "ball_reflection must be 'reflective' or 'absorptive'");
        }
    }

    detail::read_if(fdtd, "spacing", cfg.fdtd.spacing);
    detail::read_if(fdtd, "alpha", cfg.fdtd.alpha);
    detail::read_if(fdtd, "sponge_cells", cfg.fdtd.sponge_cells);
    detail::read_if(fdtd, "courant", cfg.fdtd.courant);
    detail::read_if(fdtd, "duration", cfg.fdtd.duration);
    detail::read_if(fdtd, "solo_traces", cfg.fdtd.solo_traces);
    detail::read_if(fdtd, "snapshot_every", cfg.fdtd.snapshot_every);
    if (fdtd) {
        if (const auto* e = fdtd->find("cells")) {
            const auto v = parse_numbers(*e);
            if (v.size() != 3)
                throw ConfigError(detail::at_line(e->line) + "'cells' expects three integers");
            cfg.fdtd.cells = {static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
        }
        if (const auto* e = fdtd->find("origin"))
            cfg.fdtd.origin = parse_vec3(*e);
    }

    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(std::string_view text, const MaterialDb& db = MaterialDb::builtin(),
                                    const std::vector<std::string>& overrides = {})
{
    auto doc = parse_kv(text);
    for (const auto& o : overrides)
        apply_override(doc, o);
    return scenario_from_document(doc, db);
}

inline ScenarioConfig load_scenario_file(const std::string& path, const MaterialDb& db = MaterialDb::builtin(),
                                         const std::vector<std::string>& overrides = {})
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(), db, overrides);
}

} // namespace groundsound

#endif
