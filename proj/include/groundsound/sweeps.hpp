/**
 * @file sweeps.hpp
 * @brief Ground-versus-ball comparisons built on the radiation models: single
 *        scenarios, the ball x ground material matrix, and one-parameter
 *        sweeps over shear speed, contact time and listening angle.
 */

#ifndef GROUNDSOUND_SWEEPS_HPP
#define GROUNDSOUND_SWEEPS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "contact.hpp"
#include "material.hpp"
#include "radiation.hpp"
#include "scenario.hpp"

namespace groundsound {

struct SourceComparison {
    Vec3 listener;
    PressureTrace ground;
    PressureTrace ball;
    double ground_energy = 0.0; // Pa^2 s
    double ball_energy = 0.0;
    double db = 0.0;
    RayleighDiagnostics diagnostics;
};

/// Ground and ball traces for explicit events on one shared analysis window.
inline SourceComparison compare_sources(const std::vector<ContactEvent>& events, const HalfspaceParams& hs,
                                        const Vec3& listener, const AirParams& air, const RadiationOptions& opt,
                                        double duration = 0.0)
{
    if (events.empty())
        throw std::invalid_argument("compare_sources: no events");
    const TraceWindow window = analysis_window(events, {listener}, air, default_analysis_rate(events, opt), duration);
    SourceComparison out;
    out.listener = listener;
    out.ground = PressureTrace(window);
    out.ball = PressureTrace(window);
    for (const auto& ev : events) {
        RayleighDiagnostics d;
        out.ground += rayleigh_ground_pressure(ev, hs, listener, window, air, opt, &d);
        out.ball += ball_dipole_pressure(ev, listener, window, air, opt.ball_reflective);
        out.diagnostics.nodes += d.nodes;
        out.diagnostics.evaluations += d.evaluations;
        out.diagnostics.max_radius = std::max(out.diagnostics.max_radius, d.max_radius);
        out.diagnostics.required_radius = std::max(out.diagnostics.required_radius, d.required_radius);
        out.diagnostics.radial_spacing = d.radial_spacing;
        out.diagnostics.outer_energy_fraction = std::max(out.diagnostics.outer_energy_fraction, d.outer_energy_fraction);
        out.diagnostics.warnings.insert(out.diagnostics.warnings.end(), d.warnings.begin(), d.warnings.end());
    }
    out.ground_energy = out.ground.energy();
    out.ball_energy = out.ball.energy();
    out.db = intensity_db(out.ground, out.ball);
    return out;
}

inline SourceComparison compare_sources(const ScenarioConfig& sc, const Vec3& listener)
{
    return compare_sources(hertz_events(sc), derive_halfspace(sc.ground), listener, sc.air, sc.radiation,
                           sc.output.duration);
}

// ---------------------------------------------------------------------------
// Material matrix

/// How the matrix forces the ground Poisson ratio.
enum class PoissonOverride {
    KeepYoungs, // replace nu, keep E: mu = E / (2 (1 + nu))
    KeepShear,  // replace nu, keep the material's own mu and c_s
    KeepSpeed,  // mu = E / (2 (1 + nu)) with the forced nu, c_s from the material's own nu
};

struct MaterialMatrixOptions {
    double contact_time = 1.633e-4;
    double poisson = 0.25;
    PoissonOverride rule = PoissonOverride::KeepSpeed;
    double louder_db = 0.0;    // ground at least as loud as the ball
    double audible_db = -13.0; // most sensitive just-noticeable difference
};

struct MaterialMatrix {
    std::vector<std::string> balls;
    std::vector<std::string> grounds;
    std::vector<std::vector<double>> db; // [ball][ground]
    MaterialMatrixOptions options;

    bool louder(std::size_t b, std::size_t g) const { return db[b][g] >= options.louder_db; }
    bool audible(std::size_t b, std::size_t g) const { return db[b][g] >= options.audible_db; }
};

inline HalfspaceParams matrix_ground(const Material& m, const MaterialMatrixOptions& opt)
{
    if (opt.rule == PoissonOverride::KeepShear)
        return halfspace_from_moduli(m.shear_modulus(), opt.poisson, m.shear_speed());
    if (opt.rule == PoissonOverride::KeepSpeed)
        return halfspace_from_moduli(m.youngs_modulus / (2.0 * (1.0 + opt.poisson)), opt.poisson, m.shear_speed());
    Material g = m;
    g.poisson = opt.poisson;
    return derive_halfspace(g);
}

/**
 * dB of ground over ball for every (ball, ground) pair with the geometry,
 * drop and restitution of `base`, contact time fixed and ground nu forced.
 * With t_c fixed the ball trace depends on neither material and the ground
 * trace is linear in the impulse, so each ground is radiated once per unit
 * impulse and rescaled by each ball's impulse.
 */
inline MaterialMatrix material_matrix(const ScenarioConfig& base, const std::vector<Material>& balls,
                                      const std::vector<Material>& grounds, const MaterialMatrixOptions& opt = {})
{
    MaterialMatrix out;
    out.options = opt;
    const Vec3 listener = base.listening_points.front();
    const double v_n = base.impact_speed();
    for (const auto& b : balls)
        out.balls.push_back(b.name);
    for (const auto& g : grounds)
        out.grounds.push_back(g.name);
    out.db.assign(balls.size(), std::vector<double>(grounds.size(), 0.0));

    for (std::size_t gi = 0; gi < grounds.size(); ++gi) {
        const HalfspaceParams hs = matrix_ground(grounds[gi], opt);
        Material ground_mat = grounds[gi];
        ground_mat.poisson = opt.poisson;
        auto unit = make_contact_event(balls.front(), ground_mat, base.ball_radius, base.restitution, v_n,
                                       base.impact_point, base.impact_time, opt.contact_time);
        unit.ground_shear_speed = hs.c_s;
        unit.epsilon = hs.c_s * opt.contact_time / 4.0;
        unit.impulse = 1.0;
        const TraceWindow window =
            analysis_window({unit}, {listener}, base.air, default_analysis_rate({unit}, base.radiation));
        const double e_ground_unit =
            rayleigh_ground_pressure(unit, hs, listener, window, base.air, base.radiation).energy();
        for (std::size_t bi = 0; bi < balls.size(); ++bi) {
            auto ev = unit;
            ev.mass = sphere_mass(balls[bi], base.ball_radius);
            ev.impulse = (1.0 + base.restitution) * ev.mass * v_n;
            const double e_ball =
                ball_dipole_pressure(ev, listener, window, base.air, base.radiation.ball_reflective).energy();
            if (!(e_ball > 0.0))
                throw std::domain_error("material_matrix: the ball trace is silent");
            out.db[bi][gi] = 10.0 * std::log10(ev.impulse * ev.impulse * e_ground_unit / e_ball);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0; // in log10 space
};

/// Least-squares line through (log10 x, log10 y) for x in [lo, hi].
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo * (1 - 1e-12) || x[i] > hi * (1 + 1e-12) || !(y[i] > 0.0))
            continue;
        const double lx = std::log10(x[i]), ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2)
        throw std::invalid_argument("fit_loglog: fewer than two points in the fit range");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

/// x where two log-log lines meet.
inline double intersection(const LineFit& a, const LineFit& b)
{
    return std::pow(10.0, (b.intercept - a.intercept) / (a.slope - b.slope));
}

inline std::vector<double> log_spaced(double lo, double hi, int per_decade)
{
    std::vector<double> v;
    const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    for (int k = 0; k <= n; ++k)
        v.push_back(lo * std::pow(10.0, double(k) / per_decade));
    return v;
}

struct SweepPoint {
    double x = 0.0;
    double ground_energy = 0.0;
    double ball_energy = 0.0;
    double db() const { return 10.0 * std::log10(ground_energy / ball_energy); }
};

struct SweepResult {
    std::string axis; // column name of x
    std::vector<SweepPoint> points;
    std::vector<std::pair<std::string, double>> summary; // fitted slopes, knee, ...

    std::vector<double> xs() const
    {
        std::vector<double> v;
        for (const auto& p : points)
            v.push_back(p.x);
        return v;
    }
    std::vector<double> ground() const
    {
        std::vector<double> v;
        for (const auto& p : points)
            v.push_back(p.ground_energy);
        return v;
    }
    std::vector<double> ball() const
    {
        std::vector<double> v;
        for (const auto& p : points)
            v.push_back(p.ball_energy);
        return v;
    }
    double value(const std::string& key) const
    {
        for (const auto& [k, v] : summary)
            if (k == key)
                return v;
        throw std::out_of_range("SweepResult: no summary entry '" + key + "'");
    }
};

/// Event of the scenario's first impact with the contact time optionally replaced.
inline ContactEvent sweep_event(const ScenarioConfig& sc, const HalfspaceParams& hs, double contact_time)
{
    const auto imp = sc.impacts().front();
    auto ev = make_contact_event(sc.object, sc.ground, sc.ball_radius, sc.restitution, imp.normal_velocity, imp.point,
                                 imp.time, contact_time);
    ev.ground_shear_speed = hs.c_s;
    ev.epsilon = hs.c_s * ev.timescale / 4.0;
    return ev;
}

inline SweepPoint sweep_sample(double x, const ContactEvent& ev, const HalfspaceParams& hs, const Vec3& listener,
                               const ScenarioConfig& sc)
{
    const auto c = compare_sources({ev}, hs, listener, sc.air, sc.radiation);
    return {x, c.ground_energy, c.ball_energy};
}

struct ShearSpeedSweep {
    std::vector<double> speeds = log_spaced(50.0, 2.0e5, 5); // m/s
    double low_fit_max = 300.0;   // c_s range of the low-speed line
    double high_fit_min = 2.0e4;  // plateau line over the top decade; the plateau still creeps upward below it
};

/**
 * Ground energy versus c_s with mu, nu, t_c and the impulse of the scenario
 * held fixed (density = mu / c_s^2). Fits the low and high ends and reports
 * the knee where the two lines meet, also as a multiple of sqrt(c0 R / t_c).
 */
inline SweepResult sweep_shear_speed(const ScenarioConfig& sc, const ShearSpeedSweep& spec)
{
    const HalfspaceParams base = derive_halfspace(sc.ground);
    const double t_c = sweep_event(sc, base, sc.contact_time.value_or(0.0)).timescale;
    const Vec3 listener = sc.listening_points.front();
    SweepResult res;
    res.axis = "c_s";
    for (double c_s : spec.speeds) {
        const HalfspaceParams hs = halfspace_from_moduli(base.shear_modulus, base.poisson, c_s);
        const auto ev = sweep_event(sc, hs, t_c);
        res.points.push_back(sweep_sample(c_s, ev, hs, listener, sc));
    }
    const auto x = res.xs(), g = res.ground();
    const LineFit low = fit_loglog(x, g, x.front(), spec.low_fit_max);
    const LineFit high = fit_loglog(x, g, spec.high_fit_min, x.back());
    const double knee = intersection(low, high);
    const double dist = (listener - sc.impacts().front().point).norm();
    res.summary = {{"contact_time", t_c},
                   {"low_slope", low.slope},
                   {"high_slope", high.slope},
                   {"knee", knee},
                   {"knee_over_sqrt_c0R_tc", knee / std::sqrt(sc.air.sound_speed * dist / t_c)}};
    return res;
}

struct ContactTimeSweep {
    std::vector<double> times = log_spaced(1e-5, 1e-1, 4); // s
    double low_fit_max = 3e-5;   // both sources fitted on [times.front(), low_fit_max]
    double high_fit_min = 1e-2;  // ball fitted on [high_fit_min, times.back()]
};

/// Energies versus t_c at fixed impulse and ground.
inline SweepResult sweep_contact_time(const ScenarioConfig& sc, const ContactTimeSweep& spec)
{
    const HalfspaceParams hs = derive_halfspace(sc.ground);
    const Vec3 listener = sc.listening_points.front();
    SweepResult res;
    res.axis = "t_c";
    for (double t_c : spec.times)
        res.points.push_back(sweep_sample(t_c, sweep_event(sc, hs, t_c), hs, listener, sc));
    const auto x = res.xs();
    const LineFit g_low = fit_loglog(x, res.ground(), x.front(), spec.low_fit_max);
    const LineFit b_low = fit_loglog(x, res.ball(), x.front(), spec.low_fit_max);
    const LineFit b_high = fit_loglog(x, res.ball(), spec.high_fit_min, x.back());
    res.summary = {{"ground_low_slope", g_low.slope}, {"ball_low_slope", b_low.slope}, {"ball_high_slope", b_high.slope}};
    return res;
}

struct AngleSweep {
    std::vector<double> degrees{1, 2, 3, 4, 5, 6, 7, 8, 10, 15, 30, 60, 90}; // elevation above the ground plane
    double distance = 0.2;       // m from the impact point
};

/// Listener on an arc of fixed distance in the x-z plane through the impact point.
inline SweepResult sweep_angle(const ScenarioConfig& sc, const AngleSweep& spec)
{
    const HalfspaceParams hs = derive_halfspace(sc.ground);
    const auto ev = sweep_event(sc, hs, sc.contact_time.value_or(0.0));
    SweepResult res;
    res.axis = "elevation_deg";
    for (double deg : spec.degrees) {
        const double th = deg * std::numbers::pi / 180.0;
        const Vec3 l = ev.impact_point + Vec3{spec.distance * std::cos(th), 0.0, spec.distance * std::sin(th)};
        res.points.push_back(sweep_sample(deg, ev, hs, l, sc));
    }
    std::size_t imin = 0;
    for (std::size_t i = 1; i < res.points.size(); ++i)
        if (res.points[i].ball_energy < res.points[imin].ball_energy)
            imin = i;
    res.summary = {{"ball_minimum_deg", res.points[imin].x}};
    return res;
}

} // namespace groundsound

#endif
