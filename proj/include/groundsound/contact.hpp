/**
 * @file contact.hpp
 * @brief Hertzian ball-on-ground impact: impulse, contact timescale, the
 *        regularization width it implies, and the smooth force/acceleration
 *        profiles used by both the ground and the ball sound.
 */

#ifndef GROUNDSOUND_CONTACT_HPP
#define GROUNDSOUND_CONTACT_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "material.hpp"
#include "regularized.hpp"
#include "scenario.hpp"
#include "vec3.hpp"

namespace groundsound {

/// Prefactor of the Hertz contact duration t_c = 2.87 (m^2 / (a0 E*^2 v))^(1/5).
inline constexpr double kHertzDurationFactor = 2.87;

struct ContactEvent {
    Vec3 impact_point;
    double impact_time = 0.0;
    double impulse = 0.0;            // J, N s
    double timescale = 0.0;          // t_c, s
    double epsilon = 0.0;            // c_s t_c / 4, m
    double normal_velocity = 0.0;    // v_n, m/s
    double mass = 0.0;               // kg
    double radius = 0.0;             // a0, m
    double effective_stiffness = 0.0; // E*, Pa
    double ground_shear_speed = 0.0; // c_s of the ground, m/s
    double contact_radius = 0.0;     // Hertz maximum contact radius (diagnostic only)

    /// Kernel half-width in seconds, eps / c_s = t_c / 4.
    double kernel_time() const { return epsilon / ground_shear_speed; }
};

/// 1/E* = (1 - nu1^2)/E1 + (1 - nu2^2)/E2.
inline double effective_stiffness(const Material& a, const Material& b)
{
    const double ca = (1.0 - a.poisson * a.poisson) / a.youngs_modulus;
    const double cb = (1.0 - b.poisson * b.poisson) / b.youngs_modulus;
    return 1.0 / (ca + cb);
}

inline double sphere_mass(const Material& m, double radius)
{
    return m.density * 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
}

inline double hertz_contact_time(double mass, double radius, double e_star, double v_n)
{
    return kHertzDurationFactor * std::pow(mass * mass / (radius * e_star * e_star * v_n), 0.2);
}

/// Maximum Hertz contact radius sqrt(a0 delta_max), delta_max = (15 m v^2 / (16 E* sqrt(a0)))^(2/5).
inline double hertz_contact_radius(double mass, double radius, double e_star, double v_n)
{
    const double delta = std::pow(15.0 * mass * v_n * v_n / (16.0 * e_star * std::sqrt(radius)), 0.4);
    return std::sqrt(radius * delta);
}

/// Build one event. `contact_time`, when positive, replaces the Hertz estimate.
inline ContactEvent make_contact_event(const Material& object, const Material& ground, double radius,
                                       double restitution, double v_n, Vec3 point, double time,
                                       double contact_time = 0.0)
{
    if (!(v_n > 0.0))
        throw ConfigError("contact: impact speed must be positive (no impact otherwise)");
    if (!(radius > 0.0))
        throw ConfigError("contact: ball radius must be positive");
    ContactEvent ev;
    ev.impact_point = point;
    ev.impact_time = time;
    ev.normal_velocity = v_n;
    ev.radius = radius;
    ev.mass = sphere_mass(object, radius);
    ev.effective_stiffness = effective_stiffness(object, ground);
    ev.timescale = contact_time > 0.0 ? contact_time
                                      : hertz_contact_time(ev.mass, radius, ev.effective_stiffness, v_n);
    ev.ground_shear_speed = ground.shear_speed();
    ev.epsilon = ev.ground_shear_speed * ev.timescale / 4.0;
    ev.impulse = (1.0 + restitution) * ev.mass * v_n;
    ev.contact_radius = hertz_contact_radius(ev.mass, radius, ev.effective_stiffness, v_n);
    return ev;
}

/// Events for every impact in the scenario (one unless [contact] lists several).
inline std::vector<ContactEvent> hertz_events(const ScenarioConfig& sc)
{
    std::vector<ContactEvent> out;
    for (const auto& imp : sc.impacts())
        out.push_back(make_contact_event(sc.object, sc.ground, sc.ball_radius, sc.restitution, imp.normal_velocity,
                                         imp.point, imp.time, sc.contact_time.value_or(0.0)));
    return out;
}

inline ContactEvent hertz_event(const ScenarioConfig& sc)
{
    return hertz_events(sc).front();
}

/// Force on the ground, J f_eps(t - t_impact), in N.
inline double ground_force_profile(const ContactEvent& ev, double t)
{
    return ev.impulse * kernel_f(t - ev.impact_time, ev.epsilon, ev.ground_shear_speed);
}

/// Rigid-body acceleration of the ball along z, -force / m.
inline double ball_acceleration(const ContactEvent& ev, double t)
{
    return -ground_force_profile(ev, t) / ev.mass;
}

/// d/dt of ball_acceleration.
inline double ball_jerk(const ContactEvent& ev, double t)
{
    return -ev.impulse * kernel_f_derivative(t - ev.impact_time, ev.epsilon, ev.ground_shear_speed) / ev.mass;
}

} // namespace groundsound

#endif
