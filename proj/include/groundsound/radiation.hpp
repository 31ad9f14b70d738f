/**
 * @file radiation.hpp
 * @brief Free-field sound of an impact: Rayleigh-integral radiation from the
 *        ground surface, the compact-sphere model of the ball, the ground's
 *        volume displacement, and the energy ratio between the two sources.
 *
 * Sign conventions: z points up into the air. The regularized responses u, w,
 * v, a are measured along the load, i.e. into the ground, so the upward
 * surface acceleration is -J a_eps. ball_acceleration() is measured along the
 * same downward axis, so the ball's upward acceleration is J f_eps / m.
 */

#ifndef GROUNDSOUND_RADIATION_HPP
#define GROUNDSOUND_RADIATION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "contact.hpp"
#include "lamb.hpp"
#include "errors.hpp"
#include "material.hpp"
#include "parallel.hpp"
#include "regularized.hpp"
#include "scenario.hpp"
#include "trace.hpp"
#include "vec3.hpp"

namespace groundsound {

/// Kernel widths kept on either side of the wavefront span when sampling a node.
inline constexpr double kKernelTailWidths = 30.0;
/// Kernel widths of trace kept after the last direct arrival.
inline constexpr double kTraceTailWidths = 200.0;
/// Analysis samples per kernel width t_c / 4 when no rate is configured.
inline constexpr double kSamplesPerKernelWidth = 16.0;

// ---------------------------------------------------------------------------
// Radial discretization of the ground plane

struct RadialGrid {
    std::vector<double> edges;  // annulus boundaries, edges[0] = 0
    std::vector<double> radius; // node at each annulus midpoint
    std::vector<double> weight; // annulus area

    std::size_t size() const { return radius.size(); }
    double max_radius() const { return edges.empty() ? 0.0 : edges.back(); }
};

/**
 * Widths start at 2 r_min and grow by `growth` up to `spacing`, stay uniform
 * until `uniform_until`, then grow by `outer_growth`. Inside the optional band
 * |r - refine_center| < refine_halfwidth they are capped at `refine_spacing`.
 *
 * Nodes sit at annulus midpoints, where area / r equals the exact integral of
 * 1/r over the annulus, so the origin singularity is integrated without error.
 */
struct RadialGridSpec {
    double min_radius = 1e-4;
    double growth = 1.05;
    double spacing = 1e-3;
    double uniform_until = std::numeric_limits<double>::infinity();
    double outer_growth = 1.05;
    double max_radius = 1.0;
    double refine_center = 0.0;
    double refine_halfwidth = 0.0;
    double refine_spacing = 0.0;
    std::vector<double> breakpoints; // radii that must coincide with annulus edges
};

inline RadialGrid make_radial_grid(const RadialGridSpec& s)
{
    if (!(s.min_radius > 0.0) || !(s.growth >= 1.0) || !(s.spacing > 0.0) || !(s.outer_growth >= 1.0)
        || !(s.max_radius > 2.0 * s.min_radius))
        throw std::invalid_argument("make_radial_grid: invalid specification");
    RadialGrid g;
    g.edges.push_back(0.0);
    double base = 2.0 * s.min_radius;
    bool first = true;
    while (g.edges.back() < s.max_radius) {
        const double r = g.edges.back();
        double w = base;
        if (!first && s.refine_spacing > 0.0 && std::abs(r - s.refine_center) < s.refine_halfwidth)
            w = std::min(w, s.refine_spacing);
        for (double bp : s.breakpoints)
            if (bp > r * (1.0 + 1e-12) && bp < r + w)
                w = bp - r;
        if (s.max_radius - (r + w) < 0.25 * w)
            w = s.max_radius - r;
        g.edges.push_back(r + w);
        first = false;
        base = r < s.uniform_until ? std::min(base * s.growth, std::max(s.spacing, 2.0 * s.min_radius))
                                   : base * s.outer_growth;
        if (r >= s.uniform_until && base < s.spacing)
            base = s.spacing;
    }
    g.edges.back() = s.max_radius;
    for (std::size_t i = 0; i + 1 < g.edges.size(); ++i) {
        const double a = g.edges[i], b = g.edges[i + 1];
        g.radius.push_back(0.5 * (a + b));
        g.weight.push_back(std::numbers::pi * (b - a) * (b + a));
    }
    return g;
}

// ---------------------------------------------------------------------------
// Analysis window

inline double default_analysis_rate(const std::vector<ContactEvent>& events, const RadiationOptions& opt = {})
{
    if (opt.analysis_rate > 0.0)
        return opt.analysis_rate;
    double tau = std::numeric_limits<double>::infinity();
    for (const auto& ev : events)
        tau = std::min(tau, ev.kernel_time());
    if (!std::isfinite(tau) || !(tau > 0.0))
        throw std::invalid_argument("default_analysis_rate: no events");
    return kSamplesPerKernelWidth / tau;
}

/**
 * Grid covering every direct arrival: from the earliest possible ball arrival
 * minus the kernel tails to the latest direct ground arrival plus a long tail.
 * The start is snapped to a multiple of the sample period, so windows for
 * different listeners share sample instants.
 */
inline TraceWindow analysis_window(const std::vector<ContactEvent>& events, const std::vector<Vec3>& listeners,
                                   const AirParams& air, double rate, double duration = 0.0)
{
    if (events.empty() || listeners.empty() || !(rate > 0.0))
        throw std::invalid_argument("analysis_window: needs events, listeners and a positive rate");
    double start = std::numeric_limits<double>::infinity();
    double end = -std::numeric_limits<double>::infinity();
    for (const auto& ev : events)
        for (const auto& l : listeners) {
            const double d = (l - ev.impact_point).norm();
            const double tau = ev.kernel_time();
            start = std::min(start, ev.impact_time + std::max(0.0, d - 2.0 * ev.radius) / air.sound_speed
                                        - kKernelTailWidths * tau);
            end = std::max(end, ev.impact_time + d / air.sound_speed + kTraceTailWidths * tau);
        }
    start = std::floor(start * rate) / rate;
    if (duration > 0.0)
        end = start + duration;
    const auto count = static_cast<std::size_t>(std::ceil((end - start) * rate)) + 1;
    return {start, rate, count};
}

// ---------------------------------------------------------------------------
// Ground radiation

struct RayleighDiagnostics {
    std::size_t nodes = 0;
    std::size_t evaluations = 0;
    double max_radius = 0.0;
    double required_radius = 0.0; // radius whose earliest arrival reaches the window end
    double radial_spacing = 0.0;
    double outer_energy_fraction = 0.0; // energy from the outer 10 % of the disc / total
    std::vector<std::string> warnings;
};

/// Disc radius needed so that every node that can reach the window is included.
inline double rayleigh_required_radius(const ContactEvent& ev, const HalfspaceParams& hs, double horizontal_offset,
                                       double window_end, const AirParams& air)
{
    const double c_p = hs.c_s / hs.speed_ratio;
    const double span = window_end - ev.impact_time + kKernelTailWidths * ev.kernel_time()
                      + horizontal_offset / air.sound_speed;
    return std::max(span, 0.0) / (1.0 / c_p + 1.0 / air.sound_speed);
}

namespace detail {

/// Volume-preserving replacement of the 1/r origin singularity inside radius H:
/// adds R(r) pref d^n/dt^n F(t) (3/H - 1/r), R = 1 - r/H, F the smoothed step.
/// `order` is the time-derivative order of the quantity (0: u, 1: w, 2: v, 3: a).
inline double ramp_correction(const RegularizedField& f, double r, double t, double H, int order)
{
    if (!(H > 0.0) || r >= H)
        return 0.0;
    const double c_s = f.halfspace.c_s;
    double step;
    if (order == 0)
        step = kernel_f_cumulative(t, f.epsilon, c_s);
    else
        step = kernel_f_jet<2>(t, f.epsilon, c_s).derivative(order - 1);
    return (1.0 - r / H) * f.halfspace.static_prefactor() * step * (3.0 / H - 1.0 / r);
}

/// The ramp is only exactly volume preserving if the grid resolves it.
inline void resolve_ramp(RadialGridSpec& spec, double H)
{
    spec.breakpoints.push_back(H);
    spec.min_radius = std::min(spec.min_radius, H / 128.0);
    if (spec.refine_spacing == 0.0) {
        spec.refine_center = 0.0;
        spec.refine_halfwidth = H;
        spec.refine_spacing = H / 64.0;
    }
}

} // namespace detail

/**
 * p(L, t) = rho0 / (2 pi) * integral of a_up(r', t - R'/c0) / R' over the plane,
 * accumulated on the samples of `window`.
 *
 * Each annulus is sampled in source time on the window's own grid, restricted
 * to its wavefront span plus kernel tails; the delays R'/c0 of the annulus
 * (one for an on-axis listener, `angular_samples` over the half circle
 * otherwise) are binned into a tap histogram by linear splitting or nearest
 * rounding and the node's signal is deposited through it.
 */
inline PressureTrace rayleigh_ground_pressure(const ContactEvent& ev, const HalfspaceParams& hs, const Vec3& listener,
                                              const TraceWindow& window, const AirParams& air,
                                              const RadiationOptions& opt = {}, RayleighDiagnostics* diag = nullptr)
{
    if (!(listener.z > 0.0))
        throw std::domain_error("rayleigh_ground_pressure: listener must be above the ground plane");
    if (!(window.sample_rate > 0.0) || window.count == 0)
        throw std::invalid_argument("rayleigh_ground_pressure: empty window");
    if (std::abs(ev.ground_shear_speed - hs.c_s) > 1e-9 * hs.c_s)
        throw std::invalid_argument("rayleigh_ground_pressure: event and halfspace disagree on the shear speed");

    PressureTrace out(window);
    RayleighDiagnostics local;
    RayleighDiagnostics& dg = diag ? *diag : local;
    dg = {};

    const double c0 = air.sound_speed;
    const double tau = ev.kernel_time();
    const double dx = listener.x - ev.impact_point.x;
    const double dy = listener.y - ev.impact_point.y;
    const double rho_l = std::hypot(dx, dy);
    const double z = listener.z;
    const bool on_axis = rho_l <= 1e-12 * z;
    const double t_end = window.time(window.count - 1);

    dg.required_radius = rayleigh_required_radius(ev, hs, rho_l, t_end, air);
    const double r_max = opt.max_radius > 0.0 ? opt.max_radius : 1.2 * dg.required_radius;
    const double spacing = opt.radial_spacing > 0.0 ? opt.radial_spacing : std::min(ev.epsilon / 8.0, c0 * tau / 6.0);
    dg.max_radius = r_max;
    dg.radial_spacing = spacing;
    if (ev.impulse == 0.0)
        return out;

    RadialGridSpec spec;
    spec.min_radius = opt.min_radius;
    spec.growth = opt.geometric_ratio;
    spec.spacing = spacing;
    spec.max_radius = std::max(r_max, 4.0 * opt.min_radius);
    if (!on_axis && z / 4.0 < spacing) {
        spec.refine_center = rho_l;
        spec.refine_halfwidth = 10.0 * z;
        spec.refine_spacing = z / 4.0;
    }
    if (opt.ramp_radius > 0.0)
        detail::resolve_ramp(spec, opt.ramp_radius);
    const RadialGrid grid = make_radial_grid(spec);
    dg.nodes = grid.size();

    const RegularizedField field(hs, ev.epsilon);
    const double dt = window.dt();
    const double t0 = window.start_time;
    const auto n_out = static_cast<long>(window.count);
    const double scale = -air.density * ev.impulse / (2.0 * std::numbers::pi);
    const int n_phi = on_axis ? 1 : std::max(1, opt.angular_samples);
    const double H = opt.ramp_radius;
    const double outer_from = 0.9 * grid.max_radius();

    constexpr std::size_t kBlock = 32;
    const std::size_t n_blocks = (grid.size() + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> partial(n_blocks), partial_outer(n_blocks);
    std::vector<std::size_t> evals(n_blocks, 0);

    parallel_blocks(n_blocks, [&](std::size_t b) {
        auto& buf = partial[b];
        buf.assign(window.count, 0.0);
        std::vector<double> hist;
        for (std::size_t i = b * kBlock; i < std::min(grid.size(), (b + 1) * kBlock); ++i) {
            const double r = grid.radius[i];
            const double w = grid.weight[i];

            // Delay taps, in samples.
            double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
            auto delay_of = [&](int j) {
                if (on_axis)
                    return std::sqrt(r * r + z * z);
                const double phi = (j + 0.5) * std::numbers::pi / n_phi;
                return std::sqrt(std::max(0.0, r * r + rho_l * rho_l - 2.0 * r * rho_l * std::cos(phi)) + z * z);
            };
            for (int j = 0; j < n_phi; ++j) {
                const double x = delay_of(j) / c0 / dt;
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
            }
            const long base = static_cast<long>(std::floor(x_min));
            hist.assign(static_cast<std::size_t>(std::floor(x_max) - base + 2), 0.0);
            for (int j = 0; j < n_phi; ++j) {
                const double rp = delay_of(j);
                const double tap = w / rp / n_phi;
                const double x = rp / c0 / dt;
                if (opt.deposit == DepositRule::Nearest) {
                    hist[static_cast<std::size_t>(std::lround(x) - base)] += tap;
                } else {
                    const double fl = std::floor(x);
                    const double fr = x - fl;
                    const auto m = static_cast<std::size_t>(static_cast<long>(fl) - base);
                    hist[m] += tap * (1.0 - fr);
                    hist[m + 1] += tap * fr;
                }
            }
            const long taps = static_cast<long>(hist.size());

            // Source samples t0 + k dt within the node's active span that can land in the window.
            const auto wf = wavefront_times(hs, r);
            const double lo = ev.impact_time + wf.t_p - kKernelTailWidths * tau;
            const double hi = ev.impact_time + wf.t_r + kKernelTailWidths * tau;
            const long k_lo = std::max(static_cast<long>(std::ceil((lo - t0) / dt)), -(base + taps - 1));
            const long k_hi = std::min(static_cast<long>(std::floor((hi - t0) / dt)), n_out - 1 - base);
            if (k_lo > k_hi)
                continue;

            double* dst = buf.data();
            if (r >= outer_from) {
                if (partial_outer[b].empty())
                    partial_outer[b].assign(window.count, 0.0);
                dst = partial_outer[b].data();
            }
            for (long k = k_lo; k <= k_hi; ++k) {
                const double s = t0 + static_cast<double>(k) * dt - ev.impact_time;
                double a = a_eps(field, r, s);
                if (H > 0.0)
                    a += detail::ramp_correction(field, r, s, H, 3);
                ++evals[b];
                const double v = scale * a;
                const long first = std::max(0L, -(k + base));
                const long last = std::min(taps, n_out - (k + base));
                for (long m = first; m < last; ++m)
                    dst[k + base + m] += v * hist[static_cast<std::size_t>(m)];
            }
        }
    });

    PressureTrace outer(window);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        for (std::size_t n = 0; n < window.count; ++n)
            out.samples[n] += partial[b][n];
        if (!partial_outer[b].empty())
            for (std::size_t n = 0; n < window.count; ++n)
                outer.samples[n] += partial_outer[b][n];
        dg.evaluations += evals[b];
    }
    out += outer;
    const double total = out.energy();
    dg.outer_energy_fraction = total > 0.0 ? outer.energy() / total : 0.0;
    if (grid.max_radius() < dg.required_radius) {
        std::ostringstream msg;
        msg << "Rayleigh disc radius " << grid.max_radius() << " m is smaller than the " << dg.required_radius
            << " m reached by the earliest ground arrivals within the trace; outer-annulus energy fraction "
            << dg.outer_energy_fraction;
        dg.warnings.push_back(msg.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ball radiation

/**
 * Compact translating sphere: p = rho0 a0^3 cos(theta) / 2 * (A / r^2 + A' / (c0 r)),
 * evaluated at t - (r - a0)/c0, with A the acceleration along the dipole axis
 * and theta measured from that axis. The mirror image (centre at z = -a0, axis
 * reversed) models a rigid ground and turns the pair into a longitudinal
 * quadrupole.
 */
inline PressureTrace ball_dipole_pressure(const ContactEvent& ev, const Vec3& listener, const TraceWindow& window,
                                          const AirParams& air, bool ground_reflective = true)
{
    const double a0 = ev.radius;
    const double c0 = air.sound_speed;
    const Vec3 centre = ev.impact_point + Vec3{0.0, 0.0, a0};
    const Vec3 image = ev.impact_point - Vec3{0.0, 0.0, a0};
    if (!((listener - centre).norm() > a0))
        throw ConfigError("ball_dipole_pressure: listening point lies inside the ball");

    PressureTrace out(window);
    const double k = air.density * a0 * a0 * a0 / 2.0;
    auto add_source = [&](const Vec3& c, double axis_z) {
        const Vec3 d = listener - c;
        const double r = d.norm();
        const double cos_t = axis_z * d.z / r;
        if (cos_t == 0.0)
            return;
        const double delay = (r - a0) / c0;
        for (std::size_t n = 0; n < window.count; ++n) {
            const double t = window.time(n) - delay;
            const double acc = -ball_acceleration(ev, t); // upward
            const double jerk = -ball_jerk(ev, t);
            out.samples[n] += k * cos_t * (acc / (r * r) + jerk / (c0 * r));
        }
    };
    add_source(centre, 1.0);
    if (ground_reflective)
        add_source(image, -1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Volume displacement of the ground surface

enum class VolumeQuantity {
    Displacement, // integral of u_eps: D
    Flux,         // integral of w_eps: dD/dt
    FluxRate,     // integral of dw/dt: d2D/dt2
    Acceleration, // integral of a_eps: d3D/dt3
};

inline int derivative_order(VolumeQuantity q)
{
    return static_cast<int>(q);
}

/// Fine uniform spacing eps/16 over the disturbed disc, geometric beyond it.
inline RadialGrid volume_grid(const RegularizedField& f, double t, double max_radius = 0.0, double ramp_radius = 0.0)
{
    const double c_p = f.halfspace.c_s / f.halfspace.speed_ratio;
    const double front = c_p * std::max(t, 0.0);
    const double needed = front + 10.0 * f.epsilon;
    const double fine_until = front + 20.0 * f.epsilon;
    const double r_max = max_radius > 0.0 ? max_radius : 40.0 * fine_until;
    if (r_max < needed) {
        std::ostringstream msg;
        msg << "volume_displacement: radius " << r_max << " m does not cover the wavefronts at t = " << t
            << " s (needs at least " << needed << " m)";
        throw std::domain_error(msg.str());
    }
    RadialGridSpec spec;
    spec.spacing = f.epsilon / 16.0;
    spec.min_radius = spec.spacing / 2.0;
    spec.growth = 1.1;
    spec.uniform_until = fine_until;
    spec.outer_growth = 1.05;
    spec.max_radius = r_max;
    if (ramp_radius > 0.0)
        detail::resolve_ramp(spec, ramp_radius);
    return make_radial_grid(spec);
}

/// Area integral of u_eps (or a time derivative) over a disc of radius `max_radius`.
inline double volume_displacement(const RegularizedField& f, double t,
                                  VolumeQuantity q = VolumeQuantity::Displacement, double max_radius = 0.0,
                                  double ramp_radius = 0.0)
{
    const RadialGrid g = volume_grid(f, t, max_radius, ramp_radius);
    const int order = derivative_order(q);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.radius[i];
        const KernelEval e = evaluate(f, r, t);
        const double vals[4] = {e.u, e.w, e.v, e.a};
        double v = vals[order];
        if (ramp_radius > 0.0)
            v += detail::ramp_correction(f, r, t, ramp_radius, order);
        sum += g.weight[i] * v;
    }
    return sum;
}

/**
 * f_eps convolved with the exact volume displacement slope * t+, in closed
 * form: slope * (t/2 + (2t/pi) atan(t/b) - (t/pi) atan(t/2b)
 *                + (b/pi) ln((t^2 + 4b^2)/(t^2 + b^2))),  b = eps / c_s.
 */
inline double smoothed_volume_displacement(double slope, double eps, double c_s, double t)
{
    const double b = eps / c_s;
    const double pi = std::numbers::pi;
    return slope * (0.5 * t + 2.0 * t / pi * std::atan(t / b) - t / pi * std::atan(t / (2.0 * b))
                    + b / pi * std::log((t * t + 4.0 * b * b) / (t * t + b * b)));
}

// ---------------------------------------------------------------------------
// Metrics

/// 10 log10 of the ratio of time-integrated squared pressures.
inline double intensity_db(const PressureTrace& ground, const PressureTrace& ball)
{
    if (!ground.aligned_with(ball))
        throw std::invalid_argument("intensity_db: traces must share sample rate, start time and length");
    const double eb = ball.energy();
    if (!(eb > 0.0))
        throw std::domain_error("intensity_db: the ball trace is silent");
    return 10.0 * std::log10(ground.energy() / eb);
}

} // namespace groundsound

#endif
