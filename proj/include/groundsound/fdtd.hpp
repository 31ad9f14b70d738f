/**
 * @file fdtd.hpp
 * @brief Cell-centred 3-D acoustic wavesolver with Neumann boundaries driven by
 *        acoustic shaders, a graded sponge at the open faces, and the ground
 *        and rigid-ball shaders used for impact scenes.
 *
 * Update (leapfrog, second order in space and time):
 *   (1+s) p+ = 2p - (1-s) p- + c^2 dt^2 L p + c alpha dt L (p - p-)
 * with s = sigma dt / 2 from the sponge. A boundary face with normal n (into
 * the air) and normal acceleration a_n sets the ghost value
 * p_ghost = p + rho0 a_n dx, i.e. dp/dn = -rho0 a_n. Outer faces carry a
 * first-order radiation condition behind the sponge; both enter s, so the
 * scheme's discrete energy can only decrease there.
 */

#ifndef GROUNDSOUND_FDTD_HPP
#define GROUNDSOUND_FDTD_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "contact.hpp"
#include "errors.hpp"
#include "lamb.hpp"
#include "parallel.hpp"
#include "radiation.hpp"
#include "regularized.hpp"
#include "scenario.hpp"
#include "trace.hpp"
#include "vec3.hpp"

namespace groundsound {

/// Normal acceleration (m/s^2, along `normal`, which points into the air) of a
/// boundary point at time t.
using AcousticShader = std::function<double(const Vec3& point, const Vec3& normal, double t)>;

/// Sum of -J a_eps(r, t - t_impact) over the impacts, projected on the normal.
/// Samples outside each node's wavefront span +- 30 kernel widths are skipped.
inline AcousticShader ground_shader(std::vector<ContactEvent> events, const HalfspaceParams& hs)
{
    std::vector<RegularizedField> fields;
    for (const auto& ev : events)
        fields.emplace_back(hs, ev.epsilon);
    return [events = std::move(events), fields = std::move(fields), hs](const Vec3& p, const Vec3& n,
                                                                      double t) -> double {
        double acc = 0.0;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const auto& ev = events[e];
            const double r = p.planar_distance(ev.impact_point);
            if (r < kMinEvalRadius || ev.impulse == 0.0)
                continue;
            const double s = t - ev.impact_time;
            const auto wf = wavefront_times(hs, r);
            const double pad = kKernelTailWidths * ev.kernel_time();
            if (s < wf.t_p - pad || s > wf.t_r + pad)
                continue;
            acc -= ev.impulse * a_eps(fields[e], r, s);
        }
        return acc * n.z;
    };
}

/// Rigid translation of the ball: upward acceleration J f_eps / m projected on the normal.
inline AcousticShader ball_shader(const ContactEvent& ev)
{
    return [ev](const Vec3&, const Vec3& n, double t) { return -ball_acceleration(ev, t) * n.z; };
}

/// Ball shader evaluated with the sphere's own outward normal at `point`.
inline double ball_surface_acceleration(const ContactEvent& ev, const Vec3& point, double t)
{
    const Vec3 centre = ev.impact_point + Vec3{0.0, 0.0, ev.radius};
    const Vec3 d = point - centre;
    const double len = d.norm();
    if (!(len > 0.0))
        throw std::domain_error("ball_surface_acceleration: point at the ball centre");
    return ball_shader(ev)(point, d * (1.0 / len), t);
}

struct FdtdSetup {
    double spacing = 0.005;
    std::array<int, 3> cells{64, 64, 64};
    Vec3 origin;                // min corner of the domain
    double alpha = 2e-6;        // viscosity length, m
    int sponge_cells = 8;
    double courant = 0.9;       // dt = courant * dx / (c0 sqrt 3)
    double sponge_strength = 0.1; // peak sigma in units of c0 / dx; stronger grading reflects the low-frequency field
    bool ground_plane = true;   // z = origin.z is a Neumann ground; otherwise an open face
    AirParams air;
};

class WaveGrid {
public:
    explicit WaveGrid(const FdtdSetup& s) : setup_(s)
    {
        if (!(s.spacing > 0.0) || s.cells[0] < 3 || s.cells[1] < 3 || s.cells[2] < 3)
            throw ConfigError("fdtd: spacing must be positive and every dimension at least 3 cells");
        if (!(s.courant > 0.0 && s.courant <= 1.0))
            throw ConfigError("fdtd: courant number must lie in (0, 1]");
        nx_ = s.cells[0];
        ny_ = s.cells[1];
        nz_ = s.cells[2];
        const std::size_t n = static_cast<std::size_t>(nx_) * ny_ * nz_;
        p_.assign(n, 0.0);
        prev_.assign(n, 0.0);
        next_.assign(n, 0.0);
        q_.assign(n, 0.0);
        solid_.assign(n, 0);
        sponge_.assign(n, 0.0);
        dt_ = s.courant * s.spacing / (s.air.sound_speed * std::sqrt(3.0));
        build_sponge();
        rebuild_faces();
    }

    const FdtdSetup& setup() const { return setup_; }
    double dt() const { return dt_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }
    std::size_t steps() const { return steps_; }
    std::array<int, 3> dims() const { return {nx_, ny_, nz_}; }

    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(k) * ny_ + j) * nx_ + i;
    }
    Vec3 centre(int i, int j, int k) const
    {
        const double h = setup_.spacing;
        return setup_.origin + Vec3{(i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h};
    }
    bool solid(int i, int j, int k) const { return solid_[index(i, j, k)] != 0; }
    std::size_t solid_count() const { return static_cast<std::size_t>(std::count(solid_.begin(), solid_.end(), 1)); }
    std::size_t boundary_faces() const { return faces_.size(); }

    /// Registers a shader; returns its id. Shader 0 is never assigned.
    int add_shader(AcousticShader s)
    {
        shaders_.push_back(std::move(s));
        return static_cast<int>(shaders_.size());
    }

    /// Replace (or with id 0 silence) the shader driving a boundary kind.
    void set_ground_shader(int id) { ground_shader_ = id; rebuild_faces(); }

    /// Rasterize a rigid sphere at rest: cells whose centre is inside become solid.
    void add_solid_sphere(const Vec3& c, double radius, int shader_id)
    {
        for (int k = 0; k < nz_; ++k)
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i)
                    if ((centre(i, j, k) - c).norm() < radius) {
                        solid_[index(i, j, k)] = 1;
                        p_[index(i, j, k)] = prev_[index(i, j, k)] = 0.0;
                        solid_shader_[index(i, j, k)] = shader_id;
                    }
        rebuild_faces();
    }

    /// Point forcing s(t) added to the Laplacian of the containing cell (Pa/m^2).
    void add_point_source(const Vec3& at, std::function<double(double)> s)
    {
        sources_.push_back({locate(at), std::move(s)});
    }

    void set_initial(const std::function<double(const Vec3&)>& fn)
    {
        for (int k = 0; k < nz_; ++k)
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i) {
                    const auto id = index(i, j, k);
                    p_[id] = prev_[id] = solid_[id] ? 0.0 : fn(centre(i, j, k));
                }
    }

    const std::vector<double>& pressure() const { return p_; }
    std::vector<double>& pressure_mut() { return p_; }
    std::vector<double>& previous_mut() { return prev_; }

    /// One leapfrog step from time() to time() + dt().
    void step()
    {
        const double h = setup_.spacing;
        const double c = setup_.air.sound_speed;
        const double c2dt2 = c * c * dt_ * dt_;
        const double kappa = setup_.alpha / (c * dt_); // weight of (p - p-) in the combined field
        const double rho = setup_.air.density;

        // Boundary accelerations at this step.
        evaluate_shaders(time_);
        const std::size_t nf = faces_.size();
        for (std::size_t f = 0; f < nf; ++f)
            face_src_[f] = rho * (an_[f] + kappa * (an_[f] - an_prev_[f])) / h;

        const std::size_t ncell = p_.size();
        for (std::size_t n = 0; n < ncell; ++n)
            q_[n] = p_[n] + kappa * (p_[n] - prev_[n]);

        const long plane = static_cast<long>(nx_) * ny_;
        const long row = nx_;
        const double inv_h2 = 1.0 / (h * h);
        const bool ground = setup_.ground_plane;
        parallel_blocks(static_cast<std::size_t>(nz_), [&](std::size_t kb) {
            const int k = static_cast<int>(kb);
            for (int j = 0; j < ny_; ++j) {
                const std::size_t base = index(0, j, k);
                for (int i = 0; i < nx_; ++i) {
                    const std::size_t id = base + static_cast<std::size_t>(i);
                    double lap;
                    if (interior_[id]) {
                        lap = q_[id - 1] + q_[id + 1] + q_[id - row] + q_[id + row] + q_[id - plane] + q_[id + plane]
                              - 6.0 * q_[id];
                    } else if (solid_[id]) {
                        next_[id] = 0.0;
                        continue;
                    } else {
                        const double qc = q_[id];
                        lap = 0.0;
                        auto nb = [&](bool inside, long off, bool) {
                            if (!inside)
                                return; // open faces are absorbed through the diagonal damping
                            const auto o = static_cast<std::size_t>(static_cast<long>(id) + off);
                            if (!solid_[o]) // a solid neighbour is the homogeneous part of a Neumann face
                                lap += q_[o] - qc;
                        };
                        nb(i > 0, -1, false);
                        nb(i + 1 < nx_, 1, false);
                        nb(j > 0, -row, false);
                        nb(j + 1 < ny_, row, false);
                        nb(k > 0, -plane, ground);
                        nb(k + 1 < nz_, plane, false);
                    }
                    lap *= inv_h2;
                    const double sp = sponge_[id];
                    next_[id] = (2.0 * p_[id] - (1.0 - sp) * prev_[id] + c2dt2 * lap) / (1.0 + sp);
                }
            }
        });
        // Inhomogeneous boundary and point-source terms.
        for (std::size_t f = 0; f < nf; ++f) {
            const auto id = faces_[f].cell;
            next_[id] += c2dt2 * face_src_[f] / (1.0 + sponge_[id]);
        }
        double drive = 0.0;
        for (std::size_t f = 0; f < nf; ++f)
            drive = std::max(drive, std::abs(face_src_[f]));
        for (const auto& src : sources_) {
            const double v = src.fn(time_);
            drive = std::max(drive, std::abs(v));
            next_[src.cell] += c2dt2 * v / (1.0 + sponge_[src.cell]);
        }
        forcing_ += c2dt2 * drive;

        std::swap(prev_, p_);
        std::swap(p_, next_);
        std::swap(an_prev_, an_);
        time_ += dt_;
        ++steps_;
        check_stability();
    }

    /// Trilinear interpolation between air-cell centres.
    double sample(const Vec3& at) const
    {
        const double h = setup_.spacing;
        const Vec3 g = (at - setup_.origin) * (1.0 / h) - Vec3{0.5, 0.5, 0.5};
        const int i0 = static_cast<int>(std::floor(g.x)), j0 = static_cast<int>(std::floor(g.y)),
                  k0 = static_cast<int>(std::floor(g.z));
        if (i0 < 0 || j0 < 0 || k0 < 0 || i0 + 1 >= nx_ || j0 + 1 >= ny_ || k0 + 1 >= nz_)
            throw ConfigError("fdtd: microphone outside the grid interior");
        const double fx = g.x - i0, fy = g.y - j0, fz = g.z - k0;
        double sum = 0.0, wsum = 0.0;
        for (int c = 0; c < 8; ++c) {
            const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
            const auto id = index(i0 + di, j0 + dj, k0 + dk);
            if (solid_[id])
                continue;
            const double w = (di ? fx : 1 - fx) * (dj ? fy : 1 - fy) * (dk ? fz : 1 - fz);
            sum += w * p_[id];
            wsum += w;
        }
        return wsum > 0.0 ? sum / wsum : 0.0;
    }

    bool contains(const Vec3& at) const
    {
        const double h = setup_.spacing;
        const Vec3 g = (at - setup_.origin) * (1.0 / h) - Vec3{0.5, 0.5, 0.5};
        return g.x >= 0 && g.y >= 0 && g.z >= 0 && g.x < nx_ - 1 && g.y < ny_ - 1 && g.z < nz_ - 1;
    }

    /**
     * Discrete energy of the homogeneous problem at the half step just taken,
     * ||d+||^2 / (c dt)^2 - <p+, L p> + (alpha / (2 c dt)) <d+, L d+>, d+ = p+ - p,
     * scaled by dx^3 / (2 rho0 c^2). Non-increasing without active boundaries.
     */
    double energy() const
    {
        const double c = setup_.air.sound_speed;
        const double cdt2 = c * c * dt_ * dt_;
        const double beta = setup_.alpha / (c * dt_);
        std::vector<double> d(p_.size());
        for (std::size_t n = 0; n < p_.size(); ++n)
            d[n] = p_[n] - prev_[n];
        const auto lp_prev = apply_laplacian(prev_);
        const auto ld = apply_laplacian(d);
        double e = 0.0;
        for (std::size_t n = 0; n < p_.size(); ++n) {
            if (solid_[n])
                continue;
            e += d[n] * d[n] / cdt2 - p_[n] * lp_prev[n] + 0.5 * beta * d[n] * ld[n];
        }
        const double h = setup_.spacing;
        return e * h * h * h / (2.0 * setup_.air.density * c * c);
    }

    double peak() const
    {
        double m = 0.0;
        for (double v : p_)
            m = std::max(m, std::abs(v));
        return m;
    }

    /// Cell indices of the z-slice through `at`, for snapshots.
    int slice_index(double z) const
    {
        return std::clamp(static_cast<int>(std::floor((z - setup_.origin.z) / setup_.spacing)), 0, nz_ - 1);
    }

private:
    struct Face {
        std::size_t cell;
        Vec3 point;
        Vec3 normal;
        int shader;
    };
    struct PointSource {
        std::size_t cell;
        std::function<double(double)> fn;
    };

    std::size_t locate(const Vec3& at) const
    {
        const double h = setup_.spacing;
        const Vec3 g = (at - setup_.origin) * (1.0 / h);
        const int i = static_cast<int>(std::floor(g.x)), j = static_cast<int>(std::floor(g.y)),
                  k = static_cast<int>(std::floor(g.z));
        if (i < 0 || j < 0 || k < 0 || i >= nx_ || j >= ny_ || k >= nz_)
            throw ConfigError("fdtd: point source outside the grid");
        return index(i, j, k);
    }

    void build_sponge()
    {
        const double cdt_h = setup_.air.sound_speed * dt_ / setup_.spacing;
        const int w = setup_.sponge_cells;
        const double smax = 0.5 * setup_.sponge_strength * cdt_h;
        for (int k = 0; k < nz_; ++k)
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i) {
                    double s = 0.0;
                    if (w > 0) {
                        int d = std::min({i, nx_ - 1 - i, j, ny_ - 1 - j, nz_ - 1 - k});
                        if (!setup_.ground_plane)
                            d = std::min(d, k);
                        if (d < w) {
                            const double x = double(w - d) / w;
                            s = smax * x * x;
                        }
                    }
                    // First-order radiation condition dp/dt + c dp/dn = 0 on each open face, centred in time.
                    const int open = (i == 0) + (i == nx_ - 1) + (j == 0) + (j == ny_ - 1) + (k == nz_ - 1)
                                     + (k == 0 && !setup_.ground_plane);
                    sponge_[index(i, j, k)] = s + open * 0.5 * cdt_h;
                }
    }

    void rebuild_faces()
    {
        interior_.assign(p_.size(), 0);
        for (int k = 1; k + 1 < nz_; ++k)
            for (int j = 1; j + 1 < ny_; ++j)
                for (int i = 1; i + 1 < nx_; ++i)
                    interior_[index(i, j, k)] = !solid_[index(i, j, k)] && !solid_[index(i - 1, j, k)]
                                                && !solid_[index(i + 1, j, k)] && !solid_[index(i, j - 1, k)]
                                                && !solid_[index(i, j + 1, k)] && !solid_[index(i, j, k - 1)]
                                                && !solid_[index(i, j, k + 1)];
        faces_.clear();
        const double h = setup_.spacing;
        for (int k = 0; k < nz_; ++k)
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i) {
                    const auto id = index(i, j, k);
                    if (solid_[id])
                        continue;
                    const Vec3 c = centre(i, j, k);
                    if (k == 0 && setup_.ground_plane && ground_shader_ != 0)
                        faces_.push_back({id, c - Vec3{0, 0, 0.5 * h}, {0, 0, 1}, ground_shader_});
                    const int di[6] = {-1, 1, 0, 0, 0, 0}, dj[6] = {0, 0, -1, 1, 0, 0}, dk[6] = {0, 0, 0, 0, -1, 1};
                    for (int q = 0; q < 6; ++q) {
                        const int a = i + di[q], b = j + dj[q], e = k + dk[q];
                        if (a < 0 || b < 0 || e < 0 || a >= nx_ || b >= ny_ || e >= nz_)
                            continue;
                        const auto o = index(a, b, e);
                        if (!solid_[o])
                            continue;
                        const auto it = solid_shader_.find(o);
                        const int sh = it == solid_shader_.end() ? 0 : it->second;
                        if (sh == 0)
                            continue;
                        const Vec3 dir{double(di[q]), double(dj[q]), double(dk[q])};
                        faces_.push_back({id, c + dir * (0.5 * h), dir * -1.0, sh});
                    }
                }
        an_.assign(faces_.size(), 0.0);
        an_prev_.assign(faces_.size(), 0.0);
        face_src_.assign(faces_.size(), 0.0);
        primed_ = false;
    }

    void evaluate_shaders(double t)
    {
        auto eval = [&](std::vector<double>& out, double at) {
            constexpr std::size_t kBlock = 256;
            const std::size_t blocks = (faces_.size() + kBlock - 1) / kBlock;
            parallel_blocks(blocks, [&](std::size_t b) {
                for (std::size_t f = b * kBlock; f < std::min(faces_.size(), (b + 1) * kBlock); ++f) {
                    const auto& face = faces_[f];
                    out[f] = shaders_[static_cast<std::size_t>(face.shader - 1)](face.point, face.normal, at);
                }
            });
        };
        if (!primed_) {
            eval(an_prev_, t - dt_);
            primed_ = true;
        }
        eval(an_, t);
    }

    /// Homogeneous-boundary Laplacian (ghosts mirror for Neumann, zero beyond open faces).
    std::vector<double> apply_laplacian(const std::vector<double>& q) const
    {
        std::vector<double> out(q.size(), 0.0);
        const double inv_h2 = 1.0 / (setup_.spacing * setup_.spacing);
        const long plane = static_cast<long>(nx_) * ny_;
        for (int k = 0; k < nz_; ++k)
            for (int j = 0; j < ny_; ++j)
                for (int i = 0; i < nx_; ++i) {
                    const auto id = index(i, j, k);
                    if (solid_[id])
                        continue;
                    double lap = 0.0;
                    auto nb = [&](bool inside, long off, bool) {
                        if (!inside)
                            return;
                        const auto o = static_cast<std::size_t>(static_cast<long>(id) + off);
                        if (!solid_[o])
                            lap += q[o] - q[id];
                    };
                    nb(i > 0, -1, false);
                    nb(i + 1 < nx_, 1, false);
                    nb(j > 0, -static_cast<long>(nx_), false);
                    nb(j + 1 < ny_, nx_, false);
                    nb(k > 0, -plane, setup_.ground_plane);
                    nb(k + 1 < nz_, plane, false);
                    out[id] = lap * inv_h2;
                }
        return out;
    }

    void check_stability()
    {
        const double pk = peak();
        if (!std::isfinite(pk)) {
            std::ostringstream msg;
            msg << "fdtd: non-finite pressure at step " << steps_ << " (t = " << time_ << " s)";
            throw NumericalError(msg.str());
        }
        peaks_.push_back(pk);
        constexpr std::size_t kLag = 50;
        if (peaks_.size() > kLag) {
            const std::size_t n = peaks_.size() - kLag;
            running_max_ = std::max(running_max_, peaks_[n - 1]);
            // Growth is measured against what the boundaries and sources have injected so far.
            const double ref = std::max(running_max_, forcing_);
            if (ref > 0.0 && pk > 1e6 * ref) {
                std::ostringstream msg;
                msg << "fdtd: field grew by more than 1e6x (peak " << pk << " Pa at step " << steps_
                    << ", earlier maximum " << running_max_ << " Pa); check the Courant number and spacing";
                throw NumericalError(msg.str());
            }
        }
    }

    FdtdSetup setup_;
    int nx_ = 0, ny_ = 0, nz_ = 0;
    double dt_ = 0.0;
    double time_ = 0.0;
    std::size_t steps_ = 0;
    std::vector<double> p_, prev_, next_, q_, sponge_;
    std::vector<std::uint8_t> solid_, interior_;
    std::unordered_map<std::size_t, int> solid_shader_;
    std::vector<AcousticShader> shaders_;
    int ground_shader_ = 0;
    std::vector<Face> faces_;
    std::vector<double> an_, an_prev_, face_src_;
    bool primed_ = false;
    std::vector<PointSource> sources_;
    std::vector<double> peaks_;
    double running_max_ = 0.0;
    double forcing_ = 0.0; // cumulative bound on boundary and source increments
};

/**
 * z-slice of the pressure field as raw little-endian float32 (x fastest) in
 * `path`, with a JSON header in `path`.json giving shape, spacing, origin,
 * slice height and time.
 */
inline void write_snapshot(const std::string& path, const WaveGrid& grid, int k)
{
    const auto [nx, ny, nz] = grid.dims();
    if (k < 0 || k >= nz)
        throw std::out_of_range("write_snapshot: slice index outside the grid");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const float v = static_cast<float>(grid.pressure()[grid.index(i, j, k)]);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    const auto& s = grid.setup();
    nlohmann::json h = {{"format", "float32-le"},
                        {"nx", nx},
                        {"ny", ny},
                        {"spacing", s.spacing},
                        {"origin", {s.origin.x, s.origin.y}},
                        {"z", grid.centre(0, 0, k).z},
                        {"time", grid.time()},
                        {"step", grid.steps()}};
    std::ofstream(path + ".json") << h.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Scenes

struct FdtdResult {
    std::vector<PressureTrace> combined; // one per microphone
    std::vector<PressureTrace> ground;   // solo runs; empty unless requested
    std::vector<PressureTrace> ball;
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t solid_cells = 0;
};

/// Which shaders are active in a run.
struct SceneSources {
    bool ground = true;
    bool ball = true;
};

inline FdtdSetup fdtd_setup(const ScenarioConfig& sc)
{
    FdtdSetup s;
    s.spacing = sc.fdtd.spacing;
    s.cells = sc.fdtd.cells;
    s.alpha = sc.fdtd.alpha;
    s.sponge_cells = sc.fdtd.sponge_cells;
    s.courant = sc.fdtd.courant;
    s.air = sc.air;
    if (sc.fdtd.origin) {
        s.origin = *sc.fdtd.origin;
        if (s.origin.z != 0.0)
            throw ConfigError("fdtd.origin: the domain floor must be the ground plane z = 0");
    } else {
        const Vec3 p = sc.impacts().front().point;
        s.origin = {p.x - 0.5 * s.cells[0] * s.spacing, p.y - 0.5 * s.cells[1] * s.spacing, 0.0};
    }
    return s;
}

/// Start and end time of a scene: quiet before the first impact, long enough for every mic.
inline std::pair<double, double> scene_interval(const std::vector<ContactEvent>& events, const std::vector<Vec3>& mics,
                                                const AirParams& air, double duration)
{
    double start = std::numeric_limits<double>::infinity(), end = -start;
    for (const auto& ev : events) {
        start = std::min(start, ev.impact_time - kKernelTailWidths * ev.kernel_time());
        for (const auto& m : mics)
            end = std::max(end, ev.impact_time + (m - ev.impact_point).norm() / air.sound_speed
                                    + 2.0 * kKernelTailWidths * ev.kernel_time());
    }
    if (duration > 0.0)
        end = start + duration;
    return {start, end};
}

/**
 * One simulation of the scene with the chosen shaders active. Ball geometry is
 * always present (at rest, touching the ground at the impact point) so that
 * solo runs superpose exactly.
 */
inline std::vector<PressureTrace> run_scene_once(const ScenarioConfig& sc, const SceneSources& active,
                                                 FdtdResult* info = nullptr,
                                                 const std::function<void(const WaveGrid&)>& on_step = {})
{
    const auto events = hertz_events(sc);
    const HalfspaceParams hs = derive_halfspace(sc.ground);
    WaveGrid grid(fdtd_setup(sc));
    for (const auto& m : sc.listening_points)
        if (!grid.contains(m))
            throw ConfigError("fdtd: listening point outside the simulation grid");

    std::vector<ContactEvent> ground_events = events;
    if (!active.ground)
        for (auto& ev : ground_events)
            ev.impulse = 0.0;
    grid.set_ground_shader(grid.add_shader(ground_shader(ground_events, hs)));
    for (const auto& ev : events) {
        auto silent = ev;
        if (!active.ball)
            silent.impulse = 0.0;
        grid.add_solid_sphere(ev.impact_point + Vec3{0.0, 0.0, ev.radius}, ev.radius,
                              grid.add_shader(ball_shader(silent)));
    }
    const auto [t0, t1] = scene_interval(events, sc.listening_points, sc.air, sc.fdtd.duration);
    grid.set_time(t0);
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / grid.dt()));
    std::vector<PressureTrace> traces(sc.listening_points.size());
    for (auto& tr : traces) {
        tr.sample_rate = 1.0 / grid.dt();
        tr.start_time = t0 + grid.dt();
        tr.samples.reserve(steps);
    }
    for (std::size_t n = 0; n < steps; ++n) {
        grid.step();
        for (std::size_t m = 0; m < traces.size(); ++m)
            traces[m].samples.push_back(grid.sample(sc.listening_points[m]));
        if (on_step)
            on_step(grid);
    }
    if (info) {
        info->dt = grid.dt();
        info->steps = steps;
        info->solid_cells = grid.solid_count();
    }
    return traces;
}

/// Combined run plus, when fdtd.solo_traces is set, ground-only and ball-only runs.
inline FdtdResult run_scene(const ScenarioConfig& sc, const std::function<void(const WaveGrid&)>& on_step = {})
{
    FdtdResult res;
    res.combined = run_scene_once(sc, {true, true}, &res, on_step);
    if (sc.fdtd.solo_traces) {
        res.ground = run_scene_once(sc, {true, false});
        res.ball = run_scene_once(sc, {false, true});
    }
    return res;
}

} // namespace groundsound

#endif
