/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance run: one PASS/FAIL line per criterion.
 *
 * Exit status is the number of failed criteria (0 when all pass).
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "groundsound/branch_scan.hpp"
#include "groundsound/fdtd.hpp"
#include "groundsound/lamb.hpp"
#include "groundsound/oracle.hpp"
#include "groundsound/radiation.hpp"
#include "groundsound/sweeps.hpp"

using namespace groundsound;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

ScenarioConfig steel_wood()
{
    return load_scenario_file(std::string(GS_SOURCE_DIR) + "/scenarios/steel_wood.cfg");
}

HalfspaceParams wood()
{
    return derive_halfspace(MaterialDb::builtin().at("wood"));
}

double cubic_residual(double a, cplx x)
{
    const auto c = rayleigh_cubic(a);
    const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    return std::abs(((c[0] * x + c[1]) * x + c[2]) * x + c[3]) / scale;
}

template <class F>
double fd6(F&& fn, double t, double h)
{
    return (-fn(t - 3 * h) + 9 * fn(t - 2 * h) - 45 * fn(t - h) + 45 * fn(t + h) - 9 * fn(t + 2 * h) + fn(t + 3 * h))
         / (60 * h);
}

// ---------------------------------------------------------------------------

void roots(Verdict& v)
{
    const auto r = rayleigh_roots(speed_ratio_for(0.25));
    const double expect[3] = {(3.0 + std::sqrt(3.0)) / 4.0, (3.0 - std::sqrt(3.0)) / 4.0, 0.25};
    double worst = 0.0;
    for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(r.kappa_sq[j] - expect[j]) / expect[j]);
    double resid = 0.0;
    for (int k = 0; k <= 49; ++k) {
        const double a = speed_ratio_for(0.01 * k);
        for (const auto& x : rayleigh_roots(a).kappa_sq)
            resid = std::max(resid, cubic_residual(a, x));
    }
    v.detail << "nu=0.25 max rel error " << worst << ", max residual over nu in [0,0.49] " << resid;
    v.require(r.all_real && worst < 1e-9, "roots at nu = 0.25");
    v.require(resid <= 1e-10, "residuals");
}

void closed_form_vs_oracle(Verdict& v)
{
    const auto hs = wood();
    const double eps = 9.888e-2, tau = eps / hs.c_s;
    const RegularizedField f(hs, eps);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.02 * std::pow(250.0, i / 19.0);
        std::vector<double> ours, ref;
        for (int k = 0; k < 20; ++k) {
            const double t = -5.0 * tau + (3.0 * r / hs.c_s + 10.0 * tau) * k / 19.0;
            ours.push_back(u_eps(f, r, t));
            ref.push_back(convolution_oracle(hs, eps, r, t));
        }
        double peak = 0.0, err = 0.0;
        for (int k = 0; k < 20; ++k) {
            peak = std::max(peak, std::abs(ref[k]));
            err = std::max(err, std::abs(ours[k] - ref[k]));
        }
        worst = std::max(worst, err / peak);
    }
    v.detail << "max |u_eps - oracle| / max|u| = " << worst << " on 20x20 (r, t)";
    v.require(worst < 1e-4, "closed form vs quadrature");
}

void derivative_chain(Verdict& v)
{
    const auto hs = wood();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double we = 0.0, ae = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double eps = 0.02 + 0.1 * U(rng);
        const RegularizedField f(hs, eps);
        const double r = 0.01 + 2.0 * U(rng);
        const double t = (-0.2 + 1.6 * U(rng)) * r / hs.c_s;
        const double h = 0.05 * eps / hs.c_s;
        const auto e = evaluate(f, r, t);
        const double u_static = hs.static_prefactor() / r;
        const double w_scale = std::max(std::abs(e.w), 1e-3 * u_static * hs.c_s / eps);
        const double a_scale = std::max(std::abs(e.a), 1e-3 * u_static * std::pow(hs.c_s / eps, 3));
        we = std::max(we, std::abs(e.w - fd6([&](double s) { return u_eps(f, r, s); }, t, h)) / w_scale);
        ae = std::max(ae, std::abs(e.a - fd6([&](double s) { return evaluate(f, r, s).v; }, t, h)) / a_scale);
    }
    v.detail << "200 random points: w rel " << we << ", a rel " << ae;
    v.require(we < 1e-6, "w_eps");
    v.require(ae < 1e-4, "a_eps");
}

void branch_and_continuity(Verdict& v)
{
    const auto base = wood();
    for (double nu : {0.05, 0.15, 0.25}) {
        const auto hs = halfspace_from_moduli(base.shear_modulus, nu, base.c_s);
        const auto rep = branch_safety_scan(hs, 9.888e-2, 1000000);
        v.detail << "nu=" << nu << ": " << rep.violations << "/" << rep.points << " violations; ";
        v.require(rep.applicable && rep.points >= 900000 && rep.violations == 0, "branch scan");
    }
    std::size_t jumps = 0, samples = 0;
    for (double eps : {0.01, 0.0989}) {
        const RegularizedField f(base, eps);
        for (double r : {0.003, 0.1, 1.0, 5.0}) {
            const double dt = eps / base.c_s / 40.0;
            const double t0 = -20 * eps / base.c_s, t_end = 1.5 * r / base.c_s + 40 * eps / base.c_s;
            const double bound = 0.05 * base.static_prefactor() / r * std::max(1.0, r / eps);
            double p2 = u_eps(f, r, t0), p1 = u_eps(f, r, t0 + dt);
            for (double t = t0 + 2 * dt; t < t_end; t += dt) {
                const double c = u_eps(f, r, t);
                ++samples;
                if (!std::isfinite(c) || std::abs(c - 2 * p1 + p2) > bound)
                    ++jumps;
                p2 = p1;
                p1 = c;
            }
        }
    }
    v.detail << "trace jump anomalies " << jumps << "/" << samples;
    v.require(jumps == 0, "trace continuity");
}

void eps_convergence(Verdict& v)
{
    const auto hs = wood();
    const double eps0 = 9.888e-2;
    const double gap = 5.0 * eps0 / hs.c_s;
    double worst_fine = 0.0, worst_coarse = 0.0;
    int points = 0;
    for (double r : {5.0, 10.0, 20.0}) {
        const auto wf = wavefront_times(hs, r);
        const double scale = hs.static_prefactor() / r;
        for (int k = 0; k <= 200; ++k) {
            const double t = 3.0 * wf.t_r * k / 200.0;
            if (std::abs(t - wf.t_p) < gap || std::abs(t - wf.t_s) < gap || std::abs(t - wf.t_r) < gap)
                continue;
            const double exact = pekeris_displacement(hs, r, t);
            const double coarse = std::abs(u_eps(RegularizedField(hs, eps0), r, t) - exact) / scale;
            const double fine = std::abs(u_eps(RegularizedField(hs, eps0 / 4.0), r, t) - exact) / scale;
            worst_coarse = std::max(worst_coarse, coarse);
            worst_fine = std::max(worst_fine, fine);
            ++points;
        }
    }
    v.detail << points << " points >= 5 eps/c_s from fronts: max error eps " << worst_coarse << ", eps/4 "
             << worst_fine << " (of static displacement)";
    v.require(worst_fine < 0.01, "eps/4 within 1%");
    v.require(worst_fine < worst_coarse, "error shrinks with eps");
}

void validation_rows(Verdict& v)
{
    const auto sc = steel_wood();
    const auto ev = hertz_event(sc);
    const double c_s = derive_halfspace(sc.ground).c_s;
    v.detail << "t_c " << ev.timescale << " s (" << 100 * (ev.timescale / 1.633e-4 - 1) << "%), eps " << ev.epsilon
             << " m (" << 100 * (ev.epsilon / 9.888e-2 - 1) << "%), c_s " << c_s << " m/s";
    v.require(std::abs(ev.timescale / 1.633e-4 - 1.0) <= 0.05, "t_c");
    v.require(std::abs(ev.epsilon / 9.888e-2 - 1.0) <= 0.05, "eps");
    v.require(std::lround(c_s) == 2422, "c_s");
}

void material_table(Verdict& v)
{
    const char* names[8] = {"steel", "ceramics", "granite", "concrete", "wood", "plastic", "soil", "wax"};
    const double reference[8][8] = {{-30.25, -21.30, -18.94, -11.83, -6.12, 4.15, 19.06, 19.58},
                                {-39.63, -30.69, -28.33, -21.22, -15.51, -5.23, 9.68, 10.19},
                                {-39.73, -30.78, -28.43, -21.32, -15.60, -5.33, 9.58, 10.10},
                                {-41.21, -32.27, -29.91, -22.80, -17.09, -6.81, 8.09, 8.61},
                                {-50.76, -41.81, -39.46, -32.34, -26.63, -16.36, -1.45, -0.93},
                                {-47.67, -38.73, -36.37, -29.26, -23.55, -13.27, 1.64, 2.15},
                                {-45.65, -36.71, -34.35, -27.24, -21.53, -11.25, 3.65, 4.17},
                                {-50.35, -41.41, -39.05, -31.94, -26.22, -15.95, -1.04, -0.53}};
    const auto& db = MaterialDb::builtin();
    std::vector<Material> mats;
    for (const char* n : names)
        mats.push_back(db.at(n));
    const auto m = material_matrix(steel_wood(), mats, mats, {});
    struct Cell { int b, g; };
    for (const Cell c : {Cell{0, 4}, Cell{0, 6}, Cell{4, 0}}) {
        const double d = m.db[c.b][c.g];
        v.detail << names[c.b] << "/" << names[c.g] << " " << d << " dB; ";
        v.require(std::abs(d - reference[c.b][c.g]) <= 1.5, std::string(names[c.b]) + "/" + names[c.g]);
    }
    int mismatches = 0;
    double worst = 0.0;
    for (int b = 0; b < 8; ++b)
        for (int g = 0; g < 8; ++g) {
            worst = std::max(worst, std::abs(m.db[b][g] - reference[b][g]));
            if (m.louder(b, g) != (reference[b][g] >= 0.0) || m.audible(b, g) != (reference[b][g] >= -13.0))
                ++mismatches;
        }
    v.detail << "classification mismatches " << mismatches << "/64, max |deviation| " << worst << " dB";
    v.require(mismatches == 0, "classifications");
}

void shear_speed_sweep(Verdict& v)
{
    const auto r = sweep_shear_speed(steel_wood(), {});
    const double lo = r.value("low_slope"), hi = r.value("high_slope"), k = r.value("knee_over_sqrt_c0R_tc");
    v.detail << "low slope " << lo << ", plateau slope " << hi << ", knee " << r.value("knee") << " m/s = " << k
             << " sqrt(c0 R / t_c)";
    v.require(std::abs(lo - 2.0) <= 0.2, "low slope");
    v.require(std::abs(hi) <= 0.1, "plateau slope");
    v.require(k >= 3.0 && k <= 4.0, "knee");
}

void contact_time_sweep(Verdict& v)
{
    const auto r = sweep_contact_time(steel_wood(), {});
    const double g = r.value("ground_low_slope"), b = r.value("ball_low_slope"), bh = r.value("ball_high_slope");
    v.detail << "low t_c slopes ground " << g << ", ball " << b << "; high t_c ball slope " << bh;
    v.require(std::abs(g + 3.0) <= 0.3, "ground low slope");
    v.require(std::abs(b + 3.0) <= 0.3, "ball low slope");
    v.require(std::abs(bh + 1.0) <= 0.3, "ball high slope");
}

void angle_sweep(Verdict& v)
{
    const auto r = sweep_angle(steel_wood(), {});
    double db10 = 0.0, db90 = 0.0;
    for (const auto& p : r.points) {
        if (p.x == 10.0)
            db10 = p.db();
        if (p.x == 90.0)
            db90 = p.db();
    }
    const double mn = r.value("ball_minimum_deg");
    v.detail << "ground/ball " << db10 << " dB at 10 deg vs " << db90 << " dB at 90 deg; ball minimum at " << mn
             << " deg";
    v.require(db10 > db90, "ordering");
    v.require(std::abs(mn - 5.0) <= 2.0, "ball minimum near 5 deg");
}

void volume_displacement_check(Verdict& v)
{
    const auto sc = steel_wood();
    const auto hs = derive_halfspace(sc.ground);
    const double eps0 = hertz_event(sc).epsilon;
    std::vector<double> dev;
    for (double eps : {eps0, eps0 / 2, eps0 / 4, eps0 / 8}) {
        const RegularizedField f(hs, eps);
        const double tau = eps / hs.c_s;
        double worst = 0.0;
        for (int k = 0; k <= 24; ++k) {
            const double t = (-4.0 + 0.5 * k) * tau;
            worst = std::max(worst, std::abs(volume_displacement(f, t) - pekeris_volume_displacement(hs, t)));
        }
        dev.push_back(worst);
    }
    v.detail << "max |D_eps - D| for eps/1,2,4,8:";
    for (double d : dev)
        v.detail << ' ' << d;
    for (std::size_t i = 1; i < dev.size(); ++i) {
        v.detail << (i == 1 ? "; ratios" : "") << ' ' << dev[i - 1] / dev[i];
        v.require(dev[i - 1] / dev[i] >= 2.0 * (1.0 - 1e-3), "halving ratio");
    }
    const RegularizedField f(hs, eps0);
    double ramp = 0.0;
    for (double t : {0.0, 5e-5, 2e-4, 6e-4}) {
        const double base = volume_displacement(f, t);
        for (double H : {0.01, 0.02, 0.10})
            ramp = std::max(ramp, std::abs(volume_displacement(f, t, VolumeQuantity::Displacement, 0.0, H) - base)
                                      / std::abs(base));
    }
    v.detail << "; ramp-origin max rel change " << ramp;
    v.require(ramp <= 1e-3, "ramp variant");
}

void fdtd_checks(Verdict& v)
{
    // Free-space pulse speed.
    {
        FdtdSetup s;
        s.spacing = 0.005;
        s.cells = {64, 64, 64};
        s.ground_plane = false;
        s.origin = Vec3{-0.16, -0.16, -0.16};
        WaveGrid g(s);
        const double sig = 4.0 * s.spacing;
        g.set_initial([&](const Vec3& p) { return std::exp(-p.dot(p) / (2 * sig * sig)); });
        const Vec3 m1{0.05, 0, 0}, m2{0.10, 0, 0};
        double b1 = 0, t1 = 0, b2 = 0, t2 = 0;
        for (int n = 0; n < 600; ++n) {
            g.step();
            if (const double a = g.sample(m1); a > b1) {
                b1 = a;
                t1 = g.time();
            }
            if (const double b = g.sample(m2); b > b2) {
                b2 = b;
                t2 = g.time();
            }
        }
        const double speed = 0.05 / (t2 - t1);
        v.detail << "pulse speed " << speed << " m/s; ";
        v.require(std::abs(speed / 343.0 - 1.0) <= 0.02, "pulse speed");
    }

    auto sc = steel_wood();
    sc.fdtd.spacing = 0.005;
    sc.fdtd.cells = {64, 64, 64};
    const auto ev = hertz_event(sc);
    const auto hs = derive_halfspace(sc.ground);

    // Ball shader in free field against the compact dipole.
    {
        const double h = sc.fdtd.spacing;
        FdtdSetup s;
        s.spacing = h;
        // The microphone must sit well clear of the top sponge.
        s.cells = {48, 48, 96};
        s.ground_plane = false;
        s.origin = Vec3{-24 * h, -24 * h, -0.12};
        WaveGrid g(s);
        const Vec3 centre{0, 0, ev.radius};
        g.add_solid_sphere(centre, ev.radius, g.add_shader(ball_shader(ev)));
        const Vec3 L{0, 0, ev.radius + 0.2};
        const auto [t0, t1] = scene_interval({ev}, {L}, sc.air, 0.0);
        g.set_time(t0);
        PressureTrace tr;
        tr.sample_rate = 1.0 / g.dt();
        tr.start_time = t0 + g.dt();
        while (g.time() < t1) {
            g.step();
            tr.samples.push_back(g.sample(L));
        }
        const auto ref = ball_dipole_pressure(ev, L, tr.window(), sc.air, false);
        const double ratio = tr.peak() / ref.peak();
        v.detail << "free-field ball peak / dipole " << ratio << "; ";
        v.require(std::abs(ratio - 1.0) <= 0.20, "ball far field");
    }

    // Steel-on-wood scene: solo runs, superposition and the ground peak.
    const auto r = run_scene(sc);
    double sup = 0.0;
    for (std::size_t i = 0; i < r.combined[0].samples.size(); ++i)
        sup = std::max(sup, std::abs(r.combined[0].samples[i] - r.ground[0].samples[i] - r.ball[0].samples[i]));
    sup /= r.combined[0].peak();
    v.detail << "superposition residual " << sup << " of peak; ";
    v.require(sup < 1e-10, "superposition");
    const auto ray = rayleigh_ground_pressure(ev, hs, sc.listening_points[0], r.ground[0].window(), sc.air);
    const double gratio = r.ground[0].peak() / ray.peak();
    v.detail << "ground peak FDTD / Rayleigh " << gratio;
    v.require(std::abs(gratio - 1.0) <= 0.25, "ground peak");
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<void(Verdict&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"Rayleigh roots", roots},
        {"closed form vs quadrature oracle", closed_form_vs_oracle},
        {"derivative chain", derivative_chain},
        {"branch safety and continuity", branch_and_continuity},
        {"eps convergence to the exact response", eps_convergence},
        {"contact parameters of the validation scenario", validation_rows},
        {"material intensity matrix", material_table},
        {"shear-speed sweep", shear_speed_sweep},
        {"contact-time sweep", contact_time_sweep},
        {"elevation ordering", angle_sweep},
        {"volume displacement", volume_displacement_check},
        {"wavesolver", fdtd_checks},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        const auto tic = std::chrono::steady_clock::now();
        try {
            criteria[i].run(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
        failed += v.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    v.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
