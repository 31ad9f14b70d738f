/**
 * @file groundsound.cpp
 * @brief Command-line front end: scenario in, CSV/WAV and a run manifest out.
 *
 * Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "groundsound/branch_scan.hpp"
#include "groundsound/fdtd.hpp"
#include "groundsound/lamb.hpp"
#include "groundsound/radiation.hpp"
#include "groundsound/sweeps.hpp"

namespace gs = groundsound;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string scenario;
    std::string out = "groundsound_out";
    std::vector<std::string> sets;
    int threads = 1;
};

json vec(const gs::Vec3& v)
{
    return json::array({v.x, v.y, v.z});
}

json material_json(const gs::Material& m)
{
    return {{"name", m.name},
            {"youngs_modulus", m.youngs_modulus},
            {"poisson", m.poisson},
            {"density", m.density},
            {"shear_modulus", m.shear_modulus()},
            {"shear_speed", m.shear_speed()}};
}

json halfspace_json(const gs::HalfspaceParams& hs)
{
    json j = {{"poisson", hs.poisson},
              {"shear_modulus", hs.shear_modulus},
              {"c_p", hs.c_p},
              {"c_s", hs.c_s},
              {"c_r", hs.c_r()},
              {"speed_ratio", hs.speed_ratio},
              {"gamma", hs.gamma},
              {"all_real_roots", hs.all_real_roots}};
    json roots = json::array();
    for (const auto& k : hs.kappa_sq)
        roots.push_back({k.real(), k.imag()});
    j["kappa_sq"] = roots;
    return j;
}

json event_json(const gs::ContactEvent& ev)
{
    return {{"impact_point", vec(ev.impact_point)},
            {"impact_time", ev.impact_time},
            {"normal_velocity", ev.normal_velocity},
            {"mass", ev.mass},
            {"radius", ev.radius},
            {"effective_stiffness", ev.effective_stiffness},
            {"contact_time", ev.timescale},
            {"epsilon", ev.epsilon},
            {"kernel_time", ev.kernel_time()},
            {"impulse", ev.impulse},
            {"contact_radius", ev.contact_radius}};
}

json scenario_json(const gs::ScenarioConfig& sc)
{
    json impacts = json::array();
    for (const auto& i : sc.impacts())
        impacts.push_back({{"point", vec(i.point)}, {"time", i.time}, {"normal_velocity", i.normal_velocity}});
    json listeners = json::array();
    for (const auto& p : sc.listening_points)
        listeners.push_back(vec(p));
    const auto& r = sc.radiation;
    const auto& f = sc.fdtd;
    json j = {{"ground", material_json(sc.ground)},
              {"object", material_json(sc.object)},
              {"ball_radius", sc.ball_radius},
              {"restitution", sc.restitution},
              {"contact_time_override", sc.contact_time ? json(*sc.contact_time) : json(nullptr)},
              {"impacts", impacts},
              {"listening_points", listeners},
              {"air", {{"density", sc.air.density}, {"sound_speed", sc.air.sound_speed}}},
              {"output",
               {{"sample_rate", sc.output.sample_rate}, {"duration", sc.output.duration}, {"wav", sc.output.wav}}},
              {"radiation",
               {{"max_radius", r.max_radius},
                {"radial_spacing", r.radial_spacing},
                {"min_radius", r.min_radius},
                {"geometric_ratio", r.geometric_ratio},
                {"angular_samples", r.angular_samples},
                {"deposit", r.deposit == gs::DepositRule::Linear ? "linear" : "nearest"},
                {"ball_reflective", r.ball_reflective},
                {"analysis_rate", r.analysis_rate},
                {"ramp_radius", r.ramp_radius}}},
              {"fdtd",
               {{"spacing", f.spacing},
                {"cells", json::array({f.cells[0], f.cells[1], f.cells[2]})},
                {"origin", f.origin ? vec(*f.origin) : json(nullptr)},
                {"alpha", f.alpha},
                {"sponge_cells", f.sponge_cells},
                {"courant", f.courant},
                {"duration", f.duration},
                {"solo_traces", f.solo_traces},
                {"snapshot_every", f.snapshot_every}}}};
    return j;
}

class Run {
public:
    Run(std::string command, const Common& c) : command_(std::move(command)), common_(c)
    {
        gs::set_thread_count(c.threads);
        if (c.scenario.empty())
            throw gs::ConfigError(command_ + ": --scenario is required");
        db_ = gs::MaterialDb::from_environment();
        sc_ = gs::load_scenario_file(c.scenario, db_, c.sets);
        if (sc_.ground.poisson >= gs::kRealRootPoissonBound) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "ground Poisson ratio %.6g is at or above %.4g", sc_.ground.poisson,
                          gs::kRealRootPoissonBound);
            warn(std::string(buf) + ", where the closed form is unsupported; clamping to 0.25 (Young's modulus and density kept)");
            sc_.ground.poisson = 0.25;
        }
        sc_.validate();
        fs::create_directories(c.out);
        manifest_["tool"] = {{"name", "groundsound"}, {"version", GROUNDSOUND_VERSION}};
        manifest_["command"] = command_;
        manifest_["scenario_path"] = c.scenario;
        manifest_["overrides"] = c.sets;
        manifest_["material_database"] = std::getenv("GROUNDSOUND_MATERIALS") ? std::getenv("GROUNDSOUND_MATERIALS")
                                                                               : "builtin";
        manifest_["scenario"] = scenario_json(sc_);
        hs_ = gs::derive_halfspace(sc_.ground);
        events_ = gs::hertz_events(sc_);
        manifest_["halfspace"] = halfspace_json(hs_);
        json evs = json::array();
        for (const auto& ev : events_)
            evs.push_back(event_json(ev));
        manifest_["events"] = evs;
        manifest_["warnings"] = json::array();
        for (const auto& w : pending_warnings_)
            manifest_["warnings"].push_back(w);
        manifest_["outputs"] = json::array();
    }

    ~Run() = default;

    const gs::ScenarioConfig& scenario() const { return sc_; }
    gs::ScenarioConfig& scenario_mut() { return sc_; }
    const gs::HalfspaceParams& halfspace() const { return hs_; }
    const std::vector<gs::ContactEvent>& events() const { return events_; }
    const gs::MaterialDb& db() const { return db_; }
    json& results() { return manifest_["results"]; }
    json& manifest() { return manifest_; }

    std::string path(const std::string& name)
    {
        manifest_["outputs"].push_back(name);
        return (fs::path(common_.out) / name).string();
    }

    void warn(const std::string& msg)
    {
        std::cerr << "warning: " << msg << '\n';
        if (manifest_.contains("warnings"))
            manifest_["warnings"].push_back(msg);
        else
            pending_warnings_.push_back(msg);
    }

    void write_manifest()
    {
        std::ofstream(fs::path(common_.out) / "manifest.json") << manifest_.dump(2) << '\n';
    }

    /// WAVs at the output rate, one per trace, sharing a common pascal scale.
    void write_wavs(const std::vector<std::pair<std::string, gs::PressureTrace>>& traces)
    {
        if (!sc_.output.wav)
            return;
        double peak = 0.0;
        std::vector<gs::PressureTrace> resampled;
        for (const auto& [name, tr] : traces) {
            resampled.push_back(gs::resample(tr, gs::covering_window(tr, sc_.output.sample_rate)));
            peak = std::max(peak, resampled.back().peak());
        }
        for (std::size_t i = 0; i < traces.size(); ++i) {
            const double level = peak > 0.0 ? resampled[i].peak() / peak : 1.0;
            gs::write_wav(path(traces[i].first + ".wav"), resampled[i], level);
        }
    }

    gs::TraceWindow window(const std::vector<gs::Vec3>& listeners) const
    {
        return gs::analysis_window(events_, listeners, sc_.air, gs::default_analysis_rate(events_, sc_.radiation),
                                   sc_.output.duration);
    }

private:
    std::string command_;
    Common common_;
    gs::MaterialDb db_;
    gs::ScenarioConfig sc_;
    gs::HalfspaceParams hs_;
    std::vector<gs::ContactEvent> events_;
    json manifest_;
    std::vector<std::string> pending_warnings_;
};

std::string listener_name(const char* prefix, std::size_t i)
{
    return std::string(prefix) + "_" + std::to_string(i);
}

gs::PressureTrace ground_trace(const Run& run, const gs::Vec3& listener, const gs::TraceWindow& w, json* diag_out)
{
    gs::PressureTrace total(w);
    json diags = json::array();
    for (const auto& ev : run.events()) {
        gs::RayleighDiagnostics d;
        total += gs::rayleigh_ground_pressure(ev, run.halfspace(), listener, w, run.scenario().air,
                                              run.scenario().radiation, &d);
        for (const auto& msg : d.warnings)
            std::cerr << "warning: " << msg << '\n';
        diags.push_back({{"nodes", d.nodes},
                         {"evaluations", d.evaluations},
                         {"max_radius", d.max_radius},
                         {"required_radius", d.required_radius},
                         {"radial_spacing", d.radial_spacing},
                         {"outer_energy_fraction", d.outer_energy_fraction},
                         {"warnings", d.warnings}});
    }
    if (diag_out)
        *diag_out = diags;
    return total;
}

gs::PressureTrace ball_trace(const Run& run, const gs::Vec3& listener, const gs::TraceWindow& w)
{
    gs::PressureTrace total(w);
    for (const auto& ev : run.events())
        total += gs::ball_dipole_pressure(ev, listener, w, run.scenario().air, run.scenario().radiation.ball_reflective);
    return total;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_validate(Run& run)
{
    const auto& sc = run.scenario();
    std::printf("scenario ok: %s on %s, %zu impact(s), %zu listening point(s)\n", sc.object.name.c_str(),
                sc.ground.name.c_str(), run.events().size(), sc.listening_points.size());
    const auto& hs = run.halfspace();
    std::printf("ground: c_p %.6g m/s  c_s %.6g m/s  c_r %.6g m/s  gamma %.9g\n", hs.c_p, hs.c_s, hs.c_r(), hs.gamma);
    for (const auto& ev : run.events())
        std::printf("impact t=%.6g s: v_n %.6g m/s  t_c %.6g s  eps %.6g m  J %.6g N s\n", ev.impact_time,
                    ev.normal_velocity, ev.timescale, ev.epsilon, ev.impulse);
    return 0;
}

int cmd_contact(Run& run)
{
    std::vector<std::vector<double>> cols(1 + 2 * run.events().size());
    std::vector<std::string> header{"t"};
    double t0 = std::numeric_limits<double>::infinity(), t1 = -t0, tau = 0.0;
    for (const auto& ev : run.events()) {
        t0 = std::min(t0, ev.impact_time - 10.0 * ev.kernel_time());
        t1 = std::max(t1, ev.impact_time + 10.0 * ev.kernel_time());
        tau = std::max(tau, ev.kernel_time());
    }
    const double dt = tau / 50.0;
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt)) + 1;
    for (std::size_t e = 0; e < run.events().size(); ++e) {
        header.push_back("force_" + std::to_string(e));
        header.push_back("ball_acceleration_" + std::to_string(e));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        cols[0].push_back(t);
        for (std::size_t e = 0; e < run.events().size(); ++e) {
            cols[1 + 2 * e].push_back(gs::ground_force_profile(run.events()[e], t));
            cols[2 + 2 * e].push_back(gs::ball_acceleration(run.events()[e], t));
        }
    }
    gs::write_csv(run.path("contact.csv"), header, cols);
    for (const auto& ev : run.events())
        std::printf("t_c %.6g s  eps %.6g m  J %.6g N s  m %.6g kg  E* %.6g Pa  contact radius %.6g m\n",
                    ev.timescale, ev.epsilon, ev.impulse, ev.mass, ev.effective_stiffness, ev.contact_radius);
    return 0;
}

int cmd_response(Run& run, double radius, double t_end, int samples, bool exact)
{
    const auto& ev = run.events().front();
    const gs::RegularizedField f(run.halfspace(), ev.epsilon);
    const auto wf = gs::wavefront_times(run.halfspace(), radius);
    if (t_end <= 0.0)
        t_end = 3.0 * wf.t_r;
    if (samples < 2)
        throw gs::ConfigError("response: --samples must be at least 2");
    std::vector<std::string> header{"t", "u_eps", "w_eps", "dw_eps", "a_eps"};
    if (exact)
        header.push_back("u_exact");
    std::vector<std::vector<double>> cols(header.size());
    for (int i = 0; i < samples; ++i) {
        const double t = t_end * i / (samples - 1);
        const auto e = gs::evaluate(f, radius, t);
        cols[0].push_back(t);
        cols[1].push_back(e.u);
        cols[2].push_back(e.w);
        cols[3].push_back(e.v);
        cols[4].push_back(e.a);
        if (exact)
            cols[5].push_back(gs::pekeris_displacement(run.halfspace(), radius, t));
    }
    gs::write_csv(run.path("response.csv"), header, cols);
    run.results() = {{"radius", radius},
                     {"epsilon", ev.epsilon},
                     {"t_p", wf.t_p},
                     {"t_s", wf.t_s},
                     {"t_r", wf.t_r},
                     {"samples", samples},
                     {"units", "per unit impulse: u in m/(N s), w in m/(N s^2), dw in m/(N s^3), a in m/(N s^3)"}};
    std::printf("response at r = %.6g m: t_p %.6g s  t_s %.6g s  t_r %.6g s\n", radius, wf.t_p, wf.t_s, wf.t_r);
    return 0;
}

int cmd_sources(Run& run, bool ground, bool ball)
{
    const auto& sc = run.scenario();
    const auto w = run.window(sc.listening_points);
    std::vector<gs::PressureTrace> traces;
    std::vector<std::string> names;
    std::vector<std::pair<std::string, gs::PressureTrace>> wavs;
    json per = json::array();
    for (std::size_t i = 0; i < sc.listening_points.size(); ++i) {
        const auto& L = sc.listening_points[i];
        json entry = {{"listener", vec(L)}};
        gs::PressureTrace g, b;
        if (ground) {
            json diag;
            g = ground_trace(run, L, w, &diag);
            entry["ground_energy"] = g.energy();
            entry["ground_peak"] = g.peak();
            entry["rayleigh"] = diag;
            names.push_back(listener_name("ground", i));
            traces.push_back(g);
            wavs.emplace_back(names.back(), g);
        }
        if (ball) {
            b = ball_trace(run, L, w);
            entry["ball_energy"] = b.energy();
            entry["ball_peak"] = b.peak();
            names.push_back(listener_name("ball", i));
            traces.push_back(b);
            wavs.emplace_back(names.back(), b);
        }
        if (ground && ball) {
            const double db = gs::intensity_db(g, b);
            entry["ground_over_ball_db"] = db;
            std::printf("listener %zu (%g, %g, %g): ground %+.2f dB relative to ball\n", i, L.x, L.y, L.z, db);
            gs::PressureTrace sum = g;
            sum += b;
            wavs.emplace_back(listener_name("combined", i), sum);
        } else {
            const auto& t = ground ? g : b;
            std::printf("listener %zu (%g, %g, %g): peak %.6g Pa, energy %.6g Pa^2 s\n", i, L.x, L.y, L.z, t.peak(),
                        t.energy());
        }
        per.push_back(entry);
    }
    const std::string stem = ground && ball ? "compare" : ground ? "rayleigh" : "ball";
    gs::write_traces_csv(run.path(stem + ".csv"), names, traces);
    run.write_wavs(wavs);
    run.results() = {{"window", {{"start_time", w.start_time}, {"sample_rate", w.sample_rate}, {"count", w.count}}},
                     {"listeners", per}};
    return 0;
}

gs::PoissonOverride parse_rule(const std::string& s)
{
    if (s == "keep-speed")
        return gs::PoissonOverride::KeepSpeed;
    if (s == "keep-youngs")
        return gs::PoissonOverride::KeepYoungs;
    if (s == "keep-shear")
        return gs::PoissonOverride::KeepShear;
    throw gs::ConfigError("matrix: unknown --rule '" + s + "' (keep-speed, keep-youngs, keep-shear)");
}

int cmd_matrix(Run& run, std::vector<std::string> balls, std::vector<std::string> grounds, const std::string& rule,
               double contact_time)
{
    if (balls.empty())
        for (const auto& m : run.db().all())
            balls.push_back(m.name);
    if (grounds.empty())
        grounds = balls;
    std::vector<gs::Material> bm, gm;
    for (const auto& n : balls)
        bm.push_back(run.db().at(n));
    for (const auto& n : grounds)
        gm.push_back(run.db().at(n));
    gs::MaterialMatrixOptions opt;
    opt.rule = parse_rule(rule);
    opt.contact_time = contact_time;
    const auto m = gs::material_matrix(run.scenario(), bm, gm, opt);

    std::vector<std::string> header{"ball"};
    for (const auto& g : m.grounds)
        header.push_back(g);
    for (const auto& g : m.grounds)
        header.push_back(g + "_class");
    std::ofstream out(run.path("matrix.csv"));
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << '\n';
    json rows = json::object();
    for (std::size_t b = 0; b < m.balls.size(); ++b) {
        out << m.balls[b];
        for (std::size_t g = 0; g < m.grounds.size(); ++g)
            out << ',' << gs::format_number(m.db[b][g]);
        for (std::size_t g = 0; g < m.grounds.size(); ++g)
            out << ',' << (m.louder(b, g) ? "louder" : m.audible(b, g) ? "audible" : "masked");
        out << '\n';
        rows[m.balls[b]] = m.db[b];
    }
    run.results() = {{"contact_time", opt.contact_time},
                     {"poisson", opt.poisson},
                     {"rule", rule},
                     {"louder_db", opt.louder_db},
                     {"audible_db", opt.audible_db},
                     {"grounds", m.grounds},
                     {"db", rows}};
    std::printf("%-10s", "ball\\gnd");
    for (const auto& g : m.grounds)
        std::printf("%10s", g.substr(0, 9).c_str());
    std::printf("\n");
    for (std::size_t b = 0; b < m.balls.size(); ++b) {
        std::printf("%-10s", m.balls[b].substr(0, 9).c_str());
        for (std::size_t g = 0; g < m.grounds.size(); ++g)
            std::printf("%10.2f", m.db[b][g]);
        std::printf("\n");
    }
    return 0;
}

int cmd_sweep(Run& run, const std::string& kind, double distance)
{
    gs::SweepResult r;
    if (kind == "cs") {
        r = gs::sweep_shear_speed(run.scenario(), {});
    } else if (kind == "tc") {
        r = gs::sweep_contact_time(run.scenario(), {});
    } else if (kind == "angle") {
        gs::AngleSweep spec;
        spec.distance = distance;
        r = gs::sweep_angle(run.scenario(), spec);
    } else {
        throw gs::ConfigError("sweep: unknown --kind '" + kind + "' (cs, tc, angle)");
    }
    std::vector<double> db;
    for (const auto& p : r.points)
        db.push_back(p.db());
    gs::write_csv(run.path("sweep_" + kind + ".csv"), {r.axis, "ground_energy", "ball_energy", "db"},
                  {r.xs(), r.ground(), r.ball(), db});
    json summary = json::object();
    for (const auto& [k, v] : r.summary) {
        summary[k] = v;
        std::printf("%s = %.6g\n", k.c_str(), v);
    }
    run.results() = {{"kind", kind}, {"axis", r.axis}, {"summary", summary}};
    return 0;
}

int cmd_fdtd(Run& run)
{
    const auto& sc = run.scenario();
    const int every = sc.fdtd.snapshot_every;
    int snaps = 0;
    std::function<void(const gs::WaveGrid&)> hook;
    if (every > 0) {
        fs::create_directories(fs::path(run.path("snapshots")));
        const double z = sc.listening_points.front().z;
        hook = [&](const gs::WaveGrid& g) {
            if (g.steps() % static_cast<std::size_t>(every) != 0)
                return;
            char name[64];
            std::snprintf(name, sizeof name, "snapshots/p_%06zu.f32", g.steps());
            gs::write_snapshot(run.path(name), g, g.slice_index(z));
            ++snaps;
        };
    }
    const auto res = gs::run_scene(sc, hook);
    std::vector<std::string> names;
    std::vector<gs::PressureTrace> traces;
    std::vector<std::pair<std::string, gs::PressureTrace>> wavs;
    json per = json::array();
    for (std::size_t i = 0; i < res.combined.size(); ++i) {
        names.push_back(listener_name("combined", i));
        traces.push_back(res.combined[i]);
        wavs.emplace_back(names.back(), res.combined[i]);
        json entry = {{"listener", vec(sc.listening_points[i])}, {"combined_peak", res.combined[i].peak()}};
        if (!res.ground.empty()) {
            names.push_back(listener_name("ground", i));
            traces.push_back(res.ground[i]);
            wavs.emplace_back(names.back(), res.ground[i]);
            names.push_back(listener_name("ball", i));
            traces.push_back(res.ball[i]);
            wavs.emplace_back(names.back(), res.ball[i]);
            entry["ground_peak"] = res.ground[i].peak();
            entry["ball_peak"] = res.ball[i].peak();
            entry["ground_over_ball_db"] = gs::intensity_db(res.ground[i], res.ball[i]);
        }
        per.push_back(entry);
        std::printf("mic %zu: combined peak %.6g Pa\n", i, res.combined[i].peak());
    }
    gs::write_traces_csv(run.path("fdtd.csv"), names, traces);
    run.write_wavs(wavs);
    run.results() = {{"dt", res.dt}, {"steps", res.steps}, {"solid_cells", res.solid_cells}, {"snapshots", snaps},
                     {"mics", per}};
    return 0;
}

int cmd_branch_scan(Run& run, std::size_t points)
{
    const auto& ev = run.events().front();
    const auto rep = gs::branch_safety_scan(run.halfspace(), ev.epsilon, points);
    json ex = json::array();
    for (const auto& v : rep.examples)
        ex.push_back({{"condition", gs::to_string(v.condition)},
                      {"tprime", v.tprime},
                      {"s", v.s},
                      {"alpha", v.alpha},
                      {"eps", v.eps}});
    run.results() = {{"applicable", rep.applicable},
                     {"points", rep.points},
                     {"violations", rep.violations},
                     {"examples", ex}};
    if (!rep.applicable)
        std::printf("branch scan: closed form not applicable (complex Rayleigh roots)\n");
    else
        std::printf("branch scan: %zu points, %zu violations\n", rep.points, rep.violations);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"groundsound: impact sound of balls on elastic ground"};
    app.set_version_flag("--version", std::string(GROUNDSOUND_VERSION));
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", common.scenario, "scenario file")->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--set", common.sets, "override, section.key=value (repeatable)");
        sub->add_option("--threads", common.threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    };

    auto* validate = app.add_subcommand("validate", "check a scenario and print derived quantities");
    auto* contact = app.add_subcommand("contact", "Hertz contact events and force profiles");
    auto* response = app.add_subcommand("response", "regularized ground response at one radius");
    double radius = 1.0, t_end = 0.0;
    int samples = 2000;
    bool exact = false;
    response->add_option("--radius", radius, "distance from the impact, m")->check(CLI::PositiveNumber);
    response->add_option("--t-end", t_end, "end time, s (default 3 t_r)");
    response->add_option("--samples", samples, "number of time samples");
    response->add_flag("--exact", exact, "also write the unregularized displacement");
    auto* rayleigh = app.add_subcommand("rayleigh", "ground sound by the Rayleigh integral");
    auto* ball = app.add_subcommand("ball", "ball acceleration sound (dipole, image source on rigid ground)");
    auto* compare = app.add_subcommand("compare", "ground versus ball intensity in dB");
    auto* matrix = app.add_subcommand("matrix", "ball x ground intensity table");
    std::vector<std::string> balls, grounds;
    std::string rule = "keep-speed";
    double matrix_tc = 1.633e-4;
    matrix->add_option("--balls", balls, "ball materials (default: whole database)");
    matrix->add_option("--grounds", grounds, "ground materials (default: same as balls)");
    matrix->add_option("--rule", rule, "Poisson override: keep-speed, keep-youngs, keep-shear");
    matrix->add_option("--contact-time", matrix_tc, "fixed contact time, s")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep", "parameter sweeps (c_s, t_c, elevation)");
    std::string kind = "cs";
    double distance = 0.2;
    sweep->add_option("--kind", kind, "cs, tc or angle");
    sweep->add_option("--distance", distance, "listener distance for the angle sweep, m")->check(CLI::PositiveNumber);
    auto* fdtd = app.add_subcommand("fdtd", "finite-difference wavesolver scene");
    auto* branch = app.add_subcommand("branch-scan", "check the closed form's complex branch conditions");
    std::size_t points = 1000000;
    branch->add_option("--points", points, "grid points");
    for (auto* s : {validate, contact, response, rayleigh, ball, compare, matrix, sweep, fdtd, branch})
        add_common(s);

    if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
        std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        auto* sub = app.get_subcommands().front();
        Run run(sub->get_name(), common);
        int rc = 0;
        if (sub == validate)
            rc = cmd_validate(run);
        else if (sub == contact)
            rc = cmd_contact(run);
        else if (sub == response)
            rc = cmd_response(run, radius, t_end, samples, exact);
        else if (sub == rayleigh)
            rc = cmd_sources(run, true, false);
        else if (sub == ball)
            rc = cmd_sources(run, false, true);
        else if (sub == compare)
            rc = cmd_sources(run, true, true);
        else if (sub == matrix)
            rc = cmd_matrix(run, balls, grounds, rule, matrix_tc);
        else if (sub == sweep)
            rc = cmd_sweep(run, kind, distance);
        else if (sub == fdtd)
            rc = cmd_fdtd(run);
        else if (sub == branch)
            rc = cmd_branch_scan(run, points);
        run.write_manifest();
        return rc;
    } catch (const gs::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const gs::UnsupportedRegime& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const gs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
