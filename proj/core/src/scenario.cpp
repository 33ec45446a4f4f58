#include "bisar/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "bisar/errors.hpp"

namespace bisar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ctx, const std::string& what)
{
    throw ValidationError(ctx + ": " + what);
}

const json& require_key(const json& obj, const std::string& key, const std::string& ctx)
{
    if (!obj.is_object())
        fail(ctx, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        fail(ctx + "." + key, "missing required field");
    return *it;
}

double as_number(const json& v, const std::string& ctx)
{
    if (!v.is_number())
        fail(ctx, "expected a number");
    return v.get<double>();
}

double number_field(const json& obj, const std::string& key, const std::string& ctx)
{
    return as_number(require_key(obj, key, ctx), ctx + "." + key);
}

double number_or(const json& obj, const std::string& key, const std::string& ctx, double fallback)
{
    if (!obj.is_object() || !obj.contains(key))
        return fallback;
    return as_number(obj.at(key), ctx + "." + key);
}

bool bool_or(const json& obj, const std::string& key, const std::string& ctx, bool fallback)
{
    if (!obj.is_object() || !obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        fail(ctx + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string string_field(const json& obj, const std::string& key, const std::string& ctx)
{
    const json& v = require_key(obj, key, ctx);
    if (!v.is_string())
        fail(ctx + "." + key, "expected a string");
    return v.get<std::string>();
}

std::string string_or(const json& obj, const std::string& key, const std::string& ctx,
                      const std::string& fallback)
{
    if (!obj.is_object() || !obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        fail(ctx + "." + key, "expected a string");
    return v.get<std::string>();
}

std::size_t index_field(const json& obj, const std::string& key, const std::string& ctx)
{
    const double v = number_field(obj, key, ctx);
    if (v < 0.0 || v != std::floor(v))
        fail(ctx + "." + key, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

// Geometry scalar given as `<base>_m` or `<base>_km` (exactly one).
struct LengthKey {
    const json* value = nullptr;
    double scale = 1.0;
    std::string ctx;
};

LengthKey find_length_key(const json& obj, const std::string& base, const std::string& ctx)
{
    const bool has_m = obj.is_object() && obj.contains(base + "_m");
    const bool has_km = obj.is_object() && obj.contains(base + "_km");
    if (has_m && has_km)
        fail(ctx + "." + base, "give either " + base + "_m or " + base + "_km, not both");
    if (has_m)
        return {&obj.at(base + "_m"), 1.0, ctx + "." + base + "_m"};
    if (has_km)
        return {&obj.at(base + "_km"), 1000.0, ctx + "." + base + "_km"};
    return {};
}

double length_field(const json& obj, const std::string& base, const std::string& ctx)
{
    const LengthKey k = find_length_key(obj, base, ctx);
    if (!k.value)
        fail(ctx + "." + base + "_m", "missing required field (or " + base + "_km)");
    return as_number(*k.value, k.ctx) * k.scale;
}

std::vector<double> length_array(const json& obj, const std::string& base, const std::string& ctx,
                                 std::size_t min_size, std::size_t max_size)
{
    const LengthKey k = find_length_key(obj, base, ctx);
    if (!k.value)
        fail(ctx + "." + base + "_m", "missing required field (or " + base + "_km)");
    if (!k.value->is_array() || k.value->size() < min_size || k.value->size() > max_size)
        fail(k.ctx, "expected an array of " + std::to_string(min_size) +
                        (max_size > min_size ? ".." + std::to_string(max_size) : "") + " numbers");
    std::vector<double> out;
    out.reserve(k.value->size());
    for (std::size_t i = 0; i < k.value->size(); ++i)
        out.push_back(as_number(k.value->at(i), k.ctx + "[" + std::to_string(i) + "]") * k.scale);
    return out;
}

Vec3 point3_field(const json& obj, const std::string& base, const std::string& ctx)
{
    const std::vector<double> v = length_array(obj, base, ctx, 3, 3);
    return {v[0], v[1], v[2]};
}

Vec3 velocity_field(const json& obj, const std::string& key, const std::string& ctx)
{
    const json& v = require_key(obj, key, ctx);
    if (!v.is_array() || v.size() != 3)
        fail(ctx + "." + key, "expected an array of 3 numbers");
    return {as_number(v[0], ctx + "." + key + "[0]"), as_number(v[1], ctx + "." + key + "[1]"),
            as_number(v[2], ctx + "." + key + "[2]")};
}

TerrainModel parse_terrain(const json& t, const std::filesystem::path& base_dir)
{
    const std::string ctx = "terrain";
    if (t.contains("grid_file")) {
        std::filesystem::path file = string_field(t, "grid_file", ctx);
        if (file.is_relative())
            file = base_dir / file;
        return TerrainModel::load_ascii_grid(file);
    }
    if (t.contains("grid")) {
        const json& g = t.at("grid");
        const std::string gctx = ctx + ".grid";
        const std::vector<double> origin = length_array(g, "origin", gctx, 2, 2);
        const double spacing = length_field(g, "spacing", gctx);
        const std::size_t cols = index_field(g, "cols", gctx);
        const std::size_t rows = index_field(g, "rows", gctx);
        const json& h = require_key(g, "heights_m", gctx);
        if (!h.is_array())
            fail(gctx + ".heights_m", "expected an array of numbers");
        std::vector<double> heights;
        heights.reserve(h.size());
        for (std::size_t i = 0; i < h.size(); ++i)
            heights.push_back(as_number(h[i], gctx + ".heights_m[" + std::to_string(i) + "]"));
        return TerrainModel(origin[0], origin[1], spacing, cols, rows, std::move(heights));
    }

    // Synthetic terrain: base height plus hills over a rectangular extent.
    const double base = length_field(t, "base", ctx);
    const std::vector<double> extent = length_array(t, "extent", ctx, 2, 2);
    const double spacing = length_field(t, "spacing", ctx);
    std::vector<HillSpec> hills;
    if (t.contains("hills")) {
        const json& hs = t.at("hills");
        if (!hs.is_array())
            fail(ctx + ".hills", "expected an array");
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const std::string hctx = ctx + ".hills[" + std::to_string(i) + "]";
            const json& h = hs[i];
            HillSpec spec;
            const std::vector<double> c = length_array(h, "center", hctx, 2, 2);
            spec.center_x = c[0];
            spec.center_y = c[1];
            spec.radius = length_field(h, "radius", hctx);
            spec.peak_height = length_field(h, "peak_height", hctx);
            const std::string profile = string_or(h, "profile", hctx, "cone");
            if (profile == "cone")
                spec.profile = HillProfile::cone;
            else if (profile == "gaussian")
                spec.profile = HillProfile::gaussian;
            else
                fail(hctx + ".profile", "expected \"cone\" or \"gaussian\", got \"" + profile + "\"");
            hills.push_back(spec);
        }
    }
    return TerrainModel::synthesize(base, extent[0], extent[1], spacing, hills);
}

FlightPath parse_path_entry(const json& p, const std::string& ctx, const json& route,
                            double default_speed)
{
    const std::string type = string_field(p, "type", ctx);
    const double speed = number_or(p, "speed_mps", ctx, default_speed);
    // Only paths without their own per-waypoint speeds need the scalar.
    const auto require_speed = [&] {
        if (speed <= 0.0)
            fail(ctx + ".speed_mps", "no positive speed given (set route.speed_mps or per-path "
                                     "speed_mps)");
    };

    if (type == "waypoints") {
        const LengthKey k = find_length_key(p, "points", ctx);
        if (!k.value)
            fail(ctx + ".points_m", "missing required field (or points_km)");
        if (!k.value->is_array() || k.value->size() < 2)
            fail(k.ctx, "expected an array of at least 2 [x, y, z] points");
        FlightPath path;
        for (std::size_t i = 0; i < k.value->size(); ++i) {
            const json& pt = k.value->at(i);
            const std::string pctx = k.ctx + "[" + std::to_string(i) + "]";
            if (!pt.is_array() || pt.size() != 3)
                fail(pctx, "expected [x, y, z]");
            path.points.push_back(Vec3{as_number(pt[0], pctx) * k.scale,
                                       as_number(pt[1], pctx) * k.scale,
                                       as_number(pt[2], pctx) * k.scale});
        }
        if (p.contains("speeds_mps")) {
            const json& sp = p.at("speeds_mps");
            if (!sp.is_array() || sp.size() != path.points.size())
                fail(ctx + ".speeds_mps", "expected one speed per waypoint");
            for (std::size_t i = 0; i < sp.size(); ++i)
                path.speeds.push_back(as_number(sp[i], ctx + ".speeds_mps[" +
                                                            std::to_string(i) + "]"));
        } else {
            require_speed();
            path.speeds.assign(path.points.size(), speed);
        }
        validate(path);
        return path;
    }
    require_speed();

    // Generated shapes take their endpoints from the path entry when given,
    // otherwise from the shared route block.
    const auto endpoint = [&](const std::string& base) {
        if (find_length_key(p, base, ctx).value)
            return point3_field(p, base, ctx);
        if (route.is_object() && find_length_key(route, base, "route").value)
            return point3_field(route, base, "route");
        fail(ctx + "." + base + "_m", "missing endpoint (set it here or in the route block)");
    };
    const Vec3 start = endpoint("start");
    const Vec3 end = endpoint("end");
    const auto n = static_cast<std::size_t>(number_or(p, "n", ctx, 200.0));

    if (type == "line")
        return make_line_path(start, end, n, speed);
    if (type == "arc") {
        const double bulge = length_field(p, "bulge", ctx);
        const std::string plane = string_field(p, "plane", ctx);
        ArcPlane arc_plane;
        if (plane == "horizontal")
            arc_plane = ArcPlane::horizontal;
        else if (plane == "vertical")
            arc_plane = ArcPlane::vertical;
        else
            fail(ctx + ".plane", "expected \"horizontal\" or \"vertical\", got \"" + plane + "\"");
        return make_arc_path(start, end, bulge, arc_plane, n, speed);
    }
    fail(ctx + ".type", "expected \"line\", \"arc\" or \"waypoints\", got \"" + type + "\"");
}

} // namespace

ScenarioSpec parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir)
{
    json root;
    try {
        // Scenario files may carry // comments documenting assumptions.
        root = json::parse(json_text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ValidationError("scenario JSON: top level must be an object");

    ScenarioSpec spec(parse_terrain(require_key(root, "terrain", "scenario"), base_dir));
    spec.name = string_or(root, "name", "scenario", "scenario");

    {
        const json& p = require_key(root, "platform", "scenario");
        const std::string ctx = "platform";
        spec.platform.mass = number_field(p, "mass_kg", ctx);
        spec.platform.gravity = number_or(p, "gravity_mps2", ctx, 9.81);
        spec.platform.drag_c1 = number_field(p, "drag_c1", ctx);
        spec.platform.drag_c2 = number_field(p, "drag_c2", ctx);
        spec.platform.v_min = number_field(p, "v_min_mps", ctx);
        spec.platform.v_max = number_field(p, "v_max_mps", ctx);
        spec.platform.a_max = number_or(p, "a_max_mps2", ctx, 1.0e3);
        spec.energy.clamp_regeneration = bool_or(p, "clamp_regeneration", ctx, false);
        if (spec.platform.mass <= 0.0)
            fail(ctx + ".mass_kg", "must be positive");
        if (spec.platform.gravity <= 0.0)
            fail(ctx + ".gravity_mps2", "must be positive");
        if (spec.platform.v_min <= 0.0 || spec.platform.v_max < spec.platform.v_min)
            fail(ctx, "need 0 < v_min_mps <= v_max_mps");
    }

    {
        const json& il = require_key(root, "illuminator", "scenario");
        const std::string ctx = "illuminator";
        spec.illuminator.ref_position = point3_field(il, "position", ctx);
        spec.illuminator.ref_velocity = velocity_field(il, "velocity_mps", ctx);
        spec.illuminator.ref_time = number_or(il, "ref_time_s", ctx, 0.0);
    }

    {
        const json& r = require_key(root, "radar", "scenario");
        const std::string ctx = "radar";
        spec.radar.wavelength = length_field(r, "wavelength", ctx);
        spec.radar.bandwidth = number_field(r, "bandwidth_hz", ctx);
        spec.radar.prf = number_field(r, "prf_hz", ctx);
        spec.radar.sample_rate = number_field(r, "sample_rate_hz", ctx);
        spec.radar.aperture_time = number_field(r, "aperture_time_s", ctx);
        spec.radar.bits_per_sample = static_cast<int>(number_or(r, "bits_per_sample", ctx, 128.0));
    }

    {
        const json& s = require_key(root, "scene", "scenario");
        const std::string ctx = "scene";
        const std::vector<double> c = length_array(s, "center", ctx, 2, 3);
        spec.scene.center = Vec3{c[0], c[1], 0.0};
        // 2-component centres sit on the terrain surface.
        if (c.size() == 3) {
            spec.scene.center.z = c[2];
        } else {
            if (!spec.terrain.contains(c[0], c[1]))
                fail(ctx + ".center", "outside the terrain footprint, cannot derive height");
            spec.scene.center.z = spec.terrain.height_at(c[0], c[1]);
        }
        spec.scene.range_extent = length_field(s, "range_extent", ctx);
        spec.scene.azimuth_extent = length_field(s, "azimuth_extent", ctx);
        spec.scene.samples = index_field(s, "samples", ctx);
    }

    if (root.contains("aperture")) {
        const json& a = root.at("aperture");
        const std::string ctx = "aperture";
        const std::string placement = string_or(a, "placement", ctx, "nearest_scene_center");
        if (placement == "nearest_scene_center") {
            spec.aperture.fixed_time = false;
        } else if (placement == "fixed_time") {
            spec.aperture.fixed_time = true;
            spec.aperture.center_time = number_field(a, "center_time_s", ctx);
        } else {
            fail(ctx + ".placement",
                 "expected \"nearest_scene_center\" or \"fixed_time\", got \"" + placement + "\"");
        }
    }

    {
        const json& c = require_key(root, "comms", "scenario");
        const std::string ctx = "comms";
        spec.comms.bandwidth = number_field(c, "bandwidth_hz", ctx);
        spec.comms.tx_power = number_field(c, "tx_power_w", ctx);
        spec.comms.ref_gain = number_field(c, "ref_gain", ctx);
        spec.comms.noise_power = number_field(c, "noise_power_w", ctx);
        spec.comms.station = point3_field(c, "station", ctx);
        if (c.contains("window")) {
            const json& w = c.at("window");
            CommWindow window;
            window.first_segment = index_field(w, "first_segment", ctx + ".window");
            window.last_segment = index_field(w, "last_segment", ctx + ".window");
            spec.comms.window = window;
        }
    }

    {
        const json& t = require_key(root, "threat", "scenario");
        const std::string ctx = "threat";
        spec.threat.safe_clearance = length_field(t, "safe_clearance", ctx);
        spec.threat.sample_step = length_field(t, "sample_step", ctx);
        spec.threat.lateral_probe = length_field(t, "lateral_probe", ctx);
    }

    {
        const json route = root.contains("route") ? root.at("route") : json();
        const double route_speed = route.is_object()
            ? number_or(route, "speed_mps", "route", 0.0) : 0.0;
        const json& ps = require_key(root, "paths", "scenario");
        if (!ps.is_array() || ps.empty())
            fail("paths", "expected a non-empty array");
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const json& p = ps[i];
            const std::string name = string_field(p, "name", "paths[" + std::to_string(i) + "]");
            const std::string ctx = "paths[" + std::to_string(i) + "](" + name + ")";
            spec.paths.push_back(NamedPath{name, parse_path_entry(p, ctx, route, route_speed)});
        }
    }

    validate_scenario(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw ValidationError("load_scenario: cannot open '" + file.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), file.parent_path());
}

void validate_scenario(const ScenarioSpec& spec)
{
    std::set<std::string> names;
    if (spec.paths.empty())
        throw ValidationError("scenario: no candidate paths");
    for (const NamedPath& np : spec.paths) {
        if (np.name.empty())
            throw ValidationError("scenario: path with empty name");
        if (!names.insert(np.name).second)
            throw ValidationError("scenario: duplicate path name '" + np.name + "'");
        validate(np.path);
        for (std::size_t i = 0; i < np.path.points.size(); ++i) {
            const Vec3& p = np.path.points[i];
            if (!spec.terrain.contains(p.x, p.y))
                throw ValidationError("scenario: path '" + np.name + "' waypoint " +
                                      std::to_string(i) + " outside the terrain footprint");
        }
    }
    if (!spec.terrain.contains(spec.comms.station.x, spec.comms.station.y))
        throw ValidationError("comms.station: outside the terrain footprint");
    if (spec.scene.samples == 0)
        throw ValidationError("scene.samples: must be positive");
    if (spec.radar.wavelength <= 0.0 || spec.radar.bandwidth <= 0.0 || spec.radar.prf <= 0.0 ||
        spec.radar.sample_rate <= 0.0 || spec.radar.aperture_time <= 0.0 ||
        spec.radar.bits_per_sample <= 0)
        throw ValidationError("radar: all parameters must be positive");
    if (spec.comms.bandwidth <= 0.0 || spec.comms.tx_power <= 0.0 || spec.comms.ref_gain <= 0.0 ||
        spec.comms.noise_power <= 0.0)
        throw ValidationError("comms: all parameters must be positive");
    if (spec.threat.safe_clearance <= 0.0 || spec.threat.sample_step <= 0.0 ||
        spec.threat.lateral_probe < 0.0)
        throw ValidationError("threat: parameters out of range");
}

const NamedPath& find_path(const ScenarioSpec& spec, const std::string& name)
{
    for (const NamedPath& np : spec.paths) {
        if (np.name == name)
            return np;
    }
    std::string available;
    for (const NamedPath& np : spec.paths)
        available += (available.empty() ? "" : ", ") + np.name;
    throw ValidationError("unknown path '" + name + "' (available: " + available + ")");
}

std::string scenario_to_json(const ScenarioSpec& spec)
{
    json root;
    root["name"] = spec.name;

    {
        json grid;
        grid["origin_m"] = {spec.terrain.origin_x(), spec.terrain.origin_y()};
        grid["spacing_m"] = spec.terrain.spacing();
        grid["cols"] = spec.terrain.cols();
        grid["rows"] = spec.terrain.rows();
        grid["heights_m"] = spec.terrain.heights();
        root["terrain"]["grid"] = std::move(grid);
    }
    {
        json p;
        p["mass_kg"] = spec.platform.mass;
        p["gravity_mps2"] = spec.platform.gravity;
        p["drag_c1"] = spec.platform.drag_c1;
        p["drag_c2"] = spec.platform.drag_c2;
        p["v_min_mps"] = spec.platform.v_min;
        p["v_max_mps"] = spec.platform.v_max;
        p["a_max_mps2"] = spec.platform.a_max;
        p["clamp_regeneration"] = spec.energy.clamp_regeneration;
        root["platform"] = std::move(p);
    }
    {
        json il;
        il["position_m"] = {spec.illuminator.ref_position.x, spec.illuminator.ref_position.y,
                            spec.illuminator.ref_position.z};
        il["velocity_mps"] = {spec.illuminator.ref_velocity.x, spec.illuminator.ref_velocity.y,
                              spec.illuminator.ref_velocity.z};
        il["ref_time_s"] = spec.illuminator.ref_time;
        root["illuminator"] = std::move(il);
    }
    {
        json r;
        r["wavelength_m"] = spec.radar.wavelength;
        r["bandwidth_hz"] = spec.radar.bandwidth;
        r["prf_hz"] = spec.radar.prf;
        r["sample_rate_hz"] = spec.radar.sample_rate;
        r["aperture_time_s"] = spec.radar.aperture_time;
        r["bits_per_sample"] = spec.radar.bits_per_sample;
        root["radar"] = std::move(r);
    }
    {
        json s;
        s["center_m"] = {spec.scene.center.x, spec.scene.center.y, spec.scene.center.z};
        s["range_extent_m"] = spec.scene.range_extent;
        s["azimuth_extent_m"] = spec.scene.azimuth_extent;
        s["samples"] = spec.scene.samples;
        root["scene"] = std::move(s);
    }
    {
        json a;
        if (spec.aperture.fixed_time) {
            a["placement"] = "fixed_time";
            a["center_time_s"] = spec.aperture.center_time;
        } else {
            a["placement"] = "nearest_scene_center";
        }
        root["aperture"] = std::move(a);
    }
    {
        json c;
        c["bandwidth_hz"] = spec.comms.bandwidth;
        c["tx_power_w"] = spec.comms.tx_power;
        c["ref_gain"] = spec.comms.ref_gain;
        c["noise_power_w"] = spec.comms.noise_power;
        c["station_m"] = {spec.comms.station.x, spec.comms.station.y, spec.comms.station.z};
        if (spec.comms.window) {
            c["window"]["first_segment"] = spec.comms.window->first_segment;
            c["window"]["last_segment"] = spec.comms.window->last_segment;
        }
        root["comms"] = std::move(c);
    }
    {
        json t;
        t["safe_clearance_m"] = spec.threat.safe_clearance;
        t["sample_step_m"] = spec.threat.sample_step;
        t["lateral_probe_m"] = spec.threat.lateral_probe;
        root["threat"] = std::move(t);
    }
    {
        json paths = json::array();
        for (const NamedPath& np : spec.paths) {
            json p;
            p["name"] = np.name;
            p["type"] = "waypoints";
            json pts = json::array();
            for (const Vec3& pt : np.path.points)
                pts.push_back({pt.x, pt.y, pt.z});
            p["points_m"] = std::move(pts);
            p["speeds_mps"] = np.path.speeds;
            paths.push_back(std::move(p));
        }
        root["paths"] = std::move(paths);
    }
    return root.dump(2);
}

void save_scenario(const std::filesystem::path& file, const ScenarioSpec& spec)
{
    std::ofstream out(file);
    if (!out)
        throw ValidationError("save_scenario: cannot open '" + file.string() + "'");
    out << scenario_to_json(spec) << '\n';
    if (!out)
        throw EvaluationError("save_scenario: write failed");
}

} // namespace bisar
