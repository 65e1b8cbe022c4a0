#include "paraset/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace paraset {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_real(const Json& j) {
    if (j.is_string()) return std::strtod(j.get<std::string>().c_str(), nullptr);
    return j.get<double>();
}

namespace {

Json real(double v) { return format_real(v); }

Json vec_json(Vec2 v) { return Json::array({real(v.x), real(v.y)}); }
Vec2 vec_from(const Json& j) { return {parse_real(j.at(0)), parse_real(j.at(1))}; }

Json prim_to_json(const Primitive2D& p) {
    Json j;
    if (const auto* r = std::get_if<RectPrim>(&p)) {
        j["kind"] = "rectangle";
        j["xmin"] = real(r->box.xmin);
        j["xmax"] = real(r->box.xmax);
        j["ymin"] = real(r->box.ymin);
        j["ymax"] = real(r->box.ymax);
    } else if (const auto* d = std::get_if<DiskPrim>(&p)) {
        j["kind"] = "disk";
        j["center"] = vec_json(d->center);
        j["radius"] = real(d->radius);
    } else if (const auto* s = std::get_if<StadiumPrim>(&p)) {
        j["kind"] = "stadium";
        j["p0"] = vec_json(s->a);
        j["p1"] = vec_json(s->b);
        j["radius"] = real(s->radius);
    } else {
        const auto& ps = std::get<PointSetPrim>(p);
        j["kind"] = "pointset";
        Json pts = Json::array();
        for (Vec2 q : ps.points) pts.push_back(vec_json(q));
        j["points"] = pts;
    }
    return j;
}

Primitive2D prim_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "rectangle")
        return RectPrim{{parse_real(j.at("xmin")), parse_real(j.at("xmax")), parse_real(j.at("ymin")),
                         parse_real(j.at("ymax"))}};
    if (kind == "disk") return DiskPrim{vec_from(j.at("center")), parse_real(j.at("radius"))};
    if (kind == "stadium")
        return StadiumPrim{vec_from(j.at("p0")), vec_from(j.at("p1")), parse_real(j.at("radius"))};
    if (kind == "pointset") {
        PointSetPrim ps;
        for (const Json& q : j.at("points")) ps.points.push_back(vec_from(q));
        return ps;
    }
    fail(Errc::UnknownKind, "unknown primitive kind: " + kind);
}

Json interval_json(const Interval& iv) { return Json::array({real(iv.lo), real(iv.hi)}); }

}  // namespace

Json geometry_to_json(const Geometry2D& g) {
    Json j;
    switch (g.kind()) {
        case Geometry2D::Kind::Leaf:
            j = prim_to_json(g.leaf_prim());
            break;
        case Geometry2D::Kind::Union: {
            j["kind"] = "union";
            Json kids = Json::array();
            for (const Geometry2D& c : g.children()) kids.push_back(geometry_to_json(c));
            j["children"] = kids;
            break;
        }
        case Geometry2D::Kind::Difference: {
            j["kind"] = "difference";
            j["base"] = prim_to_json(g.base());
            Json rem = Json::array();
            for (const Primitive2D& r : g.removed()) rem.push_back(prim_to_json(r));
            j["removed"] = rem;
            break;
        }
    }
    return j;
}

Geometry2D geometry_from_json(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "union") {
        std::vector<Geometry2D> kids;
        for (const Json& c : j.at("children")) kids.push_back(geometry_from_json(c));
        return Geometry2D::unite(std::move(kids));
    }
    if (kind == "difference") {
        std::vector<Primitive2D> rem;
        for (const Json& r : j.at("removed")) rem.push_back(prim_from_json(r));
        return Geometry2D::difference(prim_from_json(j.at("base")), std::move(rem));
    }
    return Geometry2D::leaf(prim_from_json(j));
}

Json set1d_to_json(const Set1D& a) {
    Json j;
    j["kind"] = "set1d";
    Json pts = Json::array();
    for (double p : a.points) pts.push_back(real(p));
    j["points"] = pts;
    Json ivs = Json::array();
    for (const Interval& iv : a.intervals) ivs.push_back(interval_json(iv));
    j["intervals"] = ivs;
    return j;
}

Set1D set1d_from_json(const Json& j) {
    Set1D a;
    for (const Json& p : j.at("points")) a.points.push_back(parse_real(p));
    if (j.contains("intervals"))
        for (const Json& iv : j.at("intervals"))
            a.intervals.push_back({parse_real(iv.at(0)), parse_real(iv.at(1))});
    a.validate();
    return a;
}

Json target_radii_to_json(const TargetRadii& n) {
    Json j;
    Json vals = Json::array();
    for (double v : n.values) vals.push_back(real(v));
    j["values"] = vals;
    Json extra = Json::array();
    for (double v : n.closure_extra) extra.push_back(real(v));
    j["closure_extra"] = extra;
    j["origin_accumulates"] = n.origin_accumulates;
    if (const auto* g = std::get_if<TargetRadii::CantorGen>(&n.generator)) {
        j["generator"] = {{"kind", "cantor_endpoints"}, {"q", real(g->q)}};
        j["depth"] = n.default_depth;
    } else if (const auto* g2 = std::get_if<TargetRadii::RearrangedGen>(&n.generator)) {
        j["generator"] = {{"kind", "rearranged_endpoints"}, {"q", real(g2->q)}};
        j["depth"] = n.default_depth;
    }
    return j;
}

TargetRadii target_radii_from_json(const Json& j) {
    TargetRadii n;
    for (const Json& v : j.at("values")) n.values.push_back(parse_real(v));
    if (j.contains("closure_extra"))
        for (const Json& v : j.at("closure_extra")) n.closure_extra.push_back(parse_real(v));
    if (j.contains("origin_accumulates")) n.origin_accumulates = j.at("origin_accumulates").get<bool>();
    if (j.contains("generator")) {
        const Json& g = j.at("generator");
        std::string kind = g.at("kind").get<std::string>();
        if (kind == "cantor_endpoints")
            n.generator = TargetRadii::CantorGen{parse_real(g.at("q"))};
        else if (kind == "rearranged_endpoints")
            n.generator = TargetRadii::RearrangedGen{parse_real(g.at("q"))};
        else
            fail(Errc::UnknownKind, "unknown generator kind: " + kind);
        if (j.contains("depth")) n.default_depth = j.at("depth").get<int>();
    }
    n.validate();
    return n;
}

Json construction_to_json(const Construction2D& c) {
    Json j;
    j["b"] = real(c.b);
    j["eps"] = real(c.eps);
    j["gamma0"] = real(c.gamma0);
    j["rect"] = {{"xmin", real(c.rect.xmin)}, {"xmax", real(c.rect.xmax)},
                 {"ymin", real(c.rect.ymin)}, {"ymax", real(c.rect.ymax)}};
    Json table = Json::array();
    for (std::size_t i = 0; i < c.sbar.size(); ++i) {
        table.push_back({{"s", real(c.sbar[i])},
                         {"g", real(c.g[i])},
                         {"gamma", real(c.gamma[i])},
                         {"big_gamma", real(c.big_gamma[i])},
                         {"J", interval_json(c.jay[i])}});
    }
    j["g_table"] = table;
    Json realized = Json::array(), jumps = Json::array();
    for (double v : c.realized) realized.push_back(real(v));
    for (double v : c.predicted_jumps) jumps.push_back(real(v));
    j["realized"] = realized;
    j["predicted_jumps"] = jumps;
    j["tangent_to_boundary"] = c.tangent_to_boundary;
    j["geometry"] = geometry_to_json(c.geometry);
    return j;
}

Json full_construction_to_json(const FullConstruction2D& fc) {
    Json j;
    j["b"] = real(fc.b);
    j["enclosing_radius"] = real(fc.enclosing_radius);
    Json pieces = Json::array();
    for (const PackedPiece& p : fc.pieces) {
        pieces.push_back({{"band", p.band},
                          {"index", p.index},
                          {"shift", vec_json(p.shift)},
                          {"rect",
                           {{"xmin", real(p.rect.xmin)},
                            {"xmax", real(p.rect.xmax)},
                            {"ymin", real(p.rect.ymin)},
                            {"ymax", real(p.rect.ymax)}}},
                          {"construction", construction_to_json(p.sub)}});
    }
    j["pieces"] = pieces;
    Json realized = Json::array(), jumps = Json::array(), unreal = Json::array();
    for (double v : fc.realized) realized.push_back(real(v));
    for (double v : fc.predicted_jumps) jumps.push_back(real(v));
    for (double v : fc.unrealized) unreal.push_back(real(v));
    j["realized"] = realized;
    j["predicted_jumps"] = jumps;
    j["unrealized"] = unreal;
    j["geometry"] = geometry_to_json(fc.geometry);
    return j;
}

Json box_construction_to_json(const BoxConstruction& bc) {
    Json j;
    j["dim"] = bc.dim;
    j["enclosing_radius"] = real(bc.enclosing_radius);
    Json boxes = Json::array();
    for (const BoxD& b : bc.boxes) {
        Json size = Json::array(), shift = Json::array(), crit = Json::array();
        for (double v : b.size) size.push_back(real(v));
        for (double v : b.shift) shift.push_back(real(v));
        for (const Interval& iv : b.critical_cube) crit.push_back(interval_json(iv));
        boxes.push_back({{"s", real(b.s)}, {"size", size}, {"shift", shift}, {"critical_cube", crit}});
    }
    j["boxes"] = boxes;
    if (bc.geometry2d) j["geometry"] = geometry_to_json(*bc.geometry2d);
    return j;
}

namespace {
Json ext_json(const ExtReal& e) {
    Json j;
    j["finite"] = e.finite;
    if (e.finite) j["value"] = real(e.value);
    return j;
}
const char* verdict_name(TailVerdict v) {
    switch (v) {
        case TailVerdict::Finite: return "finite";
        case TailVerdict::Infinite: return "infinite";
        default: return "inconclusive";
    }
}
}  // namespace

Json condition_report_to_json(const ConditionReport& r) {
    Json j;
    j["gap_sum_half"] = ext_json(r.gap_sum_half);
    j["lebesgue_null"] = r.lebesgue_null;
    j["integral_value"] = ext_json(r.integral_value);
    j["integral_verdict"] = verdict_name(r.integral_verdict);
    j["sum_s"] = ext_json(r.sum_s);
    j["sum_s2"] = ext_json(r.sum_s2);
    j["sum_sd"] = ext_json(r.sum_sd);
    j["dim"] = r.dim;
    j["eps"] = real(r.eps);
    j["verdict_i"] = r.verdict_i;
    j["verdict_ii"] = r.verdict_ii;
    return j;
}

Json integral_report_to_json(const IntegralReport& r) {
    Json j;
    j["value"] = real(r.value);
    j["tail_bound"] = real(r.tail_bound);
    j["verdict"] = verdict_name(r.verdict);
    j["increment_ratio"] = real(r.increment_ratio);
    Json bands = Json::array();
    for (double b : r.band_sums) bands.push_back(real(b));
    j["band_sums"] = bands;
    j["band_decay_ratio"] = real(r.band_decay_ratio);
    return j;
}

Json nondiff_report_to_json(const NondiffReport& r) {
    Json j;
    auto det_json = [](const std::vector<Detection>& v) {
        Json a = Json::array();
        for (const Detection& d : v)
            a.push_back({{"r", real(d.r)},
                         {"jump", real(d.jump)},
                         {"scale_consistency", real(d.scale_consistency)}});
        return a;
    };
    j["detected"] = det_json(r.detected);
    j["rejected_smooth"] = det_json(r.rejected_smooth);
    auto list_json = [](const std::vector<double>& v) {
        Json a = Json::array();
        for (double x : v) a.push_back(real(x));
        return a;
    };
    j["predicted"] = list_json(r.predicted);
    j["matched"] = list_json(r.matched);
    j["missed"] = list_json(r.missed);
    j["spurious"] = list_json(r.spurious);
    j["threshold"] = real(r.threshold);
    j["noise_floor"] = real(r.noise_floor);
    j["resolution"] = real(r.resolution);
    return j;
}

Json criticality_report_to_json(const CriticalityReport& r) {
    Json j;
    j["r"] = real(r.r);
    j["counts"] = {{"unique_nearest", r.unique_nearest}, {"multi", r.multi}, {"critical", r.critical}};
    j["total_mass"] = real(r.total_mass);
    j["critical_mass"] = real(r.critical_mass);
    j["non_unp_mass"] = real(r.non_unp_mass);
    j["critical_threshold"] = real(r.critical_threshold);
    j["non_unp_threshold"] = real(r.non_unp_threshold);
    j["differentiable"] = r.differentiable;
    return j;
}

Json convergence_report_to_json(const ConvergenceReport& r) {
    Json j;
    j["r0"] = real(r.r0);
    j["mass_r0"] = real(r.mass_r0);
    Json rows = Json::array();
    for (const ConvergenceRow& row : r.rows) {
        rows.push_back({{"k", row.k},
                        {"r_below", real(row.r_below)},
                        {"r_above", real(row.r_above)},
                        {"flat_below", real(row.flat_below)},
                        {"flat_above", real(row.flat_above)},
                        {"mass_below", real(row.mass_below)},
                        {"mass_above", real(row.mass_above)}});
    }
    j["rows"] = rows;
    j["eventually_decreasing_below"] = r.eventually_decreasing_below;
    j["eventually_decreasing_above"] = r.eventually_decreasing_above;
    j["final_flat_below"] = real(r.final_flat_below);
    j["final_flat_above"] = real(r.final_flat_above);
    j["final_mass_gap"] = real(r.final_mass_gap);
    return j;
}

std::string volume_csv(const VolumeSamples& vs) {
    std::ostringstream os;
    os << "r,V,err\n";
    for (std::size_t i = 0; i < vs.radii.size(); ++i)
        os << format_real(vs.radii[i]) << ',' << format_real(vs.v[i]) << ','
           << format_real(vs.err[i]) << '\n';
    return os.str();
}

std::string derivatives_csv(const VolumeSamples& vs, const std::vector<DerivativeEstimate>& es) {
    (void)vs;
    std::ostringstream os;
    os << "r,left,right,jump\n";
    for (const DerivativeEstimate& e : es)
        os << format_real(e.r) << ',' << format_real(e.left) << ',' << format_real(e.right) << ','
           << format_real(e.jump()) << '\n';
    return os.str();
}

std::string cloud_csv(const SurfaceCloud& cloud) {
    std::ostringstream os;
    os << "x,y,weight,proj_x,proj_y,multiplicity\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        os << format_real(cloud.points[i].x) << ',' << format_real(cloud.points[i].y) << ','
           << format_real(cloud.weights[i]);
        if (i < cloud.projections.size() && !cloud.projections[i].nearest.empty()) {
            os << ',' << format_real(cloud.projections[i].nearest[0].x) << ','
               << format_real(cloud.projections[i].nearest[0].y) << ','
               << cloud.projections[i].multiplicity;
        } else {
            os << ",,,";
        }
        os << '\n';
    }
    return os.str();
}

std::string tail_gap_csv(const TargetRadii& n, const std::vector<double>& radii, int depth) {
    std::ostringstream os;
    os << "r,tail_gap_sum\n";
    for (double r : radii) {
        ExtReal g = tail_gap_sum(n, r, depth);
        os << format_real(r) << ',' << (g.finite ? format_real(g.value) : "inf") << '\n';
    }
    return os.str();
}

void write_field_dump(const std::string& path, const DistanceField& f) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), Errc::IoError, "cannot open for writing: " + path);
    os.write("PSETFLD1", 8);
    std::int64_t meta[4] = {f.grid.ix0, f.grid.iy0, f.grid.nx, f.grid.ny};
    double reals[4] = {f.grid.h, f.trusted_min, f.trusted_max,
                       f.source == FieldSource::Exact ? 0.0 : 1.0};
    os.write(reinterpret_cast<const char*>(meta), sizeof(meta));
    os.write(reinterpret_cast<const char*>(reals), sizeof(reals));
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require(os.good(), Errc::IoError, "write failed: " + path);
}

DistanceField read_field_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), Errc::IoError, "cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    require(is.good() && std::string(magic, 8) == "PSETFLD1", Errc::IoError, "bad field dump header");
    std::int64_t meta[4];
    double reals[4];
    is.read(reinterpret_cast<char*>(meta), sizeof(meta));
    is.read(reinterpret_cast<char*>(reals), sizeof(reals));
    DistanceField f;
    f.grid.ix0 = static_cast<long>(meta[0]);
    f.grid.iy0 = static_cast<long>(meta[1]);
    f.grid.nx = static_cast<int>(meta[2]);
    f.grid.ny = static_cast<int>(meta[3]);
    f.grid.h = reals[0];
    f.trusted_min = reals[1];
    f.trusted_max = reals[2];
    f.source = reals[3] == 0.0 ? FieldSource::Exact : FieldSource::Grid;
    f.values.resize(f.grid.size());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    require(is.good(), Errc::IoError, "truncated field dump");
    return f;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), Errc::IoError, "cannot open for writing: " + path);
    os << content;
    require(os.good(), Errc::IoError, "write failed: " + path);
}

Json read_json_file(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), Errc::IoError, "cannot open: " + path);
    Json j;
    is >> j;
    return j;
}

}  // namespace paraset
