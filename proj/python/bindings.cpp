#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paraset/analysis.hpp"
#include "paraset/construction.hpp"
#include "paraset/json_io.hpp"

namespace py = pybind11;
using namespace paraset;

namespace {

double ext_or_inf(const ExtReal& e) {
    return e.finite ? e.value : std::numeric_limits<double>::infinity();
}

py::dict detect_dict(const NondiffReport& rep) {
    py::list det;
    for (const Detection& d : rep.detected) {
        py::dict e;
        e["r"] = d.r;
        e["jump"] = d.jump;
        det.append(e);
    }
    py::dict out;
    out["detected"] = det;
    out["threshold"] = rep.threshold;
    out["noise_floor"] = rep.noise_floor;
    return out;
}

}  // namespace

PYBIND11_MODULE(_paraset, m) {
    m.doc() = "parallel-set volume toolkit (C++ core)";

    py::class_<Geometry2D>(m, "Geometry")
        .def_static("from_json", [](const std::string& s) {
            return geometry_from_json(Json::parse(s));
        })
        .def("to_json", [](const Geometry2D& g) { return geometry_to_json(g).dump(); })
        .def("contains", [](const Geometry2D& g, double x, double y) {
            return g.contains({x, y});
        })
        .def("distance", [](const Geometry2D& g, double x, double y) {
            return g.exact_distance({x, y});
        })
        .def("bounding_box", [](const Geometry2D& g) {
            Rect b = g.bounding_box();
            return py::make_tuple(b.xmin, b.xmax, b.ymin, b.ymax);
        });

    m.def("disk", [](double cx, double cy, double r) {
        return Geometry2D::leaf(DiskPrim{{cx, cy}, r});
    });
    m.def("rect_boundary", [](double s) {
        Rect box{0, 3 * s, 0, 2 * s};
        return Geometry2D::difference(RectPrim{box}, std::vector<Primitive2D>{RectPrim{box}});
    });
    m.def("point_pair", [](double d) {
        return Geometry2D::leaf(PointSetPrim{{{-d / 2, 0.0}, {d / 2, 0.0}}});
    });

    m.def("construct_dim1", [](const std::vector<double>& radii) {
        Set1D a = construct_dim1(TargetRadii::from_values(radii));
        return a.points;
    });
    m.def("predicted_nondiff_1d", [](const std::vector<double>& points) {
        Set1D a;
        a.points = points;
        std::sort(a.points.begin(), a.points.end());
        return predicted_nondiff_1d(a);
    });
    m.def("construct_dim2", [](const std::vector<double>& radii, double gamma0) {
        GammaPolicy pol;
        pol.gamma0 = gamma0;
        Construction2D c = construct_dim2_eps(TargetRadii::from_values(radii), pol);
        py::dict out;
        out["geometry_json"] = construction_to_json(c)["geometry"].dump();
        out["realized"] = c.realized;
        out["predicted_jumps"] = c.predicted_jumps;
        return out;
    }, py::arg("radii"), py::arg("gamma0") = -1.0);

    m.def("cantor_gap_sum", [](double q, int depth, double alpha) {
        return ext_or_inf(gap_sum(cantor_gallery(q, depth).string, alpha));
    });
    m.def("cantor_closed_form", [](double q, double alpha) {
        return ext_or_inf(cantor_gallery(q, 2).closed_form_gap_sum(alpha));
    });
    m.def("integral_verdict", [](const std::string& family, double q, int depth) {
        CantorGallery g = cantor_gallery(q, depth);
        const TargetRadii& n = family == "rearranged" ? g.rearranged : g.endpoints;
        IntegralReport rep = integral_condition(n, depth, false);
        switch (rep.verdict) {
            case TailVerdict::Finite: return std::string("finite");
            case TailVerdict::Infinite: return std::string("infinite");
            default: return std::string("inconclusive");
        }
    });

    m.def("volume_1d", [](const std::vector<double>& points, double r) {
        Set1D a;
        a.points = points;
        std::sort(a.points.begin(), a.points.end());
        return volume_1d_exact(a, r);
    });
    m.def("exact_volume", [](const std::string& kind, const std::vector<double>& params, double r) {
        OracleKind k;
        if (kind == "disk")
            k = OracleKind::Disk;
        else if (kind == "two_points")
            k = OracleKind::TwoPoints;
        else if (kind == "rect_boundary")
            k = OracleKind::RectBoundary;
        else if (kind == "interval_union_1d")
            k = OracleKind::IntervalUnion1D;
        else
            fail(Errc::UnknownKind, "unknown oracle kind: " + kind);
        return exact_volume_oracle(k, params, r);
    });

    m.def("analyze", [](const Geometry2D& g, double h, double lo, double hi, double threshold) {
        DistanceField f = make_distance_field(g, h, hi + 3 * h);
        VolumeSamples vs = volume_function(f, radii_grid(lo, hi, h / 2));
        py::dict out;
        out["radii"] = vs.radii;
        out["volume"] = vs.v;
        out["nondiff"] = detect_dict(detect_nondiff(vs, threshold));
        return out;
    }, py::arg("geometry"), py::arg("h") = 0.01, py::arg("lo") = 0.1, py::arg("hi") = 1.0,
       py::arg("threshold") = 0.0);
}
